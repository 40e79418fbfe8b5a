#include "stiffstep/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace stiffstep {

SparseMatrix SparseMatrix::dia(std::size_t n, std::vector<long> offsets,
                               std::vector<std::vector<double>> bands) {
  if (offsets.size() != bands.size()) {
    throw std::invalid_argument("dia: offsets and bands differ in count");
  }
  for (std::size_t d = 0; d < offsets.size(); ++d) {
    if (bands[d].size() != n) throw std::invalid_argument("dia: band length must equal n");
    if (d > 0 && offsets[d] <= offsets[d - 1]) {
      throw std::invalid_argument("dia: offsets must be unique and sorted");
    }
    if (std::abs(offsets[d]) >= static_cast<long>(std::max<std::size_t>(n, 1))) {
      throw std::invalid_argument("dia: offset outside matrix");
    }
    // Padding positions are always stored as zeros.
    for (std::size_t i = 0; i < n; ++i) {
      const long j = static_cast<long>(i) + offsets[d];
      if (j < 0 || j >= static_cast<long>(n)) bands[d][i] = 0.0;
    }
  }
  SparseMatrix m;
  m.layout_ = Layout::dia;
  m.n_ = n;
  m.offsets_ = std::move(offsets);
  m.bands_ = std::move(bands);
  return m;
}

SparseMatrix SparseMatrix::csr(std::size_t n, std::vector<std::size_t> row_ptr,
                               std::vector<std::size_t> cols, std::vector<double> values) {
  if (row_ptr.size() != n + 1 || row_ptr.front() != 0 || row_ptr.back() != cols.size() ||
      cols.size() != values.size()) {
    throw std::invalid_argument("csr: inconsistent array sizes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) throw std::invalid_argument("csr: row_ptr not monotone");
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (cols[k] >= n) throw std::invalid_argument("csr: column index out of range");
      if (k > row_ptr[i] && cols[k] <= cols[k - 1]) {
        throw std::invalid_argument("csr: columns must be strictly increasing within a row");
      }
    }
  }
  SparseMatrix m;
  m.layout_ = Layout::csr;
  m.n_ = n;
  m.row_ptr_ = std::move(row_ptr);
  m.cols_ = std::move(cols);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries,
                                         Layout layout) {
  std::map<std::pair<std::size_t, std::size_t>, double> summed;
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n) throw std::invalid_argument("from_triplets: index out of range");
    summed[{t.row, t.col}] += t.value;
  }
  if (layout == Layout::csr) {
    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> values;
    for (const auto& [ij, v] : summed) {
      if (v == 0.0) continue;
      ++row_ptr[ij.first + 1];
      cols.push_back(ij.second);
      values.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];
    return csr(n, std::move(row_ptr), std::move(cols), std::move(values));
  }
  std::map<long, std::vector<double>> bands;
  for (const auto& [ij, v] : summed) {
    const long off = static_cast<long>(ij.second) - static_cast<long>(ij.first);
    auto& band = bands[off];
    if (band.empty()) band.assign(n, 0.0);
    band[ij.first] = v;
  }
  std::vector<long> offsets;
  std::vector<std::vector<double>> data;
  for (auto& [off, band] : bands) {
    offsets.push_back(off);
    data.push_back(std::move(band));
  }
  return dia(n, std::move(offsets), std::move(data));
}

SparseMatrix SparseMatrix::identity(std::size_t n, Layout layout) {
  if (layout == Layout::dia) return dia(n, {0}, {std::vector<double>(n, 1.0)});
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return csr(n, std::move(row_ptr), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(std::size_t n, Layout layout) {
  if (layout == Layout::dia) return dia(n, {}, {});
  return csr(n, std::vector<std::size_t>(n + 1, 0), {}, {});
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("SparseMatrix::at");
  if (layout_ == Layout::dia) {
    const long off = static_cast<long>(j) - static_cast<long>(i);
    const auto it = std::lower_bound(offsets_.begin(), offsets_.end(), off);
    if (it == offsets_.end() || *it != off) return 0.0;
    return bands_[static_cast<std::size_t>(it - offsets_.begin())][i];
  }
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

std::size_t SparseMatrix::row_nonzeros(std::size_t i) const {
  std::size_t count = 0;
  for_each_in_row(i, [&](std::size_t, double v) { count += (v != 0.0); });
  return count;
}

std::size_t SparseMatrix::max_row_nonzeros() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < n_; ++i) best = std::max(best, row_nonzeros(i));
  return best;
}

double SparseMatrix::max_abs() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for_each_in_row(i, [&](std::size_t, double v) { best = std::max(best, std::abs(v)); });
  }
  return best;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw std::invalid_argument("spmv: vector length " + std::to_string(x.size()) +
                                " does not match matrix size " + std::to_string(n_));
  }
  if (layout_ == Layout::dia) {
    const long n = static_cast<long>(n_);
    for (long i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t d = 0; d < offsets_.size(); ++d) {
        const long j = i + offsets_[d];
        if (j < 0 || j >= n) continue;
        sum += bands_[d][static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
      }
      y[static_cast<std::size_t>(i)] = sum;
    }
    return;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) sum += values_[k] * x[cols_[k]];
    y[i] = sum;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::shifted(double scale, double shift) const {
  if (layout_ == Layout::dia) {
    auto offsets = offsets_;
    auto bands = bands_;
    for (auto& band : bands) {
      for (double& v : band) v *= scale;
    }
    const auto it = std::lower_bound(offsets.begin(), offsets.end(), 0L);
    if (it == offsets.end() || *it != 0) {
      const auto pos = it - offsets.begin();
      offsets.insert(it, 0L);
      bands.insert(bands.begin() + pos, std::vector<double>(n_, 0.0));
    }
    const auto d = static_cast<std::size_t>(
        std::lower_bound(offsets.begin(), offsets.end(), 0L) - offsets.begin());
    for (double& v : bands[d]) v += shift;
    return dia(n_, std::move(offsets), std::move(bands));
  }
  std::vector<std::size_t> row_ptr(n_ + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> values;
  for (std::size_t i = 0; i < n_; ++i) {
    bool placed = false;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (!placed && cols_[k] > i) {
        cols.push_back(i);
        values.push_back(shift);
        placed = true;
      }
      const double v = scale * values_[k] + (cols_[k] == i ? shift : 0.0);
      cols.push_back(cols_[k]);
      values.push_back(v);
      placed = placed || cols_[k] == i;
    }
    if (!placed) {
      cols.push_back(i);
      values.push_back(shift);
    }
    row_ptr[i + 1] = cols.size();
  }
  return csr(n_, std::move(row_ptr), std::move(cols), std::move(values));
}

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x) {
  return m.multiply(x);
}

SparseMatrix dia_to_csr(const SparseMatrix& m) {
  if (m.layout() == SparseMatrix::Layout::csr) return m;
  const std::size_t n = m.size();
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    m.for_each_in_row(i, [&](std::size_t j, double v) {
      if (v == 0.0) return;
      cols.push_back(j);
      values.push_back(v);
    });
    row_ptr[i + 1] = cols.size();
  }
  return SparseMatrix::csr(n, std::move(row_ptr), std::move(cols), std::move(values));
}

SparseMatrix csr_to_dia(const SparseMatrix& m) {
  if (m.layout() == SparseMatrix::Layout::dia) return m;
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.for_each_in_row(i, [&](std::size_t j, double v) { entries.push_back({i, j, v}); });
  }
  return SparseMatrix::from_triplets(m.size(), std::move(entries), SparseMatrix::Layout::dia);
}

std::vector<double> abs_row_sums(const SparseMatrix& m) {
  std::vector<double> sums(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.for_each_in_row(i, [&](std::size_t, double v) { sums[i] += std::abs(v); });
  }
  return sums;
}

double max_asymmetry(const SparseMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.for_each_in_row(i, [&](std::size_t j, double v) {
      worst = std::max(worst, std::abs(v - m.at(j, i)));
    });
  }
  return worst;
}

bool same_entries(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.size() != b.size()) return false;
  const SparseMatrix ca = dia_to_csr(a);
  const SparseMatrix cb = dia_to_csr(b);
  return ca.row_ptr() == cb.row_ptr() && ca.cols() == cb.cols() && ca.values() == cb.values();
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  const SparseMatrix c = dia_to_csr(m);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << c.size() << ' ' << c.size() << ' ' << c.values().size() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t k = c.row_ptr()[i]; k < c.row_ptr()[i + 1]; ++k) {
      out << (i + 1) << ' ' << (c.cols()[k] + 1) << ' ' << c.values()[k] << '\n';
    }
  }
}

SparseMatrix read_matrix_market(std::istream& in, SparseMatrix::Layout layout) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw std::invalid_argument("matrix market: missing banner");
  }
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos) {
    throw std::invalid_argument("matrix market: only real coordinate matrices are supported");
  }
  const bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream header(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz) || rows != cols) {
    throw std::invalid_argument("matrix market: bad size line or non-square matrix");
  }
  std::vector<Triplet> entries;
  entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v) || i == 0 || j == 0) {
      throw std::invalid_argument("matrix market: bad entry " + std::to_string(k + 1));
    }
    entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::from_triplets(rows, std::move(entries), layout);
}

}  // namespace stiffstep
