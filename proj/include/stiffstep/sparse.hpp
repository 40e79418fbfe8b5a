#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace stiffstep {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square sparse matrix held either in DIA layout (sorted offsets, one padded
/// band per offset) or in CSR layout (strictly increasing columns per row).
///
/// DIA band `d` stores A(i, i + offsets[d]) at position i; positions whose
/// column falls outside the matrix hold explicit zeros. Explicit zeros take
/// part in products, so a DIA product and the CSR product of the same matrix
/// add the same terms in the same column order and agree bit for bit.
class SparseMatrix {
 public:
  enum class Layout { dia, csr };

  SparseMatrix() = default;

  static SparseMatrix dia(std::size_t n, std::vector<long> offsets,
                          std::vector<std::vector<double>> bands);
  static SparseMatrix csr(std::size_t n, std::vector<std::size_t> row_ptr,
                          std::vector<std::size_t> cols, std::vector<double> values);
  /// Duplicate (row, col) entries are summed. Entries that sum to exactly zero
  /// are dropped from CSR but kept as band storage in DIA.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries, Layout layout);
  static SparseMatrix identity(std::size_t n, Layout layout = Layout::dia);
  static SparseMatrix zero(std::size_t n, Layout layout = Layout::dia);

  Layout layout() const { return layout_; }
  std::size_t size() const { return n_; }

  double at(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  /// Calls f(col, value) for each stored entry of row i in increasing column
  /// order, padding zeros included for DIA.
  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const;

  /// Structural nonzeros (stored values different from zero) in row i.
  std::size_t row_nonzeros(std::size_t i) const;
  std::size_t max_row_nonzeros() const;
  double max_abs() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// shift * I + scale * this, layout preserved.
  SparseMatrix shifted(double scale, double shift) const;

  // DIA accessors
  const std::vector<long>& offsets() const { return offsets_; }
  const std::vector<std::vector<double>>& bands() const { return bands_; }
  // CSR accessors
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

 private:
  Layout layout_ = Layout::csr;
  std::size_t n_ = 0;
  std::vector<long> offsets_;
  std::vector<std::vector<double>> bands_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x);

/// Drops stored zeros.
SparseMatrix dia_to_csr(const SparseMatrix& m);
SparseMatrix csr_to_dia(const SparseMatrix& m);

/// Entry j is sum_i |A(j, i)|, diagonal included.
std::vector<double> abs_row_sums(const SparseMatrix& m);

/// max |A(i,j) - A(j,i)| over stored entries.
double max_asymmetry(const SparseMatrix& m);

/// Element-wise equality on the structural nonzeros, independent of layout.
bool same_entries(const SparseMatrix& a, const SparseMatrix& b);

void write_matrix_market(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_matrix_market(std::istream& in,
                                SparseMatrix::Layout layout = SparseMatrix::Layout::csr);

template <class F>
void SparseMatrix::for_each_in_row(std::size_t i, F&& f) const {
  if (layout_ == Layout::dia) {
    for (std::size_t d = 0; d < offsets_.size(); ++d) {
      const long j = static_cast<long>(i) + offsets_[d];
      if (j < 0 || j >= static_cast<long>(n_)) continue;
      f(static_cast<std::size_t>(j), bands_[d][i]);
    }
  } else {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) f(cols_[k], values_[k]);
  }
}

}  // namespace stiffstep
