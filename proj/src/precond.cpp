#include "stiffstep/precond.hpp"

#include <algorithm>

namespace stiffstep {

BlockPartition uniform_blocks(std::size_t n, std::size_t blocks) {
  if (blocks == 0 || blocks > n) {
    throw std::invalid_argument("uniform_blocks: need 1 <= blocks <= n");
  }
  BlockPartition out;
  std::size_t start = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t len = n / blocks + (b < n % blocks ? 1 : 0);
    out.push_back({start, start + len});
    start += len;
  }
  return out;
}

Preconditioner build_pc1(const SparseMatrix& a) {
  Preconditioner p;
  p.kind_ = Preconditioner::Kind::pc1;
  p.n_ = a.size();
  p.diag_ = a.diagonal();
  for (std::size_t i = 0; i < p.n_; ++i) {
    if (p.diag_[i] == 0.0) throw BreakdownError("PC1: zero diagonal entry", i);
  }
  return p;
}

Preconditioner build_pc2(const SparseMatrix& a, const BlockPartition& blocks) {
  const std::size_t n = a.size();
  std::size_t expected = 0;
  for (const auto& b : blocks) {
    if (b.begin != expected || b.end <= b.begin) {
      throw std::invalid_argument("PC2: blocks must be non-empty contiguous ranges covering [0, n)");
    }
    expected = b.end;
  }
  if (expected != n) {
    throw std::invalid_argument("PC2: blocks must be non-empty contiguous ranges covering [0, n)");
  }

  Preconditioner p;
  p.kind_ = Preconditioner::Kind::pc2;
  p.n_ = n;
  p.blocks_ = blocks;
  for (const auto& blk : blocks) {
    const std::size_t m = blk.size();
    // LU = A restricted to the block, nonzero pattern only.
    std::vector<std::size_t> row_ptr(m + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t i = 0; i < m; ++i) {
      a.for_each_in_row(blk.begin + i, [&](std::size_t j, double v) {
        if (v == 0.0 || j < blk.begin || j >= blk.end) return;
        cols.push_back(j - blk.begin);
        vals.push_back(v);
      });
      row_ptr[i + 1] = cols.size();
    }

    std::vector<std::size_t> diag_pos(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
      const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
      const auto it = std::lower_bound(first, last, i);
      if (it == last || *it != i) throw BreakdownError("PC2: zero pivot", blk.begin + i);
      diag_pos[i] = static_cast<std::size_t>(it - cols.begin());
    }

    // Row-wise (IKJ) elimination restricted to the existing pattern.
    for (std::size_t i = 1; i < m; ++i) {
      for (std::size_t kk = row_ptr[i]; kk < row_ptr[i + 1] && cols[kk] < i; ++kk) {
        const std::size_t k = cols[kk];
        const double pivot = vals[diag_pos[k]];
        if (pivot == 0.0) throw BreakdownError("PC2: zero pivot", blk.begin + k);
        vals[kk] /= pivot;
        const double lik = vals[kk];
        // Walk row k (j > k) and row i (j > k) together.
        std::size_t pk = diag_pos[k] + 1;
        std::size_t pi = kk + 1;
        while (pk < row_ptr[k + 1] && pi < row_ptr[i + 1]) {
          if (cols[pk] == cols[pi]) {
            vals[pi] -= lik * vals[pk];
            ++pk;
            ++pi;
          } else if (cols[pk] < cols[pi]) {
            ++pk;
          } else {
            ++pi;
          }
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (vals[diag_pos[i]] == 0.0) throw BreakdownError("PC2: zero pivot", blk.begin + i);
    }

    p.factors_.push_back(SparseMatrix::csr(m, std::move(row_ptr), std::move(cols), std::move(vals)));
    p.diag_pos_.push_back(std::move(diag_pos));
  }
  return p;
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != n_ || z.size() != n_) {
    throw std::invalid_argument("preconditioner: vector length does not match");
  }
  if (kind_ == Kind::pc1) {
    for (std::size_t i = 0; i < n_; ++i) z[i] = r[i] / diag_[i];
    return;
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const SparseMatrix& lu = factors_[b];
    const auto& rp = lu.row_ptr();
    const auto& cols = lu.cols();
    const auto& vals = lu.values();
    const auto& dpos = diag_pos_[b];
    const std::size_t off = blocks_[b].begin;
    const std::size_t m = lu.size();
    // Forward solve with the unit lower factor (strictly lower entries).
    for (std::size_t i = 0; i < m; ++i) {
      double s = r[off + i];
      for (std::size_t k = rp[i]; k < dpos[i]; ++k) s -= vals[k] * z[off + cols[k]];
      z[off + i] = s;
    }
    // Back solve with the upper factor.
    for (std::size_t i = m; i-- > 0;) {
      double s = z[off + i];
      for (std::size_t k = dpos[i] + 1; k < rp[i + 1]; ++k) s -= vals[k] * z[off + cols[k]];
      z[off + i] = s / vals[dpos[i]];
    }
  }
}

std::vector<double> Preconditioner::apply(std::span<const double> r) const {
  std::vector<double> z(n_);
  apply(r, z);
  return z;
}

std::vector<double> apply_pc1(const Preconditioner& p, std::span<const double> r) {
  if (p.kind() != Preconditioner::Kind::pc1) throw std::invalid_argument("apply_pc1: not a PC1");
  return p.apply(r);
}

std::vector<double> apply_pc2(const Preconditioner& p, std::span<const double> r) {
  if (p.kind() != Preconditioner::Kind::pc2) throw std::invalid_argument("apply_pc2: not a PC2");
  return p.apply(r);
}

}  // namespace stiffstep
