#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stiffstep/sparse.hpp"

namespace stiffstep {

/// Raised when a preconditioner cannot be formed (zero diagonal or pivot).
class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(const std::string& what, std::size_t row)
      : std::runtime_error(what + " at row " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

/// Contiguous ranges that exactly cover [0, n) in order.
using BlockPartition = std::vector<IndexRange>;

/// n split into `blocks` contiguous ranges, the first n mod blocks one longer.
BlockPartition uniform_blocks(std::size_t n, std::size_t blocks);

/// PC1 (point Jacobi) or PC2 (block-diagonal zero-fill ILU).
///
/// PC2 factors each diagonal block of A independently, ignoring couplings
/// between blocks the way a non-overlapping domain decomposition does. Each
/// block keeps its L and U in one CSR matrix with local indices; L has an
/// implied unit diagonal.
class Preconditioner {
 public:
  enum class Kind { pc1, pc2 };

  Kind kind() const { return kind_; }
  std::size_t size() const { return n_; }
  const std::vector<double>& diagonal() const { return diag_; }
  const BlockPartition& blocks() const { return blocks_; }
  const std::vector<SparseMatrix>& factors() const { return factors_; }

  void apply(std::span<const double> r, std::span<double> z) const;
  std::vector<double> apply(std::span<const double> r) const;

  friend Preconditioner build_pc1(const SparseMatrix& a);
  friend Preconditioner build_pc2(const SparseMatrix& a, const BlockPartition& blocks);

 private:
  Kind kind_ = Kind::pc1;
  std::size_t n_ = 0;
  std::vector<double> diag_;
  BlockPartition blocks_;
  std::vector<SparseMatrix> factors_;
  std::vector<std::vector<std::size_t>> diag_pos_;
};

Preconditioner build_pc1(const SparseMatrix& a);
Preconditioner build_pc2(const SparseMatrix& a, const BlockPartition& blocks);

std::vector<double> apply_pc1(const Preconditioner& p, std::span<const double> r);
std::vector<double> apply_pc2(const Preconditioner& p, std::span<const double> r);

}  // namespace stiffstep
