#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stiffstep/precond.hpp"
#include "stiffstep/report.hpp"
#include "stiffstep/sparse.hpp"

namespace stiffstep {

/// p.Ap <= 0 during PCG: the system matrix is not positive definite.
class NotSpdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PcgIterate {
  std::size_t iteration;
  std::span<const double> x;
  std::span<const double> r;
  std::span<const double> z;
};

struct PcgOptions {
  double tol = 1e-9;
  /// 0 selects 10 * n.
  std::size_t kmax = 0;
  /// Called with the initial state (iteration 0) and after each iteration.
  std::function<void(const PcgIterate&)> observer;
};

struct PcgResult {
  std::vector<double> x;
  SolveReport report;
};

/// Preconditioned conjugate gradient.
///
/// Stops once r.z <= tol^2 * (r0.z0), so `tol` is a relative residual in the
/// preconditioner norm. Each iteration tallies one local exchange (A p) and
/// three global reductions (p.y, r.z and the convergence check); the initial
/// residual adds one local exchange. Exceeding kmax returns the last iterate
/// with `converged == false`.
PcgResult pcg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const Preconditioner& p, const PcgOptions& options = {});

PcgResult pcg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const Preconditioner& p, double tol, std::size_t kmax);

/// ||b - A x||_2
double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace stiffstep
