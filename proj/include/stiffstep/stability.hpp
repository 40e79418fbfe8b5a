#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "stiffstep/mesh.hpp"
#include "stiffstep/sparse.hpp"

namespace stiffstep {

enum class BoundMethod { gershgorin, ktilde, power_iteration };

std::string to_string(BoundMethod method);

/// Estimate of |lambda|_max of M and the matching forward Euler limit
/// dt_euler = 2 / |lambda|_max (+inf for a zero operator).
struct StabilityBound {
  double lambda_max_bound = 0.0;
  double dt_euler = 0.0;
  BoundMethod method = BoundMethod::gershgorin;
};

StabilityBound make_bound(double lambda_max, BoundMethod method);

/// Largest absolute row sum.
StabilityBound gershgorin_bound(const SparseMatrix& m);

/// alpha_max * 4 * sum_d 1 / min(spacing_d)^2
StabilityBound ktilde_bound(const NonuniformGrid& grid, double alpha_max);

struct PowerIterationResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Dominant |eigenvalue| of a symmetric matrix by power iteration with a
/// Rayleigh quotient estimate. The start vector is a fixed pseudo-random
/// sequence, so results are reproducible.
PowerIterationResult power_iteration_lambda_max(const SparseMatrix& m, double tol = 1e-12,
                                                std::size_t itmax = 200000,
                                                std::uint64_t seed = 12345);

}  // namespace stiffstep
