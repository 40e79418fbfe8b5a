#include "stiffstep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "stiffstep/krylov.hpp"

namespace stiffstep {

std::string to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::gershgorin:
      return "gershgorin";
    case BoundMethod::ktilde:
      return "ktilde";
    case BoundMethod::power_iteration:
      return "power-iteration";
  }
  return "unknown";
}

StabilityBound make_bound(double lambda_max, BoundMethod method) {
  if (!(lambda_max >= 0.0)) throw std::invalid_argument("eigenvalue bound must be non-negative");
  StabilityBound b;
  b.lambda_max_bound = lambda_max;
  b.dt_euler = lambda_max > 0.0 ? 2.0 / lambda_max : std::numeric_limits<double>::infinity();
  b.method = method;
  return b;
}

StabilityBound gershgorin_bound(const SparseMatrix& m) {
  const auto sums = abs_row_sums(m);
  const double worst = sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
  return make_bound(worst, BoundMethod::gershgorin);
}

StabilityBound ktilde_bound(const NonuniformGrid& grid, double alpha_max) {
  if (!(alpha_max >= 0.0)) throw std::invalid_argument("ktilde_bound: alpha_max must be >= 0");
  double k2 = 0.0;
  for (const auto& ax : grid.axes()) {
    const double h = ax.min_spacing();
    k2 += 1.0 / (h * h);
  }
  return make_bound(alpha_max * 4.0 * k2, BoundMethod::ktilde);
}

PowerIterationResult power_iteration_lambda_max(const SparseMatrix& m, double tol,
                                                std::size_t itmax, std::uint64_t seed) {
  const std::size_t n = m.size();
  PowerIterationResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double nx = norm2(x);
  for (auto& v : x) v /= nx;

  std::vector<double> y(n);
  double previous = 0.0;
  for (std::size_t it = 1; it <= itmax; ++it) {
    m.multiply(x, y);
    const double rayleigh = std::abs(dot(x, y));
    const double ny = norm2(y);
    out.iterations = it;
    if (ny == 0.0) {
      out.value = 0.0;
      out.converged = true;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    out.value = rayleigh;
    if (it > 1 && std::abs(rayleigh - previous) <= tol * rayleigh) {
      out.converged = true;
      return out;
    }
    previous = rayleigh;
  }
  return out;
}

}  // namespace stiffstep
