#include "stiffstep/krylov.hpp"

#include <cmath>
#include <string>

namespace stiffstep {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double residual_norm(const SparseMatrix& a, std::span<const double> x,
                     std::span<const double> b) {
  if (b.size() != a.size()) throw std::invalid_argument("residual_norm: size mismatch");
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r);
}

PcgResult pcg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const Preconditioner& p, double tol, std::size_t kmax) {
  PcgOptions options;
  options.tol = tol;
  options.kmax = kmax;
  return pcg_solve(a, b, x0, p, options);
}

PcgResult pcg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const Preconditioner& p, const PcgOptions& options) {
  const std::size_t n = a.size();
  if (b.size() != n || x0.size() != n || p.size() != n) {
    throw std::invalid_argument("pcg_solve: size mismatch");
  }
  if (!(options.tol > 0.0)) throw std::invalid_argument("pcg_solve: tol must be positive");
  const std::size_t kmax = options.kmax == 0 ? 10 * n : options.kmax;

  PcgResult result;
  SolveReport& report = result.report;
  std::vector<double>& x = result.x;
  x.assign(x0.begin(), x0.end());

  std::vector<double> r = a.multiply(x);
  ++report.local_events;
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  std::vector<double> z = p.apply(r);
  std::vector<double> dir = z;
  std::vector<double> y(n);
  double rr = dot(r, z);
  const double rr0 = rr;
  const double threshold = options.tol * options.tol * rr0;
  report.residual_history.push_back(rr);
  if (options.observer) options.observer({0, x, r, z});

  report.converged = (rr0 == 0.0);
  while (!report.converged && report.iterations < kmax) {
    a.multiply(dir, y);
    ++report.local_events;
    const double py = dot(dir, y);
    ++report.global_events;
    if (!(py > 0.0)) {
      throw NotSpdError("pcg_solve: p.Ap = " + std::to_string(py) + " at iteration " +
                        std::to_string(report.iterations) + "; matrix is not SPD");
    }
    const double alpha = rr / py;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * dir[i];
      r[i] -= alpha * y[i];
    }
    p.apply(r, z);
    const double rr_old = rr;
    rr = dot(r, z);
    ++report.global_events;
    ++report.iterations;
    report.residual_history.push_back(rr);
    if (options.observer) options.observer({report.iterations, x, r, z});
    // Convergence check: a reduction in a distributed setting.
    ++report.global_events;
    if (std::abs(rr) <= threshold) {
      report.converged = true;
      break;
    }
    const double beta = rr / rr_old;
    for (std::size_t i = 0; i < n; ++i) dir[i] = beta * dir[i] + z[i];
  }
  return result;
}

}  // namespace stiffstep
