#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stiffstep/report.hpp"
#include "stiffstep/sparse.hpp"

namespace stiffstep {

/// Which b index multiplies the M u^n term in stage k of the RKL2 recursion.
///
/// `previous` uses gamma_k = (b_{k-1} - 1) mu~_k, which gives a second-order
/// scheme. `current` uses (b_k - 1) mu~_k; that reading is only first-order
/// accurate and is kept so the order tests can show the difference.
enum class GammaIndex { previous, current };

/// Stage count and coefficients of the second-order Runge-Kutta-Legendre
/// super time-stepping scheme. Arrays are indexed by stage k; entries below
/// the first defined stage are zero (b is defined from k = 0, the others from
/// k = 1).
struct StsSchedule {
  int stages = 2;
  bool force_odd = false;
  GammaIndex gamma_index = GammaIndex::previous;
  std::vector<double> b;
  std::vector<double> mu;
  std::vector<double> mu_tilde;
  std::vector<double> nu;
  std::vector<double> gamma_tilde;

  /// (s^2 + s - 2) / 4: the largest dt / dt_euler this s keeps stable.
  double max_ratio() const;
};

/// b_k: 1/3 for k <= 2, (k^2 + k - 2) / (2 k (k + 1)) above.
double rkl2_b(int k);

StsSchedule make_schedule(int stages, GammaIndex gamma_index = GammaIndex::previous);

/// Smallest s >= 2 with (s^2 + s - 2)/4 >= dt / dt_euler, bumped to odd on
/// request. dt_euler may be +inf (zero operator), which gives s = 2.
int rkl2_stages(double dt, double dt_euler, bool force_odd = false);
int rkl2_stages_for_ratio(double ratio, bool force_odd = false);

StsSchedule schedule_for(double dt, double dt_euler, bool force_odd = false,
                         GammaIndex gamma_index = GammaIndex::previous);

struct StepResult {
  std::vector<double> u;
  SolveReport report;
};

/// One RKL2 step. Each stage does one product with M (one local exchange) and
/// no reductions.
StepResult rkl2_step(const SparseMatrix& m, std::span<const double> u_n, double dt,
                     const StsSchedule& schedule);

/// The same recursion applied to the scalar problem u' = (z / dt) u; returns
/// u^{n+1} / u^n.
double rkl2_scalar_amplification(double z, const StsSchedule& schedule);

/// n_cycles RKL2 steps of size dt / n_cycles, each with its own stage count.
StepResult rkl2_subcycled(const SparseMatrix& m, std::span<const double> u_n, double dt,
                          int n_cycles, double dt_euler, bool force_odd = false);

struct EulerResult {
  std::vector<double> u;
  std::size_t steps = 0;
  SolveReport report;
};

/// Forward Euler steps of size safety * dt_euler, the last one shortened to
/// land exactly on dt.
EulerResult euler_subcycle(const SparseMatrix& m, std::span<const double> u_n, double dt,
                           double dt_euler, double safety = 0.9);

std::size_t euler_step_count(double dt, double dt_euler, double safety);

/// Forward Euler over fraction * dt, then one RKL2 step over the remainder.
StepResult hybrid_euler_rkl2(const SparseMatrix& m, std::span<const double> u_n, double dt,
                             double dt_euler, double fraction = 0.25, double safety = 0.9);

}  // namespace stiffstep
