#include "stiffstep/sts.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stiffstep {

double rkl2_b(int k) {
  if (k <= 2) return 1.0 / 3.0;
  const double kk = static_cast<double>(k);
  return (kk * kk + kk - 2.0) / (2.0 * kk * (kk + 1.0));
}

double StsSchedule::max_ratio() const {
  const double s = static_cast<double>(stages);
  return (s * s + s - 2.0) / 4.0;
}

StsSchedule make_schedule(int stages, GammaIndex gamma_index) {
  if (stages < 2) throw std::invalid_argument("RKL2 needs at least two stages");
  StsSchedule sch;
  sch.stages = stages;
  sch.gamma_index = gamma_index;
  const auto len = static_cast<std::size_t>(stages) + 1;
  sch.b.resize(len);
  sch.mu.assign(len, 0.0);
  sch.mu_tilde.assign(len, 0.0);
  sch.nu.assign(len, 0.0);
  sch.gamma_tilde.assign(len, 0.0);
  for (int k = 0; k <= stages; ++k) sch.b[static_cast<std::size_t>(k)] = rkl2_b(k);

  const double s = static_cast<double>(stages);
  const double w = s * s + s - 2.0;
  sch.mu_tilde[1] = 4.0 / (3.0 * w);
  for (int k = 2; k <= stages; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double kk = static_cast<double>(k);
    const double bk = sch.b[i];
    const double bk1 = sch.b[i - 1];
    const double bk2 = sch.b[i - 2];
    sch.mu[i] = (2.0 * kk - 1.0) / kk * (bk / bk1);
    sch.nu[i] = -(kk - 1.0) / kk * (bk / bk2);
    sch.mu_tilde[i] = 4.0 * (2.0 * kk - 1.0) / (kk * w) * (bk / bk1);
    const double b_gamma = gamma_index == GammaIndex::previous ? bk1 : bk;
    sch.gamma_tilde[i] = (b_gamma - 1.0) * sch.mu_tilde[i];
  }
  return sch;
}

int rkl2_stages_for_ratio(double ratio, bool force_odd) {
  if (!(ratio >= 0.0)) throw std::invalid_argument("rkl2_stages: ratio must be non-negative");
  int s = 2;
  if (std::isfinite(ratio) && ratio > 1.0) {
    s = static_cast<int>(std::ceil((std::sqrt(9.0 + 16.0 * ratio) - 1.0) / 2.0));
    // The closed form can land one off after rounding; settle on the minimal s.
    auto stable = [ratio](int k) {
      const double kk = static_cast<double>(k);
      return (kk * kk + kk - 2.0) / 4.0 >= ratio;
    };
    while (!stable(s)) ++s;
    while (s > 2 && stable(s - 1)) --s;
  } else if (!std::isfinite(ratio)) {
    throw std::invalid_argument("rkl2_stages: ratio must be finite");
  }
  if (force_odd && s % 2 == 0) ++s;
  return s;
}

int rkl2_stages(double dt, double dt_euler, bool force_odd) {
  if (!(dt_euler > 0.0)) throw std::invalid_argument("rkl2_stages: dt_euler must be positive");
  if (!(dt >= 0.0)) throw std::invalid_argument("rkl2_stages: dt must be non-negative");
  const double ratio = std::isinf(dt_euler) ? 0.0 : dt / dt_euler;
  return rkl2_stages_for_ratio(ratio, force_odd);
}

StsSchedule schedule_for(double dt, double dt_euler, bool force_odd, GammaIndex gamma_index) {
  StsSchedule sch = make_schedule(rkl2_stages(dt, dt_euler, force_odd), gamma_index);
  sch.force_odd = force_odd;
  return sch;
}

StepResult rkl2_step(const SparseMatrix& m, std::span<const double> u_n, double dt,
                     const StsSchedule& schedule) {
  const std::size_t n = u_n.size();
  if (m.size() != n) throw std::invalid_argument("rkl2_step: size mismatch");
  StepResult out;
  std::vector<double> m0 = m.multiply(u_n);
  std::vector<double> prev2(u_n.begin(), u_n.end());
  std::vector<double> prev1(n);
  const double c1 = schedule.mu_tilde[1] * dt;
  for (std::size_t i = 0; i < n; ++i) prev1[i] = u_n[i] + c1 * m0[i];

  std::vector<double> mu_prev(n);
  std::vector<double> next(n);
  for (int k = 2; k <= schedule.stages; ++k) {
    const auto j = static_cast<std::size_t>(k);
    const double mu = schedule.mu[j];
    const double nu = schedule.nu[j];
    const double rest = 1.0 - mu - nu;
    const double mt = schedule.mu_tilde[j] * dt;
    const double gt = schedule.gamma_tilde[j] * dt;
    m.multiply(prev1, mu_prev);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = mu * prev1[i] + nu * prev2[i] + rest * u_n[i] + mt * mu_prev[i] + gt * m0[i];
    }
    std::swap(prev2, prev1);
    std::swap(prev1, next);
  }
  out.u = std::move(prev1);
  out.report.iterations = static_cast<std::size_t>(schedule.stages);
  out.report.local_events = static_cast<std::size_t>(schedule.stages);
  return out;
}

double rkl2_scalar_amplification(double z, const StsSchedule& schedule) {
  double prev2 = 1.0;
  double prev1 = 1.0 + schedule.mu_tilde[1] * z;
  for (int k = 2; k <= schedule.stages; ++k) {
    const auto j = static_cast<std::size_t>(k);
    const double mu = schedule.mu[j];
    const double nu = schedule.nu[j];
    const double next = mu * prev1 + nu * prev2 + (1.0 - mu - nu) +
                        schedule.mu_tilde[j] * z * prev1 + schedule.gamma_tilde[j] * z;
    prev2 = prev1;
    prev1 = next;
  }
  return prev1;
}

StepResult rkl2_subcycled(const SparseMatrix& m, std::span<const double> u_n, double dt,
                          int n_cycles, double dt_euler, bool force_odd) {
  if (n_cycles < 1) throw std::invalid_argument("rkl2_subcycled: need at least one cycle");
  const double h = dt / n_cycles;
  StepResult out;
  out.u.assign(u_n.begin(), u_n.end());
  for (int c = 0; c < n_cycles; ++c) {
    const StsSchedule sch = schedule_for(h, dt_euler, force_odd);
    StepResult step = rkl2_step(m, out.u, h, sch);
    out.u = std::move(step.u);
    out.report += step.report;
  }
  return out;
}

std::size_t euler_step_count(double dt, double dt_euler, double safety) {
  if (!(safety > 0.0 && safety < 1.0)) {
    throw std::invalid_argument("euler_subcycle: safety must lie in (0, 1)");
  }
  if (!(dt_euler > 0.0)) throw std::invalid_argument("euler_subcycle: dt_euler must be positive");
  if (dt <= 0.0) return 0;
  if (std::isinf(dt_euler)) return 1;
  const double h = safety * dt_euler;
  auto steps = static_cast<std::size_t>(std::ceil(dt / h));
  // A quotient that is an integer up to rounding should not add a sliver step.
  if (steps > 1 && static_cast<double>(steps - 1) * h >= dt * (1.0 - 1e-12)) --steps;
  return std::max<std::size_t>(steps, 1);
}

EulerResult euler_subcycle(const SparseMatrix& m, std::span<const double> u_n, double dt,
                           double dt_euler, double safety) {
  if (m.size() != u_n.size()) throw std::invalid_argument("euler_subcycle: size mismatch");
  EulerResult out;
  out.u.assign(u_n.begin(), u_n.end());
  out.steps = euler_step_count(dt, dt_euler, safety);
  if (out.steps == 0) return out;
  const double h = std::isinf(dt_euler) ? dt : safety * dt_euler;
  std::vector<double> mu(u_n.size());
  for (std::size_t k = 0; k < out.steps; ++k) {
    const double step =
        (k + 1 == out.steps) ? dt - static_cast<double>(out.steps - 1) * h : h;
    m.multiply(out.u, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) out.u[i] += step * mu[i];
  }
  out.report.iterations = out.steps;
  out.report.local_events = out.steps;
  return out;
}

StepResult hybrid_euler_rkl2(const SparseMatrix& m, std::span<const double> u_n, double dt,
                             double dt_euler, double fraction, double safety) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("hybrid_euler_rkl2: fraction must lie in (0, 1)");
  }
  const double euler_dt = fraction * dt;
  const double rkl2_dt = dt - euler_dt;
  EulerResult prefix = euler_subcycle(m, u_n, euler_dt, dt_euler, safety);
  StepResult out = rkl2_step(m, prefix.u, rkl2_dt, schedule_for(rkl2_dt, dt_euler));
  SolveReport report = prefix.report;
  report += out.report;
  out.report = report;
  return out;
}

}  // namespace stiffstep
