#include "stiffstep/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stiffstep/sts.hpp"

namespace stiffstep {

double mode_z(double k_dx, double ratio) {
  if (!(k_dx >= 0.0 && k_dx <= std::numbers::pi)) {
    throw std::invalid_argument("mode_z: k_dx must lie in [0, pi]");
  }
  if (!(ratio >= 0.0)) throw std::invalid_argument("mode_z: ratio must be non-negative");
  const double s = std::sin(0.5 * k_dx);
  return -2.0 * ratio * s * s;
}

double amp_exact(double z) { return std::exp(z); }

double amp_euler(double z) { return 1.0 + z; }

double amp_be(double z) { return 1.0 / (1.0 - z); }

double amp_rkl2(double z, int stages) {
  return rkl2_scalar_amplification(z, make_schedule(stages));
}

double speedup_estimate(double ratio) {
  if (!(ratio > 0.0)) throw std::invalid_argument("speedup_estimate: ratio must be positive");
  return ratio / static_cast<double>(rkl2_stages_for_ratio(ratio));
}

AmplificationCurve amplification_curve(double ratio, std::size_t samples) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("amplification_curve: ratio must be positive");
  }
  if (samples == 0) throw std::invalid_argument("amplification_curve: need samples");
  AmplificationCurve c;
  c.ratio = ratio;
  c.stages = rkl2_stages_for_ratio(ratio);
  const StsSchedule sch = make_schedule(c.stages);
  const bool euler_stable = ratio <= 1.0;
  if (euler_stable) c.euler.emplace();
  for (std::size_t i = 0; i < samples; ++i) {
    const double k = std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(samples);
    const double z = mode_z(k, ratio);
    c.k_dx.push_back(k);
    c.exact.push_back(amp_exact(z));
    if (euler_stable) c.euler->push_back(amp_euler(z));
    c.be.push_back(amp_be(z));
    c.rkl2.push_back(rkl2_scalar_amplification(z, sch));
  }
  return c;
}

}  // namespace stiffstep
