#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace stiffstep {

/// z = dt * lambda(k) for 1-D constant-coefficient diffusion on a uniform
/// grid, written with dt = ratio * dt_euler: z = -2 ratio sin^2(k dx / 2).
double mode_z(double k_dx, double ratio);

double amp_exact(double z);
double amp_euler(double z);
double amp_be(double z);
/// RKL2 amplification polynomial of degree s evaluated at z.
double amp_rkl2(double z, int stages);

/// ratio / s(ratio): forward Euler steps replaced per RKL2 sub-step.
double speedup_estimate(double ratio);

struct AmplificationCurve {
  double ratio = 0.0;
  int stages = 0;
  std::vector<double> k_dx;
  std::vector<double> exact;
  /// Present only when forward Euler is stable (ratio <= 1).
  std::optional<std::vector<double>> euler;
  std::vector<double> be;
  std::vector<double> rkl2;
};

inline constexpr std::size_t kCurveSamples = 512;

/// Samples k dx = pi (i + 1) / samples, i = 0 .. samples - 1 (pi included).
AmplificationCurve amplification_curve(double ratio, std::size_t samples = kCurveSamples);

}  // namespace stiffstep
