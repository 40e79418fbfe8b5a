#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "stiffstep/mesh.hpp"
#include "stiffstep/sparse.hpp"

namespace stiffstep {

enum class BoundaryType { dirichlet_zero, neumann_zero };

/// Semi-discrete parabolic operator du/dt = M u on the interior unknowns of a
/// grid.
///
/// On a nonuniform grid the flux-form operator is W^-1 K with K symmetric and
/// W the diagonal of control-volume sizes. `M` stores the similarity-scaled
/// form S W^-1 K S^-1 with S = diag(sqrt(w_i / w_max)), which is symmetric and
/// negative semi-definite with the same spectrum. Integrators act on the
/// scaled state v = S u; `to_scaled` and `from_scaled` convert. On uniform
/// grids S is exactly the identity.
struct DiffusionProblem {
  NonuniformGrid grid;
  SparseMatrix M;
  std::vector<double> diffusivity;
  BoundaryType bc = BoundaryType::dirichlet_zero;
  std::vector<std::array<double, 2>> bhat;  // empty unless anisotropic
  std::vector<double> cell_volumes;
  std::vector<double> scale;

  std::vector<double> to_scaled(std::span<const double> u) const;
  std::vector<double> from_scaled(std::span<const double> v) const;
  /// sum_i u_i * volume_i
  double integral(std::span<const double> u) const;
};

/// Cut-off temperature coefficient: beta(T) = (T/T_cut)^(5/2) below T_cut, 1 above.
struct TemperatureCoefficient {
  double kappa0 = 1.0;
  double t_cut = 1.0;

  double beta(double t) const;
  /// kappa0 * beta(T) * T^(5/2)
  double conductivity(double t) const;
};

double harmonic_mean(double a, double b);

DiffusionProblem assemble_diffusion_1d(const NonuniformGrid& grid, std::span<const double> alpha,
                                       BoundaryType bc,
                                       SparseMatrix::Layout layout = SparseMatrix::Layout::dia);

/// Field-aligned conduction div(kappa bhat (bhat . grad T)) on a 2-D grid.
/// Parallel-to-axis parts use face fluxes; the bx*by cross part uses corner
/// gradients. The operator is built as the Hessian of a quadratic energy, so
/// it is symmetric, and when bx*by vanishes everywhere it is exactly the
/// 5-point (or 3-point, if bhat is axis-aligned) face stencil.
DiffusionProblem assemble_aniso_2d(const NonuniformGrid& grid, std::span<const double> kappa,
                                   std::span<const std::array<double, 2>> bhat,
                                   BoundaryType bc = BoundaryType::dirichlet_zero,
                                   SparseMatrix::Layout layout = SparseMatrix::Layout::dia);

std::vector<double> lagged_diffusivity(std::span<const double> t_prev,
                                       const TemperatureCoefficient& coeff);

/// A = I - dt M.
SparseMatrix be_system(const DiffusionProblem& problem, double dt);
SparseMatrix be_system(const SparseMatrix& m, double dt);

}  // namespace stiffstep
