#include "stiffstep/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stiffstep {

std::vector<double> DiffusionProblem::to_scaled(std::span<const double> u) const {
  std::vector<double> v(u.begin(), u.end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= scale[i];
  return v;
}

std::vector<double> DiffusionProblem::from_scaled(std::span<const double> v) const {
  std::vector<double> u(v.begin(), v.end());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] /= scale[i];
  return u;
}

double DiffusionProblem::integral(std::span<const double> u) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * cell_volumes[i];
  return sum;
}

double TemperatureCoefficient::beta(double t) const {
  if (t >= t_cut) return 1.0;
  return std::pow(t / t_cut, 2.5);
}

double TemperatureCoefficient::conductivity(double t) const {
  return kappa0 * beta(t) * std::pow(t, 2.5);
}

double harmonic_mean(double a, double b) {
  const double sum = a + b;
  if (sum == 0.0) return 0.0;
  return 2.0 * a * b / sum;
}

namespace {

// Turns the symmetric positive semi-definite stiffness K (as triplets) into
// the scaled operator -W^-1/2 K W^-1/2 and fills the volume bookkeeping.
void finish_problem(DiffusionProblem& p, const std::vector<Triplet>& stiffness,
                    std::vector<double> volumes, SparseMatrix::Layout layout) {
  const std::size_t n = volumes.size();
  const double vmax = *std::max_element(volumes.begin(), volumes.end());
  std::vector<Triplet> entries;
  entries.reserve(stiffness.size());
  for (const auto& t : stiffness) {
    const double wi = volumes[t.row];
    const double wj = volumes[t.col];
    const double denom = (wi == wj) ? wi : std::sqrt(wi * wj);
    entries.push_back({t.row, t.col, -t.value / denom});
  }
  p.M = SparseMatrix::from_triplets(n, std::move(entries), layout);
  p.scale.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.scale[i] = std::sqrt(volumes[i] / vmax);
  p.cell_volumes = std::move(volumes);
}

// Adds coefficient * (e_a - e_b)(e_a - e_b)^T, dropping boundary nodes (index npos).
constexpr std::size_t kBoundary = static_cast<std::size_t>(-1);

void add_edge(std::vector<Triplet>& k, std::size_t a, std::size_t b, double coeff) {
  if (a != kBoundary) k.push_back({a, a, coeff});
  if (b != kBoundary) k.push_back({b, b, coeff});
  if (a != kBoundary && b != kBoundary) {
    k.push_back({a, b, -coeff});
    k.push_back({b, a, -coeff});
  }
}

}  // namespace

DiffusionProblem assemble_diffusion_1d(const NonuniformGrid& grid, std::span<const double> alpha,
                                       BoundaryType bc, SparseMatrix::Layout layout) {
  if (grid.dimension() != 1) throw std::invalid_argument("assemble_diffusion_1d: grid must be 1-D");
  const Axis& ax = grid.axis(0);
  const std::size_t n = ax.interior_points();
  if (alpha.size() != n) {
    throw std::invalid_argument("assemble_diffusion_1d: need one diffusivity per interior point");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(alpha[i] > 0.0)) {
      throw std::invalid_argument("assemble_diffusion_1d: diffusivity must be positive (index " +
                                  std::to_string(i) + ")");
    }
  }

  std::vector<Triplet> stiffness;
  std::vector<double> volumes(n);
  for (std::size_t i = 0; i < n; ++i) volumes[i] = ax.cell_width(i);
  const bool dirichlet = bc == BoundaryType::dirichlet_zero;
  for (std::size_t f = 0; f <= n; ++f) {
    // Face f lies between node f-1 and node f; spacing f is its length.
    const std::size_t left = (f == 0) ? kBoundary : f - 1;
    const std::size_t right = (f == n) ? kBoundary : f;
    if ((left == kBoundary || right == kBoundary) && !dirichlet) continue;
    double a = 0.0;
    if (left == kBoundary) {
      a = alpha[right];
    } else if (right == kBoundary) {
      a = alpha[left];
    } else {
      a = harmonic_mean(alpha[left], alpha[right]);
    }
    add_edge(stiffness, left, right, a / ax.spacings[f]);
  }

  DiffusionProblem p;
  p.grid = grid;
  p.bc = bc;
  p.diffusivity.assign(alpha.begin(), alpha.end());
  finish_problem(p, stiffness, std::move(volumes), layout);
  return p;
}

DiffusionProblem assemble_aniso_2d(const NonuniformGrid& grid, std::span<const double> kappa,
                                   std::span<const std::array<double, 2>> bhat, BoundaryType bc,
                                   SparseMatrix::Layout layout) {
  if (grid.dimension() != 2) throw std::invalid_argument("assemble_aniso_2d: grid must be 2-D");
  const Axis& ax = grid.axis(0);
  const Axis& ay = grid.axis(1);
  const std::size_t nx = ax.interior_points();
  const std::size_t ny = ay.interior_points();
  const std::size_t n = nx * ny;
  if (kappa.size() != n || bhat.size() != n) {
    throw std::invalid_argument("assemble_aniso_2d: need kappa and bhat per interior point");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(kappa[i] >= 0.0)) {
      throw std::invalid_argument("assemble_aniso_2d: conductivity must be non-negative");
    }
    const double norm = std::hypot(bhat[i][0], bhat[i][1]);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw std::invalid_argument("assemble_aniso_2d: bhat is not a unit vector at index " +
                                  std::to_string(i));
    }
  }

  const bool dirichlet = bc == BoundaryType::dirichlet_zero;
  // Node index with -1 and nx (or ny) standing for boundary nodes.
  auto id = [&](long i, long j) -> std::size_t {
    if (i < 0 || j < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny)) {
      return kBoundary;
    }
    return static_cast<std::size_t>(i) + nx * static_cast<std::size_t>(j);
  };
  auto xx = [&](std::size_t k) { return kappa[k] * bhat[k][0] * bhat[k][0]; };
  auto yy = [&](std::size_t k) { return kappa[k] * bhat[k][1] * bhat[k][1]; };
  auto xy = [&](std::size_t k) { return kappa[k] * bhat[k][0] * bhat[k][1]; };
  auto face_coeff = [&](std::size_t a, std::size_t b, auto&& component) {
    if (a == kBoundary) return component(b);
    if (b == kBoundary) return component(a);
    return harmonic_mean(component(a), component(b));
  };

  std::vector<Triplet> stiffness;
  const long lnx = static_cast<long>(nx);
  const long lny = static_cast<long>(ny);

  // x-faces: between (i, j) and (i+1, j).
  for (long j = 0; j < lny; ++j) {
    const double wy = ay.cell_width(static_cast<std::size_t>(j));
    for (long i = -1; i < lnx; ++i) {
      const std::size_t a = id(i, j);
      const std::size_t b = id(i + 1, j);
      if ((a == kBoundary || b == kBoundary) && !dirichlet) continue;
      const double c = face_coeff(a, b, xx);
      if (c == 0.0) continue;
      add_edge(stiffness, a, b, c * wy / ax.spacings[static_cast<std::size_t>(i + 1)]);
    }
  }
  // y-faces: between (i, j) and (i, j+1).
  for (long i = 0; i < lnx; ++i) {
    const double wx = ax.cell_width(static_cast<std::size_t>(i));
    for (long j = -1; j < lny; ++j) {
      const std::size_t a = id(i, j);
      const std::size_t b = id(i, j + 1);
      if ((a == kBoundary || b == kBoundary) && !dirichlet) continue;
      const double c = face_coeff(a, b, yy);
      if (c == 0.0) continue;
      add_edge(stiffness, a, b, c * wx / ay.spacings[static_cast<std::size_t>(j + 1)]);
    }
  }
  // Coefficient of the x-face (i, j)-(i+1, j) and the y-face (i, j)-(i, j+1);
  // +inf where the face lies on a boundary line, since its gradient vanishes.
  const double inf = std::numeric_limits<double>::infinity();
  auto x_face = [&](long i, long j) {
    if (j < 0 || j >= lny) return inf;
    const std::size_t a = id(i, j), b = id(i + 1, j);
    return face_coeff(a, b, xx);
  };
  auto y_face = [&](long i, long j) {
    if (i < 0 || i >= lnx) return inf;
    const std::size_t a = id(i, j), b = id(i, j + 1);
    return face_coeff(a, b, yy);
  };
  // Corners (i+1/2, j+1/2) carry the cross term c * (gx gy^T + gy gx^T) * area.
  for (long j = -1; j < lny; ++j) {
    const double dy = ay.spacings[static_cast<std::size_t>(j + 1)];
    for (long i = -1; i < lnx; ++i) {
      const double dx = ax.spacings[static_cast<std::size_t>(i + 1)];
      const std::array<std::size_t, 4> nodes = {id(i, j), id(i + 1, j), id(i, j + 1),
                                                id(i + 1, j + 1)};
      double c = 0.0;
      int interior = 0;
      for (auto k : nodes) {
        if (k == kBoundary) continue;
        c += xy(k);
        ++interior;
      }
      if (interior == 0 || (interior < 4 && !dirichlet)) continue;
      c /= interior;
      // The corner owns half of each adjacent face's energy. Clipping c to
      // sqrt(A B), with A and B the weaker x- and y-face coefficients, keeps
      // every corner's form (and so M) semi-definite. Constant fields never clip;
      // varying kappa clips mildly, since the face means are harmonic.
      const double a_min = std::min(x_face(i, j), x_face(i, j + 1));
      const double b_min = std::min(y_face(i, j), y_face(i + 1, j));
      const double limit = std::sqrt(a_min * b_min);
      c = std::clamp(c, -limit, limit);
      if (c == 0.0) continue;
      const std::array<double, 4> gx = {-0.5 / dx, 0.5 / dx, -0.5 / dx, 0.5 / dx};
      const std::array<double, 4> gy = {-0.5 / dy, -0.5 / dy, 0.5 / dy, 0.5 / dy};
      const double weight = c * dx * dy;
      for (int p = 0; p < 4; ++p) {
        if (nodes[p] == kBoundary) continue;
        for (int q = 0; q < 4; ++q) {
          if (nodes[q] == kBoundary) continue;
          stiffness.push_back({nodes[p], nodes[q], weight * (gx[p] * gy[q] + gy[p] * gx[q])});
        }
      }
    }
  }

  std::vector<double> volumes(n);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) volumes[i + nx * j] = ax.cell_width(i) * ay.cell_width(j);
  }

  DiffusionProblem p;
  p.grid = grid;
  p.bc = bc;
  p.diffusivity.assign(kappa.begin(), kappa.end());
  p.bhat.assign(bhat.begin(), bhat.end());
  finish_problem(p, stiffness, std::move(volumes), layout);
  return p;
}

std::vector<double> lagged_diffusivity(std::span<const double> t_prev,
                                       const TemperatureCoefficient& coeff) {
  std::vector<double> kappa(t_prev.size());
  for (std::size_t i = 0; i < t_prev.size(); ++i) {
    if (!(t_prev[i] > 0.0)) {
      throw std::invalid_argument("lagged_diffusivity: temperature must be positive (index " +
                                  std::to_string(i) + ")");
    }
    kappa[i] = coeff.conductivity(t_prev[i]);
  }
  return kappa;
}

SparseMatrix be_system(const SparseMatrix& m, double dt) {
  if (dt < 0.0) throw std::invalid_argument("be_system: dt must be non-negative");
  return m.shifted(-dt, 1.0);
}

SparseMatrix be_system(const DiffusionProblem& problem, double dt) {
  return be_system(problem.M, dt);
}

}  // namespace stiffstep
