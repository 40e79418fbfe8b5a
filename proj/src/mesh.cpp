#include "stiffstep/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stiffstep/config.hpp"

namespace stiffstep {

double Axis::length() const {
  double sum = 0.0;
  for (double h : spacings) sum += h;
  return sum;
}

double Axis::node(std::size_t i) const {
  double x = origin;
  for (std::size_t k = 0; k <= i; ++k) x += spacings.at(k);
  return x;
}

double Axis::cell_width(std::size_t i) const {
  return 0.5 * (spacings.at(i) + spacings.at(i + 1));
}

double Axis::min_spacing() const { return *std::min_element(spacings.begin(), spacings.end()); }

double Axis::max_spacing() const { return *std::max_element(spacings.begin(), spacings.end()); }

double Axis::stretching() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < spacings.size(); ++i) {
    worst = std::max(worst, std::abs(1.0 - spacings[i + 1] / spacings[i]));
  }
  return worst;
}

NonuniformGrid::NonuniformGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3) {
    throw std::invalid_argument("grid must have 1 to 3 axes");
  }
  for (const auto& ax : axes_) {
    if (ax.spacings.size() < 2) {
      throw std::invalid_argument("each axis needs at least one interior point");
    }
    for (double h : ax.spacings) {
      if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("grid spacings must be strictly positive");
      }
    }
  }
}

std::size_t NonuniformGrid::size() const {
  std::size_t n = 1;
  for (const auto& ax : axes_) n *= ax.interior_points();
  return n;
}

std::vector<std::size_t> NonuniformGrid::shape() const {
  std::vector<std::size_t> s;
  for (const auto& ax : axes_) s.push_back(ax.interior_points());
  return s;
}

double NonuniformGrid::max_stretching() const {
  double worst = 0.0;
  for (const auto& ax : axes_) worst = std::max(worst, ax.stretching());
  return worst;
}

NonuniformGrid make_uniform_grid(std::size_t n, double length) {
  if (n == 0) throw std::invalid_argument("make_uniform_grid: n must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("make_uniform_grid: length must be positive");
  Axis ax;
  ax.spacings.assign(n + 1, length / static_cast<double>(n + 1));
  return NonuniformGrid({ax});
}

NonuniformGrid make_geometric_grid(std::size_t n, double first_spacing, double ratio) {
  if (n == 0) throw std::invalid_argument("make_geometric_grid: n must be positive");
  if (!(first_spacing > 0.0)) {
    throw std::invalid_argument("make_geometric_grid: first spacing must be positive");
  }
  if (!(ratio > 0.0 && ratio < 2.0)) {
    throw std::invalid_argument("make_geometric_grid: ratio must lie in (0, 2)");
  }
  Axis ax;
  ax.spacings.resize(n + 1);
  double h = first_spacing;
  for (auto& s : ax.spacings) {
    s = h;
    h *= ratio;
  }
  return NonuniformGrid({ax});
}

Axis make_stretched_axis(std::size_t n, double min_spacing, double max_spacing, double ratio,
                         bool symmetric) {
  if (n == 0) throw std::invalid_argument("make_stretched_axis: n must be positive");
  if (!(min_spacing > 0.0) || !(max_spacing >= min_spacing)) {
    throw std::invalid_argument("make_stretched_axis: need 0 < min_spacing <= max_spacing");
  }
  if (!(ratio >= 1.0 && ratio < 2.0)) {
    throw std::invalid_argument("make_stretched_axis: ratio must lie in [1, 2)");
  }
  const std::size_t count = n + 1;
  const std::size_t grow = symmetric ? (count + 1) / 2 : count;
  std::vector<double> half(grow);
  double h = min_spacing;
  for (auto& s : half) {
    s = h;
    h = std::min(h * ratio, max_spacing);
  }
  Axis ax;
  if (!symmetric) {
    ax.spacings = std::move(half);
  } else {
    ax.spacings.assign(half.rbegin(), half.rend());
    const std::size_t skip = (count % 2 == 1) ? 1 : 0;
    ax.spacings.insert(ax.spacings.end(), half.begin() + static_cast<std::ptrdiff_t>(skip),
                       half.end());
  }
  return ax;
}

namespace {

constexpr double kSolarRadiusKm = 696000.0;
constexpr double kDegree = std::numbers::pi / 180.0;

// Radial spacings in solar radii; the profile reaches the reported minimum,
// maximum and 6% stretching but is otherwise a guess.
Axis corona_radial_axis() {
  Axis r = make_stretched_axis(181, 340.0 / kSolarRadiusKm, 500000.0 / kSolarRadiusKm, 1.06);
  r.origin = 1.0;
  return r;
}

Axis corona_theta_axis() {
  return make_stretched_axis(251, 0.55 * kDegree, 1.76 * kDegree, 1.03, true);
}

Axis corona_phi_axis() {
  Axis phi;
  phi.spacings.assign(603, 0.6 * kDegree);
  return phi;
}

}  // namespace

std::vector<std::string> grid_preset_names() { return {"mas-corona", "mas-corona-1d"}; }

NonuniformGrid grid_preset(const std::string& name) {
  if (name == "mas-corona") {
    return NonuniformGrid({corona_radial_axis(), corona_theta_axis(), corona_phi_axis()});
  }
  if (name == "mas-corona-1d") return NonuniformGrid({corona_radial_axis()});
  std::string known;
  for (const auto& n : grid_preset_names()) known += " " + n;
  throw std::invalid_argument("unknown grid preset '" + name + "'; known:" + known);
}

NonuniformGrid grid_from_config(const Config& cfg, const std::string& section) {
  if (const auto preset = cfg.get(section, "preset")) return grid_preset(*preset);
  const long long dims = cfg.get_int(section, "dims", 1);
  if (dims < 1 || dims > 3) throw std::invalid_argument("[grid] dims must be 1, 2 or 3");
  const std::string mode = cfg.get_string(section, "spacing", "uniform");
  std::vector<Axis> axes;
  for (long long d = 0; d < dims; ++d) {
    const std::string suffix = std::to_string(d);
    const long long n = cfg.get_int(section, "n" + suffix, 0);
    if (n <= 0) throw std::invalid_argument("[grid] n" + suffix + " must be positive");
    if (mode == "uniform") {
      axes.push_back(make_uniform_grid(static_cast<std::size_t>(n),
                                       cfg.get_double(section, "length" + suffix, 1.0))
                         .axis(0));
    } else if (mode == "geometric") {
      axes.push_back(make_geometric_grid(static_cast<std::size_t>(n),
                                         cfg.get_double(section, "first" + suffix, 0.0),
                                         cfg.get_double(section, "ratio" + suffix, 1.0))
                         .axis(0));
    } else {
      throw std::invalid_argument("[grid] spacing must be uniform or geometric, got " + mode);
    }
  }
  return NonuniformGrid(std::move(axes));
}

std::size_t Decomposition::rank_count() const {
  std::size_t n = 1;
  for (auto p : proc_counts) n *= p;
  return n;
}

std::vector<std::size_t> Decomposition::rank_coords(std::size_t rank) const {
  std::vector<std::size_t> c(proc_counts.size());
  for (std::size_t d = 0; d < proc_counts.size(); ++d) {
    c[d] = rank % proc_counts[d];
    rank /= proc_counts[d];
  }
  return c;
}

std::size_t Decomposition::rank_of(const std::vector<std::size_t>& coords) const {
  std::size_t rank = 0;
  for (std::size_t d = proc_counts.size(); d-- > 0;) rank = rank * proc_counts[d] + coords[d];
  return rank;
}

std::size_t Decomposition::rank_points(std::size_t rank) const {
  const auto c = rank_coords(rank);
  std::size_t n = 1;
  for (std::size_t d = 0; d < c.size(); ++d) n *= chunks[d][c[d]];
  return n;
}

Decomposition decompose(const std::vector<std::size_t>& grid_sizes,
                        const std::vector<std::size_t>& proc_counts) {
  if (grid_sizes.size() != proc_counts.size() || grid_sizes.empty()) {
    throw std::invalid_argument("decompose: grid and processor dimensions differ");
  }
  Decomposition d{grid_sizes, proc_counts, {}};
  for (std::size_t k = 0; k < grid_sizes.size(); ++k) {
    const std::size_t n = grid_sizes[k];
    const std::size_t p = proc_counts[k];
    if (p == 0 || p > n) {
      throw std::invalid_argument("decompose: processor count " + std::to_string(p) +
                                  " invalid for " + std::to_string(n) + " points");
    }
    std::vector<std::size_t> chunk(p, n / p);
    for (std::size_t i = 0; i < n % p; ++i) ++chunk[i];
    d.chunks.push_back(std::move(chunk));
  }
  return d;
}

double max_load_imbalance(const Decomposition& d) {
  // Rank volumes are products of per-dimension chunks, so the extremes are the
  // products of per-dimension extremes.
  double largest = 1.0;
  double smallest = 1.0;
  for (const auto& chunk : d.chunks) {
    largest *= static_cast<double>(*std::max_element(chunk.begin(), chunk.end()));
    smallest *= static_cast<double>(*std::min_element(chunk.begin(), chunk.end()));
  }
  return largest / smallest;
}

}  // namespace stiffstep
