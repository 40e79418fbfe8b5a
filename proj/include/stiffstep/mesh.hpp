#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stiffstep {

class Config;

/// One tensor-product axis. `spacings[i]` is the distance between node i and
/// node i+1, where node 0 and node n+1 are the boundary nodes. An axis with n
/// interior unknowns therefore stores n+1 spacings.
struct Axis {
  std::vector<double> spacings;
  double origin = 0.0;

  std::size_t interior_points() const { return spacings.size() - 1; }
  double length() const;
  /// Coordinate of interior node i (0-based).
  double node(std::size_t i) const;
  /// Control-volume width of interior node i: half the sum of its two spacings.
  double cell_width(std::size_t i) const;
  double min_spacing() const;
  double max_spacing() const;
  /// max_i |1 - spacings[i+1]/spacings[i]|
  double stretching() const;
};

/// Tensor-product grid of 1 to 3 axes. Unknowns are ordered lexicographically
/// with axis 0 varying fastest.
class NonuniformGrid {
 public:
  NonuniformGrid() = default;
  explicit NonuniformGrid(std::vector<Axis> axes);

  std::size_t dimension() const { return axes_.size(); }
  const Axis& axis(std::size_t d) const { return axes_.at(d); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const;
  std::vector<std::size_t> shape() const;
  double max_stretching() const;

 private:
  std::vector<Axis> axes_;
};

NonuniformGrid make_uniform_grid(std::size_t n, double length);
NonuniformGrid make_geometric_grid(std::size_t n, double first_spacing, double ratio);

/// Geometric growth from `min_spacing` by `ratio` per cell, capped at
/// `max_spacing`. With `symmetric` the profile is mirrored so both ends are
/// coarse and the middle is fine.
Axis make_stretched_axis(std::size_t n, double min_spacing, double max_spacing,
                         double ratio, bool symmetric = false);

/// Named grid presets. "mas-corona" is the 181 x 251 x 602 coronal grid;
/// "mas-corona-1d" is its radial axis alone.
NonuniformGrid grid_preset(const std::string& name);
std::vector<std::string> grid_preset_names();

/// Reads a [grid] section: dims, n0.., length0.., spacing = uniform|geometric,
/// first0.., ratio0..
NonuniformGrid grid_from_config(const Config& cfg, const std::string& section = "grid");

struct Decomposition {
  std::vector<std::size_t> grid_sizes;
  std::vector<std::size_t> proc_counts;
  /// chunks[d][p] = interior points owned by processor p along dimension d.
  std::vector<std::vector<std::size_t>> chunks;

  std::size_t rank_count() const;
  /// Rank index is lexicographic over proc coordinates, dimension 0 fastest.
  std::vector<std::size_t> rank_coords(std::size_t rank) const;
  std::size_t rank_of(const std::vector<std::size_t>& coords) const;
  std::size_t rank_points(std::size_t rank) const;
};

/// Splits each dimension so the first N mod P processors get one extra point.
Decomposition decompose(const std::vector<std::size_t>& grid_sizes,
                        const std::vector<std::size_t>& proc_counts);

/// Largest rank volume divided by the smallest.
double max_load_imbalance(const Decomposition& d);

}  // namespace stiffstep
