#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "stiffstep/mesh.hpp"
#include "stiffstep/report.hpp"

namespace stiffstep {

class Config;

/// Costs of the virtual cluster, in arbitrary time units.
///
/// Jitter is the model's stand-in for system noise and network congestion:
/// each rank's compute in each segment is multiplied by (1 + jitter * xi)
/// with xi uniform in [0, 1) drawn from a seeded 64-bit Mersenne Twister.
///
/// Defaults are a small-cluster guess (seconds): 10 ns per point, 2 us halo
/// latency, 100 us allreduce. Set fields to zero for idealized studies.
struct CostModel {
  double compute_per_point = 1e-8;
  double local_latency = 2e-6;
  double local_per_surface_point = 2e-9;
  double global_latency = 1e-4;
  double jitter = 0.02;
  std::uint64_t seed = 1;
  /// Reductions per PCG iteration: p.y, r.z and the convergence check.
  int global_events_per_iteration = 3;
};

CostModel cost_model_from_config(const Config& cfg, const std::string& section = "cost");

/// Communication profile of one unit of work (PCG iteration or RKL2
/// sub-step), derived from a SolveReport.
struct CommProfile {
  std::string name;
  std::size_t units = 0;
  std::size_t local_per_unit = 0;
  std::size_t global_per_unit = 0;
  /// Exchanges that happen once before the first unit (PCG's initial A x0).
  std::size_t leading_local = 0;
};

CommProfile profile_from_report(const std::string& name, const SolveReport& report);
/// Synthetic profiles with `units` units of equal compute.
CommProfile pcg_profile(std::size_t units, int global_per_iteration = 3);
CommProfile rkl2_profile(std::size_t units);

/// Modeled times along the critical path: the rank that finishes last (ties go
/// to the rank with the most compute, then the lowest index).
struct ScalingReport {
  std::string profile;
  std::size_t cores = 0;
  std::vector<std::size_t> topology;
  double load_imbalance = 1.0;
  double total_time = 0.0;
  double compute_time = 0.0;
  double local_time = 0.0;
  double global_time = 0.0;
  /// Serial work / (cores * total_time), the serial work being every point's
  /// compute without jitter or communication.
  double efficiency = 1.0;

  double global_share() const { return total_time > 0.0 ? global_time / total_time : 0.0; }
};

/// Discrete-event evaluation of one profile on one decomposition.
///
/// Every unit's compute (points * compute_per_point) is split evenly into one
/// segment per synchronisation event. A local exchange waits for the
/// face neighbours' clocks and then pays latency plus surface cost; a global
/// reduction waits for every rank and pays the global latency.
ScalingReport simulate(const CommProfile& profile, const Decomposition& d, const CostModel& cost);
ScalingReport simulate(const SolveReport& report, const std::string& name, const Decomposition& d,
                       const CostModel& cost);

struct TopologyPreset {
  std::string name;
  std::vector<std::size_t> grid_sizes;
  std::vector<std::vector<std::size_t>> topologies;
};

/// "comet" and "stampede": the processor topologies of the two clusters on
/// the 181 x 251 x 602 coronal grid.
TopologyPreset topology_preset(const std::string& name);
std::vector<std::string> topology_preset_names();

std::vector<ScalingReport> sweep_topologies(const std::vector<std::size_t>& grid_sizes,
                                            const std::vector<std::vector<std::size_t>>& topologies,
                                            const std::vector<CommProfile>& profiles,
                                            const CostModel& cost);

/// Columns: cores,profile,compute_t,local_t,global_t,efficiency
void write_scaling_csv(std::ostream& out, const std::vector<ScalingReport>& rows,
                       const std::string& config_hash = {});

}  // namespace stiffstep
