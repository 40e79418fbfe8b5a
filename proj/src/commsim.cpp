#include "stiffstep/commsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "stiffstep/config.hpp"
#include "stiffstep/csv.hpp"

namespace stiffstep {

CostModel cost_model_from_config(const Config& cfg, const std::string& section) {
  CostModel c;
  c.compute_per_point = cfg.get_double(section, "compute_per_point", c.compute_per_point);
  c.local_latency = cfg.get_double(section, "local_latency", c.local_latency);
  c.local_per_surface_point =
      cfg.get_double(section, "local_per_surface_point", c.local_per_surface_point);
  c.global_latency = cfg.get_double(section, "global_latency", c.global_latency);
  c.jitter = cfg.get_double(section, "jitter", c.jitter);
  c.seed = static_cast<std::uint64_t>(cfg.get_int(section, "seed", static_cast<long long>(c.seed)));
  c.global_events_per_iteration = static_cast<int>(
      cfg.get_int(section, "global_events_per_iteration", c.global_events_per_iteration));
  if (c.compute_per_point < 0 || c.local_latency < 0 || c.local_per_surface_point < 0 ||
      c.global_latency < 0 || c.jitter < 0 || c.global_events_per_iteration < 0) {
    throw std::invalid_argument("[" + section + "] costs must be non-negative");
  }
  return c;
}

CommProfile profile_from_report(const std::string& name, const SolveReport& report) {
  CommProfile p;
  p.name = name;
  p.units = report.iterations;
  if (p.units == 0) {
    p.leading_local = report.local_events;
    return p;
  }
  p.local_per_unit = report.local_events / p.units;
  p.global_per_unit = report.global_events / p.units;
  p.leading_local = report.local_events - p.local_per_unit * p.units;
  if (p.global_per_unit * p.units != report.global_events) {
    throw std::invalid_argument("profile_from_report: global events are not a multiple of units");
  }
  return p;
}

CommProfile pcg_profile(std::size_t units, int global_per_iteration) {
  return {"pcg", units, 1, static_cast<std::size_t>(global_per_iteration), 1};
}

CommProfile rkl2_profile(std::size_t units) { return {"rkl2", units, 1, 0, 0}; }

namespace {

struct Cluster {
  std::vector<double> points;
  std::vector<double> surface;
  std::vector<std::vector<std::size_t>> neighbors;
};

Cluster build_cluster(const Decomposition& d) {
  const std::size_t ranks = d.rank_count();
  const std::size_t dims = d.proc_counts.size();
  Cluster c;
  c.points.resize(ranks);
  c.surface.assign(ranks, 0.0);
  c.neighbors.resize(ranks);
  for (std::size_t r = 0; r < ranks; ++r) {
    const auto coords = d.rank_coords(r);
    c.points[r] = static_cast<double>(d.rank_points(r));
    for (std::size_t k = 0; k < dims; ++k) {
      double face = 1.0;
      for (std::size_t m = 0; m < dims; ++m) {
        if (m != k) face *= static_cast<double>(d.chunks[m][coords[m]]);
      }
      for (int dir : {-1, 1}) {
        if (dir < 0 && coords[k] == 0) continue;
        if (dir > 0 && coords[k] + 1 == d.proc_counts[k]) continue;
        auto nb = coords;
        nb[k] = dir < 0 ? coords[k] - 1 : coords[k] + 1;
        c.neighbors[r].push_back(d.rank_of(nb));
        c.surface[r] += face;
      }
    }
  }
  return c;
}

}  // namespace

ScalingReport simulate(const CommProfile& profile, const Decomposition& d, const CostModel& cost) {
  const Cluster cluster = build_cluster(d);
  const std::size_t ranks = cluster.points.size();
  std::vector<double> compute(ranks, 0.0), local(ranks, 0.0), global(ranks, 0.0);
  std::vector<double> clock(ranks, 0.0);
  auto refresh = [&] {
    for (std::size_t r = 0; r < ranks; ++r) clock[r] = compute[r] + local[r] + global[r];
  };

  std::mt19937_64 rng(cost.seed);
  auto draw = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  auto exchange = [&] {
    refresh();
    for (std::size_t r = 0; r < ranks; ++r) {
      if (cluster.neighbors[r].empty()) continue;
      double ready = clock[r];
      for (auto nb : cluster.neighbors[r]) ready = std::max(ready, clock[nb]);
      local[r] += (ready - clock[r]) + cost.local_latency +
                  cost.local_per_surface_point * cluster.surface[r];
    }
  };
  auto reduce = [&] {
    if (ranks < 2) return;
    refresh();
    const double all = *std::max_element(clock.begin(), clock.end());
    for (std::size_t r = 0; r < ranks; ++r) global[r] += (all - clock[r]) + cost.global_latency;
  };
  auto work = [&](double fraction) {
    for (std::size_t r = 0; r < ranks; ++r) {
      double factor = 1.0;
      if (cost.jitter > 0.0) factor += cost.jitter * draw();
      compute[r] += cluster.points[r] * cost.compute_per_point * fraction * factor;
    }
  };

  for (std::size_t i = 0; i < profile.leading_local; ++i) exchange();
  const std::size_t segments = std::max<std::size_t>(1, profile.local_per_unit + profile.global_per_unit);
  const double fraction = 1.0 / static_cast<double>(segments);
  for (std::size_t u = 0; u < profile.units; ++u) {
    if (profile.local_per_unit + profile.global_per_unit == 0) work(1.0);
    for (std::size_t e = 0; e < profile.local_per_unit; ++e) {
      work(fraction);
      exchange();
    }
    for (std::size_t e = 0; e < profile.global_per_unit; ++e) {
      work(fraction);
      reduce();
    }
  }
  refresh();

  // After a reduction every clock agrees up to roundoff; treat those as ties.
  const double tie = 1e-12 * *std::max_element(clock.begin(), clock.end());
  std::size_t critical = 0;
  for (std::size_t r = 1; r < ranks; ++r) {
    const double gap = clock[r] - clock[critical];
    if (gap > tie || (std::abs(gap) <= tie && compute[r] > compute[critical])) critical = r;
  }

  ScalingReport rep;
  rep.profile = profile.name;
  rep.cores = ranks;
  rep.topology = d.proc_counts;
  rep.load_imbalance = max_load_imbalance(d);
  rep.compute_time = compute[critical];
  rep.local_time = local[critical];
  rep.global_time = global[critical];
  rep.total_time = rep.compute_time + rep.local_time + rep.global_time;

  double total_points = 0.0;
  for (double p : cluster.points) total_points += p;
  const double serial =
      total_points * cost.compute_per_point * static_cast<double>(profile.units);
  rep.efficiency =
      rep.total_time > 0.0 ? serial / (static_cast<double>(ranks) * rep.total_time) : 1.0;
  return rep;
}

ScalingReport simulate(const SolveReport& report, const std::string& name, const Decomposition& d,
                       const CostModel& cost) {
  return simulate(profile_from_report(name, report), d, cost);
}

std::vector<std::string> topology_preset_names() { return {"comet", "stampede"}; }

TopologyPreset topology_preset(const std::string& name) {
  const std::vector<std::size_t> corona = {181, 251, 602};
  if (name == "comet") {
    return {name,
            corona,
            {{2, 3, 4}, {2, 4, 6}, {3, 4, 8}, {4, 6, 9}, {6, 8, 9}, {6, 8, 18}, {6, 12, 24}}};
  }
  if (name == "stampede") {
    return {name,
            corona,
            {{2, 4, 8}, {4, 4, 8}, {4, 8, 8}, {4, 8, 16}, {8, 8, 16}, {8, 16, 16}, {8, 16, 32}}};
  }
  std::string known;
  for (const auto& n : topology_preset_names()) known += " " + n;
  throw std::invalid_argument("unknown topology preset '" + name + "'; known:" + known);
}

std::vector<ScalingReport> sweep_topologies(const std::vector<std::size_t>& grid_sizes,
                                            const std::vector<std::vector<std::size_t>>& topologies,
                                            const std::vector<CommProfile>& profiles,
                                            const CostModel& cost) {
  std::vector<ScalingReport> rows;
  for (const auto& topo : topologies) {
    const Decomposition d = decompose(grid_sizes, topo);
    for (const auto& prof : profiles) rows.push_back(simulate(prof, d, cost));
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingReport>& rows,
                       const std::string& config_hash) {
  CsvWriter csv(out, {"cores", "profile", "compute_t", "local_t", "global_t", "efficiency"},
                config_hash);
  for (const auto& r : rows) {
    csv << r.cores << r.profile << r.compute_time << r.local_time << r.global_time << r.efficiency;
    csv.end_row();
  }
}

}  // namespace stiffstep
