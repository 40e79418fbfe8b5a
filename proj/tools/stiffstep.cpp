// stiffstep command-line front end. Every subcommand writes CSV files into the
// output directory (--out, else $STIFFSTEP_OUT, else ./out).

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stiffstep/analysis.hpp"
#include "stiffstep/commsim.hpp"
#include "stiffstep/config.hpp"
#include "stiffstep/csv.hpp"
#include "stiffstep/driver.hpp"
#include "stiffstep/stability.hpp"
#include "stiffstep/sts.hpp"

namespace fs = std::filesystem;
using namespace stiffstep;

namespace {

// Bad user input: reported as a usage error (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string out;
  std::optional<long long> seed;
};

struct Context {
  Config cfg;
  fs::path out;
  std::string hash;
};

std::string join(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

Context prepare(const Common& common, Config cfg) {
  if (common.seed) cfg.set("", "seed", std::to_string(*common.seed));
  Context ctx;
  ctx.hash = hex64(fnv1a64(cfg.canonical()));
  ctx.cfg = std::move(cfg);
  std::string dir = common.out;
  if (dir.empty()) {
    const char* env = std::getenv("STIFFSTEP_OUT");
    dir = env && *env ? env : "out";
  }
  ctx.out = dir;
  fs::create_directories(ctx.out);
  return ctx;
}

Config load_config(const Common& common) {
  return common.config_path.empty() ? Config{} : Config::load(common.config_path);
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
  std::cout << path.string() << '\n';
}

std::uint64_t seed_of(const Config& cfg) {
  return static_cast<std::uint64_t>(cfg.get_int("", "seed", 12345));
}

// ---- converge

int cmd_converge(const Context& ctx) {
  const Config& c = ctx.cfg;
  Integrator scheme;
  try {
    scheme = parse_integrator(c.get_string("converge", "scheme", "rkl2"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double ratio = c.get_double("converge", "dt_ratio", 10.0);
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw UsageError("--dt-ratio must be positive");
  const auto levels = c.get_int("converge", "levels", 4);
  const auto base = c.get_int("converge", "base_steps", 4);
  const auto points = c.get_int("converge", "points", 99);
  if (levels < 1 || base < 1 || points < 3) throw UsageError("[converge] levels/base_steps/points out of range");
  const auto rows = convergence_study(scheme, ratio, static_cast<std::size_t>(levels),
                                      static_cast<std::size_t>(base), c.get_double("converge", "tol", 1e-12),
                                      static_cast<std::size_t>(points));
  const fs::path path = ctx.out / ("converge_" + to_string(scheme) + ".csv");
  auto f = open_csv(path);
  CsvWriter csv(f, {"dt", "steps", "error", "order"}, ctx.hash);
  for (const auto& r : rows) {
    csv << r.dt << r.steps << r.error;
    if (r.order) csv << *r.order;
    else csv.blank();
    csv.end_row();
  }
  finish(f, path);
  return 0;
}

// ---- stability

ProblemPreset checked_preset(const std::string& name) {
  try {
    return problem_preset(name);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown preset '" + name + "' (presets: " + join(problem_preset_names()) + ")");
  }
}

int cmd_stability(const Context& ctx) {
  const ProblemPreset preset = checked_preset(ctx.cfg.get_string("stability", "preset", "heat-1d"));
  const DiffusionProblem problem = preset.assemble(preset.initial);
  double alpha_max = 0.0;
  for (double a : problem.diffusivity) alpha_max = std::max(alpha_max, a);

  const StabilityBound g = gershgorin_bound(problem.M);
  const StabilityBound k = ktilde_bound(preset.grid, alpha_max);
  const PowerIterationResult p = power_iteration_lambda_max(
      problem.M, ctx.cfg.get_double("stability", "tol", 1e-10), 200000, seed_of(ctx.cfg));
  const StabilityBound pb = make_bound(p.value, BoundMethod::power_iteration);

  const fs::path path = ctx.out / ("stability_" + preset.name + ".csv");
  auto f = open_csv(path);
  CsvWriter csv(f, {"method", "lambda_max", "dt_euler", "ratio_to_power"}, ctx.hash);
  for (const auto& b : {g, k, pb}) {
    csv << to_string(b.method) << b.lambda_max_bound << b.dt_euler
        << (p.value > 0.0 ? b.lambda_max_bound / p.value : 1.0);
    csv.end_row();
  }
  finish(f, path);
  return 0;
}

// ---- amp

int cmd_amp(const Context& ctx) {
  std::vector<double> ratios = ctx.cfg.get_doubles("amp", "ratios");
  if (ratios.empty()) ratios = {0.2, 5.0, 50.0, 500.0};
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("ratio must be positive: " + format_number(r));
  }
  for (double r : ratios) {
    const AmplificationCurve curve = amplification_curve(r);
    const fs::path path = ctx.out / ("amp_ratio_" + format_number(r) + ".csv");
    auto f = open_csv(path);
    CsvWriter csv(f, {"k_dx", "exact", "euler", "be", "rkl2"}, ctx.hash);
    for (std::size_t i = 0; i < curve.k_dx.size(); ++i) {
      csv << curve.k_dx[i] << curve.exact[i];
      if (curve.euler) csv << (*curve.euler)[i];
      else csv.blank();
      csv << curve.be[i] << curve.rkl2[i];
      csv.end_row();
    }
    finish(f, path);
  }
  return 0;
}

// ---- speedup

int cmd_speedup(const Context& ctx) {
  const double max_ratio = ctx.cfg.get_double("speedup", "max_ratio", 500.0);
  if (!(max_ratio > 0.0) || !std::isfinite(max_ratio)) throw UsageError("--max-ratio must be positive");
  const auto points = ctx.cfg.get_int("speedup", "points", 301);
  if (points < 2) throw UsageError("[speedup] points must be >= 2");
  const fs::path path = ctx.out / "speedup.csv";
  auto f = open_csv(path);
  CsvWriter csv(f, {"ratio", "s", "speedup"}, ctx.hash);
  const double lo = std::log10(max_ratio / 1000.0);
  const double hi = std::log10(max_ratio);
  for (long long i = 0; i < points; ++i) {
    // Pin the last sample so the final row is exactly max_ratio.
    const double ratio = i + 1 == points ? max_ratio
                                         : std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) /
                                                                  static_cast<double>(points - 1));
    csv << ratio << rkl2_stages_for_ratio(ratio) << speedup_estimate(ratio);
    csv.end_row();
  }
  finish(f, path);
  return 0;
}

// ---- run

int cmd_run(const Context& ctx) {
  RunConfig rc;
  try {
    rc = run_config_from(ctx.cfg, "run");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ProblemPreset preset = checked_preset(rc.preset);
  const RunResult res = run(rc, preset);
  const std::string stem = "run_" + preset.name + "_" + to_string(rc.integrator);

  const fs::path snap_path = ctx.out / (stem + ".csv");
  {
    auto f = open_csv(snap_path);
    const bool two_d = preset.grid.dimension() == 2;
    std::vector<std::string> cols = {"step", "t", "x"};
    if (two_d) cols.push_back("y");
    cols.push_back("u");
    CsvWriter csv(f, cols, ctx.hash);
    const Axis& ax = preset.grid.axis(0);
    for (const auto& s : res.snapshots) {
      for (std::size_t i = 0; i < s.u.size(); ++i) {
        csv << s.step << s.t;
        if (two_d) {
          const Axis& ay = preset.grid.axis(1);
          csv << ax.node(i % ax.interior_points()) << ay.node(i / ax.interior_points());
        } else {
          csv << ax.node(i);
        }
        csv << s.u[i];
        csv.end_row();
      }
    }
    finish(f, snap_path);
  }

  const fs::path rep_path = ctx.out / (stem + "_reports.csv");
  {
    auto f = open_csv(rep_path);
    CsvWriter csv(f, {"step", "iterations", "local_events", "global_events", "converged"}, ctx.hash);
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
      const auto& r = res.reports[i];
      csv << i + 1 << r.iterations << r.local_events << r.global_events << (r.converged ? 1 : 0);
      csv.end_row();
    }
    finish(f, rep_path);
  }

  const fs::path man_path = ctx.out / (stem + ".manifest");
  std::ofstream m(man_path, std::ios::binary);
  m << "config_hash=" << ctx.hash << '\n'
    << "preset=" << preset.name << '\n'
    << "integrator=" << to_string(rc.integrator) << '\n'
    << "dt=" << format_number(res.dt) << '\n'
    << "dt_euler=" << format_number(res.dt_euler) << '\n'
    << "steps=" << rc.steps << '\n'
    << "tol=" << format_number(rc.tol) << '\n'
    << "blocks=" << rc.blocks << '\n'
    << "cadence=" << rc.cadence << '\n'
    << "total_iterations=" << res.total.iterations << '\n'
    << "total_local_events=" << res.total.local_events << '\n'
    << "total_global_events=" << res.total.global_events << '\n';
  finish(m, man_path);
  return 0;
}

// ---- scale-sim

int cmd_scale_sim(const Context& ctx) {
  const std::string name = ctx.cfg.get_string("scale", "preset", "comet");
  TopologyPreset preset;
  try {
    preset = topology_preset(name);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown preset '" + name + "' (presets: " + join(topology_preset_names()) + ")");
  }
  CostModel cost;
  try {
    cost = cost_model_from_config(ctx.cfg, "cost");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cost.seed = seed_of(ctx.cfg);
  const auto units = ctx.cfg.get_int("scale", "units", 200);
  if (units < 1) throw UsageError("[scale] units must be >= 1");
  const auto u = static_cast<std::size_t>(units);
  const auto rows = sweep_topologies(preset.grid_sizes, preset.topologies,
                                     {pcg_profile(u, cost.global_events_per_iteration), rkl2_profile(u)},
                                     cost);
  const fs::path path = ctx.out / ("scale_" + preset.name + ".csv");
  auto f = open_csv(path);
  write_scaling_csv(f, rows, ctx.hash);
  finish(f, path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stiff diffusion time-stepping experiments"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--out", common.out, "output directory (default $STIFFSTEP_OUT or ./out)");
  app.add_option("--seed", common.seed, "seed for randomized parts");
  app.fallthrough();

  // Flag values land in the config so they are part of the hash.
  std::vector<std::pair<std::string, std::string>> overrides;
  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& section,
                  const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&overrides, section, key](const std::string& v) { overrides.emplace_back(section + "." + key, v); },
        help);
  };

  auto* converge = app.add_subcommand("converge", "temporal order study on the 1-D heat equation");
  flag(converge, "--scheme", "converge", "scheme", "integrator (" + join(integrator_names()) + ")");
  flag(converge, "--dt-ratio", "converge", "dt_ratio", "largest dt as a multiple of dt_euler");
  flag(converge, "--tol", "converge", "tol", "PCG tolerance");

  auto* stability = app.add_subcommand("stability", "compare eigenvalue bounds of a preset operator");
  flag(stability, "--preset", "stability", "preset", "problem preset (" + join(problem_preset_names()) + ")");

  auto* amp = app.add_subcommand("amp", "amplification factor curves");
  flag(amp, "--ratios", "amp", "ratios", "comma-separated dt / dt_euler ratios");

  auto* speedup = app.add_subcommand("speedup", "estimated RKL2 speedup over explicit Euler");
  flag(speedup, "--max-ratio", "speedup", "max_ratio", "largest ratio in the log grid");

  auto* runcmd = app.add_subcommand("run", "end-to-end diffusion run");
  flag(runcmd, "--preset", "run", "preset", "problem preset (" + join(problem_preset_names()) + ")");
  flag(runcmd, "--scheme", "run", "integrator", "integrator (" + join(integrator_names()) + ")");
  flag(runcmd, "--blocks", "run", "blocks", "PC2 block count");
  flag(runcmd, "--dt-ratio", "run", "dt_ratio", "dt as a multiple of dt_euler");
  flag(runcmd, "--steps", "run", "steps", "number of steps");
  flag(runcmd, "--tol", "run", "tol", "PCG tolerance");

  auto* scale = app.add_subcommand("scale-sim", "modeled strong scaling over a topology preset");
  flag(scale, "--preset", "scale", "preset", "topology preset (" + join(topology_preset_names()) + ")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "stiffstep: usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    Config cfg = load_config(common);
    for (const auto& [dotted, value] : overrides) {
      const auto dot = dotted.find('.');
      cfg.set(dotted.substr(0, dot), dotted.substr(dot + 1), value);
    }
    const Context ctx = prepare(common, std::move(cfg));
    if (converge->parsed()) return cmd_converge(ctx);
    if (stability->parsed()) return cmd_stability(ctx);
    if (amp->parsed()) return cmd_amp(ctx);
    if (speedup->parsed()) return cmd_speedup(ctx);
    if (runcmd->parsed()) return cmd_run(ctx);
    if (scale->parsed()) return cmd_scale_sim(ctx);
  } catch (const UsageError& e) {
    std::cerr << "stiffstep: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "stiffstep: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "stiffstep: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
