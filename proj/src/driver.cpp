#include "stiffstep/driver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stiffstep/config.hpp"
#include "stiffstep/krylov.hpp"
#include "stiffstep/precond.hpp"
#include "stiffstep/stability.hpp"
#include "stiffstep/sts.hpp"

namespace stiffstep {

std::string to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::be_pcg_pc1:
      return "be-pcg-pc1";
    case Integrator::be_pcg_pc2:
      return "be-pcg-pc2";
    case Integrator::rkl2:
      return "rkl2";
    case Integrator::rkl2_subcycled:
      return "rkl2-subcycled";
    case Integrator::euler:
      return "euler";
    case Integrator::hybrid:
      return "hybrid";
  }
  return "unknown";
}

std::vector<std::string> integrator_names() {
  return {"be-pcg-pc1", "be-pcg-pc2", "rkl2", "rkl2-subcycled", "euler", "hybrid"};
}

Integrator parse_integrator(const std::string& name) {
  for (auto i : {Integrator::be_pcg_pc1, Integrator::be_pcg_pc2, Integrator::rkl2,
                 Integrator::rkl2_subcycled, Integrator::euler, Integrator::hybrid}) {
    if (to_string(i) == name) return i;
  }
  std::string known;
  for (const auto& n : integrator_names()) known += " " + n;
  throw std::invalid_argument("unknown integrator '" + name + "'; known:" + known);
}

DiffusionProblem ProblemPreset::assemble(const std::vector<double>& u_prev) const {
  if (grid.dimension() == 1) {
    if (nonlinear) return assemble_diffusion_1d(grid, lagged_diffusivity(u_prev, coefficient), bc);
    return assemble_diffusion_1d(grid, alpha, bc);
  }
  if (nonlinear) return assemble_aniso_2d(grid, lagged_diffusivity(u_prev, coefficient), bhat, bc);
  return assemble_aniso_2d(grid, alpha, bhat, bc);
}

std::vector<std::string> problem_preset_names() {
  return {"heat-1d", "heat-1d-neumann", "heat-1d-stretched", "mas-corona-1d", "conduction-2d"};
}

ProblemPreset problem_preset(const std::string& name) {
  ProblemPreset p;
  p.name = name;
  if (name == "heat-1d" || name == "heat-1d-neumann") {
    const bool neumann = name == "heat-1d-neumann";
    p.grid = make_uniform_grid(neumann ? 100 : 99, 1.0);
    p.bc = neumann ? BoundaryType::neumann_zero : BoundaryType::dirichlet_zero;
    const Axis& ax = p.grid.axis(0);
    for (std::size_t i = 0; i < ax.interior_points(); ++i) {
      const double x = ax.node(i);
      p.alpha.push_back(1.0);
      if (neumann) {
        const double bump = std::exp(-std::pow((x - 0.3) / 0.05, 2));
        const double plateau = (x > 0.6 && x < 0.8) ? 0.5 : 0.0;
        p.initial.push_back(1.0 + bump + plateau);
      } else {
        p.initial.push_back(std::sin(std::numbers::pi * x));
      }
    }
    return p;
  }
  if (name == "heat-1d-stretched") {
    p.grid = make_geometric_grid(80, 0.005, 1.03);
    const Axis& ax = p.grid.axis(0);
    const double length = ax.length();
    for (std::size_t i = 0; i < ax.interior_points(); ++i) {
      const double x = ax.node(i) / length;
      p.alpha.push_back(1.0 + 9.0 * x);
      p.initial.push_back(std::sin(std::numbers::pi * x));
    }
    return p;
  }
  if (name == "mas-corona-1d") {
    // Chromosphere-to-corona temperature rise (MK) frozen into the conductivity.
    p.grid = grid_preset("mas-corona-1d");
    p.coefficient = {1.0, 0.5};
    const Axis& ax = p.grid.axis(0);
    for (std::size_t i = 0; i < ax.interior_points(); ++i) {
      const double r = ax.node(i);
      p.initial.push_back(0.02 + 1.38 * (1.0 - std::exp(-(r - 1.0) / 0.005)));
    }
    p.alpha = lagged_diffusivity(p.initial, p.coefficient);
    return p;
  }
  if (name == "conduction-2d") {
    const Axis ax = make_uniform_grid(32, 1.0).axis(0);
    p.grid = NonuniformGrid({ax, ax});
    p.nonlinear = true;
    p.bc = BoundaryType::neumann_zero;
    p.coefficient = {1.0, 0.5};
    const double angle = std::numbers::pi / 6.0;
    for (std::size_t j = 0; j < ax.interior_points(); ++j) {
      for (std::size_t i = 0; i < ax.interior_points(); ++i) {
        const double x = ax.node(i) - 0.5;
        const double y = ax.node(j) - 0.5;
        p.initial.push_back(0.3 + 0.9 * std::exp(-(x * x + y * y) / 0.02));
        p.bhat.push_back({std::cos(angle), std::sin(angle)});
      }
    }
    return p;
  }
  std::string known;
  for (const auto& n : problem_preset_names()) known += " " + n;
  throw std::invalid_argument("unknown preset '" + name + "'; known:" + known);
}

RunConfig run_config_from(const Config& cfg, const std::string& section) {
  RunConfig rc;
  rc.preset = cfg.get_string(section, "preset", rc.preset);
  rc.integrator = parse_integrator(cfg.get_string(section, "integrator", to_string(rc.integrator)));
  if (cfg.has(section, "dt")) rc.dt = cfg.get_double(section, "dt", 0.0);
  rc.dt_ratio = cfg.get_double(section, "dt_ratio", rc.dt_ratio);
  const auto count = [&](const char* key, std::size_t fallback) {
    const long long v = cfg.get_int(section, key, static_cast<long long>(fallback));
    if (v < 0) throw std::invalid_argument(std::string("[run] ") + key + " must be >= 0");
    return static_cast<std::size_t>(v);
  };
  rc.steps = count("steps", rc.steps);
  rc.tol = cfg.get_double(section, "tol", rc.tol);
  rc.kmax = count("kmax", rc.kmax);
  rc.blocks = count("blocks", rc.blocks);
  rc.cadence = count("cadence", rc.cadence);
  rc.subcycles = static_cast<int>(cfg.get_int(section, "subcycles", rc.subcycles));
  rc.hybrid_fraction = cfg.get_double(section, "hybrid_fraction", rc.hybrid_fraction);
  rc.safety = cfg.get_double(section, "safety", rc.safety);
  rc.force_odd = cfg.get_int(section, "force_odd", rc.force_odd ? 1 : 0) != 0;
  if (cfg.has(section, "stages")) rc.stages = static_cast<int>(cfg.get_int(section, "stages", 2));
  return rc;
}

RunResult run(const RunConfig& config) { return run(config, problem_preset(config.preset)); }

namespace {

StepResult advance(const RunConfig& config, const DiffusionProblem& problem,
                   const std::vector<double>& v, double dt, double dt_euler) {
  const SparseMatrix& m = problem.M;
  switch (config.integrator) {
    case Integrator::be_pcg_pc1:
    case Integrator::be_pcg_pc2: {
      const SparseMatrix a = be_system(m, dt);
      const Preconditioner pc =
          config.integrator == Integrator::be_pcg_pc1
              ? build_pc1(a)
              : build_pc2(a, uniform_blocks(a.size(), std::clamp<std::size_t>(config.blocks, 1,
                                                                              a.size())));
      PcgResult solved = pcg_solve(a, v, v, pc, config.tol, config.kmax);
      if (!solved.report.converged) {
        throw std::runtime_error("PCG did not converge in " +
                                 std::to_string(solved.report.iterations) + " iterations");
      }
      return {std::move(solved.x), std::move(solved.report)};
    }
    case Integrator::rkl2: {
      if (!config.stages) return rkl2_step(m, v, dt, schedule_for(dt, dt_euler, config.force_odd));
      const StsSchedule fixed = make_schedule(*config.stages);
      if (fixed.max_ratio() * dt_euler < dt) {
        throw std::invalid_argument(std::to_string(*config.stages) + " stages cannot cover dt");
      }
      return rkl2_step(m, v, dt, fixed);
    }
    case Integrator::rkl2_subcycled:
      return rkl2_subcycled(m, v, dt, config.subcycles, dt_euler, config.force_odd);
    case Integrator::euler: {
      EulerResult e = euler_subcycle(m, v, dt, dt_euler, config.safety);
      return {std::move(e.u), e.report};
    }
    case Integrator::hybrid:
      return hybrid_euler_rkl2(m, v, dt, dt_euler, config.hybrid_fraction, config.safety);
  }
  throw std::logic_error("unhandled integrator");
}

}  // namespace

RunResult run(const RunConfig& config, const ProblemPreset& problem) {
  RunResult out;
  out.problem = problem;
  std::vector<double> u = problem.initial;
  DiffusionProblem current = problem.assemble(u);
  out.dt_euler = gershgorin_bound(current.M).dt_euler;
  out.dt = config.dt ? *config.dt : config.dt_ratio * out.dt_euler;
  if (!(out.dt > 0.0) || !std::isfinite(out.dt)) {
    throw std::invalid_argument("run: dt must be positive and finite");
  }
  const std::size_t cadence = std::max<std::size_t>(config.cadence, 1);
  out.snapshots.push_back({0, 0.0, u});

  for (std::size_t step = 1; step <= config.steps; ++step) {
    if (problem.nonlinear && step > 1) current = problem.assemble(u);
    const double dt_euler = gershgorin_bound(current.M).dt_euler;
    StepResult advanced;
    try {
      advanced = advance(config, current, current.to_scaled(u), out.dt, dt_euler);
    } catch (const std::exception& e) {
      throw SolverError(step, e.what());
    }
    u = current.from_scaled(advanced.u);
    out.total += advanced.report;
    out.reports.push_back(std::move(advanced.report));
    if (step % cadence == 0 || step == config.steps) {
      out.snapshots.push_back({step, static_cast<double>(step) * out.dt, u});
    }
  }
  return out;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_l2: size mismatch");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    ref += b[i] * b[i];
  }
  return std::sqrt(diff / ref);
}

std::vector<ConvergenceRow> convergence_study(Integrator integrator, double ratio,
                                              std::size_t levels, std::size_t base_steps,
                                              double tol, std::size_t points) {
  ProblemPreset heat = problem_preset("heat-1d");
  heat.grid = make_uniform_grid(points, 1.0);
  heat.alpha.assign(points, 1.0);
  heat.initial.clear();
  const Axis& ax = heat.grid.axis(0);
  for (std::size_t i = 0; i < points; ++i) {
    heat.initial.push_back(std::sin(std::numbers::pi * ax.node(i)));
  }
  // sin(pi x) is an eigenvector of the discrete operator.
  const double h = ax.spacings[0];
  const double s = std::sin(0.5 * std::numbers::pi * h);
  const double lambda = -4.0 / (h * h) * s * s;
  const double dt_euler = gershgorin_bound(heat.assemble(heat.initial).M).dt_euler;
  const double t_final = static_cast<double>(base_steps) * ratio * dt_euler;

  std::vector<double> exact = heat.initial;
  for (double& v : exact) v *= std::exp(lambda * t_final);

  std::vector<ConvergenceRow> rows;
  for (std::size_t level = 0; level < levels; ++level) {
    RunConfig rc;
    rc.integrator = integrator;
    rc.steps = base_steps << level;
    rc.dt = t_final / static_cast<double>(rc.steps);
    rc.tol = tol;
    rc.cadence = rc.steps;
    // Holding s fixed keeps the error constant the same across halvings.
    if (integrator == Integrator::rkl2) rc.stages = rkl2_stages_for_ratio(ratio);
    const RunResult res = run(rc, heat);
    ConvergenceRow row;
    row.dt = *rc.dt;
    row.steps = rc.steps;
    row.error = relative_l2(res.final_state(), exact);
    if (!rows.empty()) row.order = std::log2(rows.back().error / row.error);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stiffstep
