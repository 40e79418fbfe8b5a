#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <array>
#include <vector>

#include "stiffstep/operators.hpp"
#include "stiffstep/report.hpp"

namespace stiffstep {

class Config;

/// A solver failure inside a run, tagged with the 1-based step where it happened.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

enum class Integrator { be_pcg_pc1, be_pcg_pc2, rkl2, rkl2_subcycled, euler, hybrid };

std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& name);
std::vector<std::string> integrator_names();

/// A named test problem. Linear presets assemble their operator once; the
/// nonlinear conduction preset re-assembles it from the previous step's
/// temperature (lagged diffusivity).
struct ProblemPreset {
  std::string name;
  NonuniformGrid grid;
  std::vector<double> initial;
  bool nonlinear = false;
  BoundaryType bc = BoundaryType::dirichlet_zero;
  std::vector<double> alpha;                 // linear 1-D presets
  std::vector<std::array<double, 2>> bhat;  // 2-D presets
  TemperatureCoefficient coefficient;        // nonlinear presets

  /// Operator for the state `u_prev` (ignored by linear presets).
  DiffusionProblem assemble(const std::vector<double>& u_prev) const;
};

/// heat-1d, heat-1d-neumann, heat-1d-stretched, mas-corona-1d, conduction-2d.
ProblemPreset problem_preset(const std::string& name);
std::vector<std::string> problem_preset_names();

struct RunConfig {
  std::string preset = "heat-1d";
  Integrator integrator = Integrator::rkl2;
  /// Fixed step when set; otherwise dt = dt_ratio * dt_euler of the initial operator.
  std::optional<double> dt;
  double dt_ratio = 10.0;
  std::size_t steps = 10;
  double tol = 1e-9;
  std::size_t kmax = 0;
  std::size_t blocks = 4;
  std::size_t cadence = 1;
  int subcycles = 10;
  double hybrid_fraction = 0.25;
  double safety = 0.9;
  bool force_odd = false;
  /// Pins the RKL2 stage count (it must still cover dt); otherwise chosen per step.
  std::optional<int> stages;
};

RunConfig run_config_from(const Config& cfg, const std::string& section = "run");

struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  std::vector<double> u;
};

struct RunResult {
  ProblemPreset problem;
  double dt = 0.0;
  double dt_euler = 0.0;
  std::vector<Snapshot> snapshots;
  /// One report per step.
  std::vector<SolveReport> reports;
  SolveReport total;

  const std::vector<double>& final_state() const { return snapshots.back().u; }
};

/// Operator-split parabolic advance: `steps` steps of the chosen integrator,
/// snapshots every `cadence` steps plus the first and last state.
RunResult run(const RunConfig& config);
RunResult run(const RunConfig& config, const ProblemPreset& problem);

/// Relative L2 difference ||a - b|| / ||b||.
double relative_l2(const std::vector<double>& a, const std::vector<double>& b);

/// Error of the integrator on heat-1d (u0 = sin(pi x), Dirichlet) against the
/// exact decay of the discrete sine mode, over dt halvings from
/// dt = ratio * dt_euler to a fixed final time.
struct ConvergenceRow {
  double dt = 0.0;
  std::size_t steps = 0;
  double error = 0.0;
  /// log2(previous error / error); absent on the first row.
  std::optional<double> order;
};

std::vector<ConvergenceRow> convergence_study(Integrator integrator, double ratio,
                                              std::size_t levels, std::size_t base_steps = 4,
                                              double tol = 1e-12, std::size_t points = 99);

}  // namespace stiffstep
