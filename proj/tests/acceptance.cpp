// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-stiffstep-cli>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "stiffstep/analysis.hpp"
#include "stiffstep/commsim.hpp"
#include "stiffstep/driver.hpp"
#include "stiffstep/krylov.hpp"
#include "stiffstep/operators.hpp"
#include "stiffstep/precond.hpp"
#include "stiffstep/stability.hpp"
#include "stiffstep/sts.hpp"

using namespace stiffstep;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed sub-checks so a criterion reports every reason at once.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  void note(const std::string& text) {
    if (!notes_.empty()) notes_ += "; ";
    notes_ += text;
  }
  Outcome done() const { return {pass_, pass_ ? notes_ : failures_ + (notes_.empty() ? "" : " | " + notes_)}; }

 private:
  bool pass_ = true;
  std::string failures_;
  std::string notes_;
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

DiffusionProblem heat_problem(std::size_t n = 99) {
  return assemble_diffusion_1d(make_uniform_grid(n, 1.0), std::vector<double>(n, 1.0),
                               BoundaryType::dirichlet_zero);
}

// 1. Temporal order over dt halvings at ratio 10.
Outcome order_of_accuracy() {
  Checks c;
  const auto sts = convergence_study(Integrator::rkl2, 10.0, 4, 4, 1e-12);
  const auto be = convergence_study(Integrator::be_pcg_pc1, 10.0, 4, 4, 1e-12);
  std::string so, bo;
  for (std::size_t i = 1; i < sts.size(); ++i) {
    c.expect(std::abs(*sts[i].order - 2.0) <= 0.2, "rkl2 order " + fmt(*sts[i].order));
    c.expect(std::abs(*be[i].order - 1.0) <= 0.2, "BE order " + fmt(*be[i].order));
    so += (i > 1 ? "," : "") + fmt(*sts[i].order, "%.4f");
    bo += (i > 1 ? "," : "") + fmt(*be[i].order, "%.4f");
  }
  c.note("rkl2 orders " + so + ", BE orders " + bo + " (oracle: exact decay of the discrete sine mode)");
  return c.done();
}

// 2. Minimal stage count.
Outcome stage_formula() {
  Checks c;
  std::size_t checked = 0;
  for (double ratio = 0.1; ratio <= 1e4 * (1 + 1e-12); ratio *= std::pow(10.0, 0.01)) {
    int want = 2;
    while ((want * want + want - 2) / 4.0 < ratio) ++want;
    const int got = rkl2_stages_for_ratio(ratio);
    if (got != want) c.expect(false, "s(" + fmt(ratio) + ") = " + std::to_string(got));
    ++checked;
  }
  c.expect(rkl2_stages(1.0, 1.0) == 2, "s(1)");
  c.expect(rkl2_stages(100.0, 1.0) == 20, "s(100)");
  c.expect(rkl2_stages(500.0, 1.0) == 45, "s(500)");
  c.note(std::to_string(checked) + " ratios scanned, s(1)=2 s(100)=20 s(500)=45");
  return c.done();
}

// 3. Max norm never grows over 20 steps; one step keeps non-negative data non-negative.
Outcome stability_positivity() {
  Checks c;
  const auto prob = heat_problem();
  const double dt_euler = gershgorin_bound(prob.M).dt_euler;
  std::mt19937_64 rng(2024);
  double worst_neg = 0.0;
  for (double ratio : {5.0, 50.0, 500.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const double dt = ratio * dt_euler;
      const auto sch = schedule_for(dt, dt_euler);
      std::vector<double> u = random_vector(rng, prob.M.size(), 0.0, 1.0);
      const double max0 = max_abs(u);
      const auto first = rkl2_step(prob.M, u, dt, sch).u;
      const double lowest = *std::min_element(first.begin(), first.end());
      worst_neg = std::min(worst_neg, lowest / max0);
      c.expect(lowest >= -1e-12 * max0, "negative value " + fmt(lowest) + " at ratio " + fmt(ratio));
      double prev = max0;
      for (int step = 0; step < 20; ++step) {
        u = rkl2_step(prob.M, u, dt, sch).u;
        const double now = max_abs(u);
        if (now > prev * (1 + 1e-14)) {
          c.expect(false, "max norm grew at ratio " + fmt(ratio) + " step " + std::to_string(step + 1));
          break;
        }
        prev = now;
      }
    }
  }
  // Diagnostics: smallest propagator entry and smallest per-mode factor.
  std::string diag;
  for (double ratio : {5.0, 50.0, 500.0}) {
    const double dt = ratio * dt_euler;
    const auto sch = schedule_for(dt, dt_euler);
    double entry = 0.0;
    for (std::size_t j = 0; j < prob.M.size(); ++j) {
      std::vector<double> e(prob.M.size(), 0.0);
      e[j] = 1.0;
      const auto col = rkl2_step(prob.M, e, dt, sch).u;
      entry = std::min(entry, *std::min_element(col.begin(), col.end()));
    }
    const auto curve = amplification_curve(ratio);
    diag += (diag.empty() ? "" : ", ") + fmt(ratio) + ": min entry " + fmt(entry, "%.3g") + ", min G " +
            fmt(*std::min_element(curve.rkl2.begin(), curve.rkl2.end()), "%.3f");
  }
  c.note("most negative one-step value / max(u0) = " + fmt(worst_neg, "%.3g") + "; propagator by ratio " + diag);
  return c.done();
}

// 4. Amplification claims.
Outcome amplification() {
  Checks c;
  const int s500 = rkl2_stages_for_ratio(500.0);
  const double g_rkl2 = std::abs(amp_rkl2(mode_z(pi, 500.0), s500));
  const double g_be = std::abs(amp_be(mode_z(pi, 500.0)));
  c.expect(g_rkl2 >= 0.3 && g_rkl2 <= 0.7, "|G_rkl2(pi)| = " + fmt(g_rkl2));
  c.expect(std::abs(g_be - 1.0 / 1001.0) <= 1e-9, "|G_be(pi)| = " + fmt(g_be));

  const auto curve = amplification_curve(500.0);
  bool up = false, down = false;
  for (std::size_t i = 1; i < curve.rkl2.size(); ++i) {
    const double d = std::abs(curve.rkl2[i]) - std::abs(curve.rkl2[i - 1]);
    up = up || d > 0;
    down = down || d < 0;
  }
  c.expect(up && down, "|G_rkl2| is monotone over modes");

  const auto low = amplification_curve(5.0);
  for (std::size_t i = 0; i < low.k_dx.size() && low.k_dx[i] <= 0.2; ++i) {
    if (std::abs(low.rkl2[i] - low.exact[i]) >= std::abs(low.be[i] - low.exact[i])) {
      c.expect(false, "BE closer than RKL2 at k dx = " + fmt(low.k_dx[i]));
      break;
    }
  }

  // Periodic -2/1/1 operator on unit spacing: dt_euler = 1/2, cos modes are eigenvectors.
  const std::size_t n = 64;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, -2.0});
    t.push_back({i, (i + 1) % n, 1.0});
    t.push_back({i, (i + n - 1) % n, 1.0});
  }
  const auto m = SparseMatrix::from_triplets(n, t, SparseMatrix::Layout::csr);
  double worst = 0.0;
  for (double ratio : {5.0, 50.0, 500.0}) {
    const auto sch = schedule_for(ratio * 0.5, 0.5);
    for (std::size_t mode = 1; mode <= n / 2; ++mode) {
      const double k = 2.0 * pi * static_cast<double>(mode) / static_cast<double>(n);
      std::vector<double> u(n);
      for (std::size_t j = 0; j < n; ++j) u[j] = std::cos(k * static_cast<double>(j));
      const auto out = rkl2_step(m, u, ratio * 0.5, sch).u;
      const double g = rkl2_scalar_amplification(mode_z(k, ratio), sch);
      for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(out[j] - g * u[j]));
    }
  }
  c.expect(worst <= 1e-10, "scalar vs matrix mismatch " + fmt(worst));
  c.note("|G_rkl2(pi)| = " + fmt(g_rkl2, "%.4f") + " (s = " + std::to_string(s500) + "), |G_be(pi)| = " +
         fmt(g_be) + ", scalar/matrix gap " + fmt(worst, "%.2g"));
  return c.done();
}

// 5. Speedup model.
Outcome speedup() {
  Checks c;
  c.expect(speedup_estimate(1.0) == 0.5, "speedup(1) = " + fmt(speedup_estimate(1.0)));
  c.expect(speedup_estimate(100.0) == 5.0, "speedup(100) = " + fmt(speedup_estimate(100.0)));
  c.expect(std::abs(speedup_estimate(500.0) - 500.0 / 45.0) <= 1e-12, "speedup(500)");
  std::size_t pairs = 0;
  double prev = 1.0;
  for (double r = 1.0 * 1.003; r <= 1000.0; r *= 1.003) {
    if (rkl2_stages_for_ratio(r) == rkl2_stages_for_ratio(prev)) {
      ++pairs;
      c.expect(speedup_estimate(r) > speedup_estimate(prev), "flat or falling at ratio " + fmt(r));
    }
    prev = r;
  }
  c.note(std::to_string(pairs) + " equal-s neighbours checked");
  return c.done();
}

// 6. Preconditioner limits.
Outcome preconditioners() {
  Checks c;
  std::mt19937_64 rng(6);

  // Unit blocks reproduce PC1.
  const auto heat = heat_problem();
  const double dt_euler = gershgorin_bound(heat.M).dt_euler;
  const auto a = be_system(heat, 50.0 * dt_euler);
  const auto b = random_vector(rng, a.size(), -0.5, 0.5);
  const std::vector<double> x0(a.size(), 0.0);
  auto iterates = [&](const Preconditioner& p) {
    std::vector<std::vector<double>> xs;
    PcgOptions opt;
    opt.tol = 1e-9;
    opt.observer = [&](const PcgIterate& it) { xs.emplace_back(it.x.begin(), it.x.end()); };
    pcg_solve(a, b, x0, p, opt);
    return xs;
  };
  const auto i1 = iterates(build_pc1(a));
  const auto i2 = iterates(build_pc2(a, uniform_blocks(a.size(), a.size())));
  c.expect(i1.size() == i2.size(), "unit-block iteration count differs");
  double gap = 0.0;
  for (std::size_t k = 0; k < std::min(i1.size(), i2.size()); ++k)
    for (std::size_t j = 0; j < i1[k].size(); ++j) gap = std::max(gap, std::abs(i1[k][j] - i2[k][j]));
  c.expect(gap <= 1e-12, "unit-block iterate gap " + fmt(gap));

  // Single block on tridiagonal SPD systems.
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(trial) * 7;
    const auto off = random_vector(rng, n, -1.0, -0.05);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.01 + (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
      if (i > 0) t.push_back({i, i - 1, off[i - 1]});
      if (i + 1 < n) t.push_back({i, i + 1, off[i]});
      t.push_back({i, i, d});
    }
    const auto tri = SparseMatrix::from_triplets(n, t, SparseMatrix::Layout::dia);
    const auto rhs = random_vector(rng, n, -1, 1);
    const auto res = pcg_solve(tri, rhs, std::vector<double>(n, 0.0), build_pc2(tri, uniform_blocks(n, 1)), 1e-10, 0);
    c.expect(res.report.converged && res.report.iterations == 1,
             "single block took " + std::to_string(res.report.iterations) + " iterations (n = " + std::to_string(n) + ")");
  }

  // Ordering on the ratio-50 BE system.
  const auto pc1 = pcg_solve(a, b, x0, build_pc1(a), 1e-9, 0).report.iterations;
  std::string counts;
  std::size_t previous = SIZE_MAX, four = 0;
  for (std::size_t blocks : {99u, 49u, 32u, 16u, 8u, 4u, 2u, 1u}) {
    const auto it = pcg_solve(a, b, x0, build_pc2(a, uniform_blocks(a.size(), blocks)), 1e-9, 0).report.iterations;
    if (blocks == 4) four = it;
    c.expect(it <= previous, "PC2 count rose at " + std::to_string(blocks) + " blocks");
    previous = it;
    counts += (counts.empty() ? "" : ",") + std::to_string(it);
  }
  c.expect(four <= pc1, "PC2(4) " + std::to_string(four) + " > PC1 " + std::to_string(pc1));
  c.note("PC1 " + std::to_string(pc1) + " its, PC2 by blocks 99..1: " + counts);
  return c.done();
}

// 7. Gershgorin bounds.
Outcome gershgorin() {
  Checks c;
  struct Case {
    const char* preset;
    double p;
  };
  std::string info;
  for (const Case k : {Case{"heat-1d", 3}, Case{"heat-1d-stretched", 3}, Case{"mas-corona-1d", 3},
                       Case{"conduction-2d", 9}}) {
    const auto preset = problem_preset(k.preset);
    const auto m = preset.assemble(preset.initial).M;
    const auto g = gershgorin_bound(m);
    const auto it = power_iteration_lambda_max(m, 1e-12);
    c.expect(it.converged, std::string(k.preset) + ": power iteration did not converge");
    c.expect(g.lambda_max_bound >= it.value * (1 - 1e-9), std::string(k.preset) + ": bound below |lambda|max");
    c.expect(g.lambda_max_bound <= std::sqrt(k.p) * it.value, std::string(k.preset) + ": bound looser than sqrt(p)");
    c.expect(std::abs(g.dt_euler - 2.0 / g.lambda_max_bound) <= 1e-15 * g.dt_euler, "dt_euler != 2/bound");
    info += std::string(info.empty() ? "" : ", ") + k.preset + " " + fmt(g.lambda_max_bound / it.value, "%.4f");
  }
  const auto grid = make_uniform_grid(60, 1.0);
  std::vector<double> alpha(60);
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = 1.0 + 9.0 * static_cast<double>(i) / 59.0;
  const auto prob = assemble_diffusion_1d(grid, alpha, BoundaryType::dirichlet_zero);
  const double kt = ktilde_bound(grid, 10.0).lambda_max_bound;
  const double gb = gershgorin_bound(prob.M).lambda_max_bound;
  c.expect(kt >= gb, "ktilde below Gershgorin");
  c.note("bound / |lambda|max: " + info + "; ktilde/gershgorin " + fmt(kt / gb, "%.4f"));
  return c.done();
}

// 8. Communication tallies.
Outcome tallies() {
  Checks c;
  std::size_t runs = 0;
  for (const char* preset : {"heat-1d", "heat-1d-stretched", "conduction-2d"}) {
    for (auto integ : {Integrator::be_pcg_pc1, Integrator::be_pcg_pc2, Integrator::rkl2}) {
      RunConfig rc;
      rc.preset = preset;
      rc.integrator = integ;
      rc.dt_ratio = 30.0;
      rc.steps = 6;
      rc.cadence = 1;
      const auto res = run(rc);
      ++runs;
      const std::string tag = std::string(preset) + "/" + to_string(integ);
      std::size_t iters = 0, sum_s = 0;
      for (std::size_t k = 0; k < res.reports.size(); ++k) {
        const auto& r = res.reports[k];
        iters += r.iterations;
        if (integ == Integrator::rkl2) {
          const auto before = res.problem.assemble(res.snapshots[k].u);
          const int s = rkl2_stages(res.dt, gershgorin_bound(before.M).dt_euler);
          sum_s += static_cast<std::size_t>(s);
          c.expect(r.local_events == static_cast<std::size_t>(s), tag + ": local != s");
          c.expect(r.global_events == 0, tag + ": global events");
        } else {
          c.expect(r.global_events == 3 * r.iterations, tag + ": global != 3 iterations");
          c.expect(r.local_events == r.iterations + 1, tag + ": local != iterations + 1");
        }
      }
      if (integ == Integrator::rkl2) {
        c.expect(res.total.local_events == sum_s && res.total.global_events == 0, tag + ": totals");
      } else {
        c.expect(res.total.global_events == 3 * iters, tag + ": total global");
        c.expect(res.total.local_events == iters + res.reports.size(), tag + ": total local");
      }
    }
  }
  c.note(std::to_string(runs) + " runs checked step by step");
  return c.done();
}

// 9. Scaling mechanism.
Outcome scaling() {
  Checks c;
  const auto comet = topology_preset("comet");
  const double imb = max_load_imbalance(decompose(comet.grid_sizes, {6, 12, 24}));
  c.expect(std::abs(imb - 16926.0 / 15000.0) <= 1e-12, "imbalance " + fmt(imb, "%.15g"));

  CostModel quiet;
  quiet.jitter = 0.0;
  const auto rows = sweep_topologies(comet.grid_sizes, comet.topologies, {pcg_profile(200), rkl2_profile(200)}, quiet);
  std::size_t compared = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    if (rows[i].load_imbalance <= 1.0) continue;
    ++compared;
    c.expect(rows[i + 1].efficiency > rows[i].efficiency,
             "RKL2 not ahead at " + std::to_string(rows[i].cores) + " cores");
  }

  CostModel noisy;
  const auto pcg = sweep_topologies(comet.grid_sizes, comet.topologies, {pcg_profile(200)}, noisy);
  std::string shares;
  for (std::size_t i = 0; i < pcg.size(); ++i) {
    if (i > 0) c.expect(pcg[i].global_share() >= pcg[i - 1].global_share(), "share fell at " + std::to_string(pcg[i].cores) + " cores");
    shares += (i ? "," : "") + fmt(pcg[i].global_share(), "%.3f");
  }
  c.note("imbalance(6,12,24) = " + fmt(imb, "%.6f") + ", " + std::to_string(compared) +
         " topologies compared, PCG global share " + shares + " (jitter " + fmt(noisy.jitter) + ")");
  return c.done();
}

// 10. Euler prefix damping of the highest mode.
Outcome hybrid() {
  Checks c;
  // Scalar mode pi on unit spacing: lambda = -4, dt_euler = 1/2.
  const std::vector<Triplet> t = {{0, 0, -4.0}};
  const auto m = SparseMatrix::from_triplets(1, t, SparseMatrix::Layout::dia);
  const double dt = 500.0 * 0.5;
  const auto out = hybrid_euler_rkl2(m, std::vector<double>{1.0}, dt, 0.5, 0.25, 0.9);
  const double damping = std::abs(out.u[0]);
  const double be = std::abs(amp_be(-4.0 * dt));
  c.expect(damping < 1e-10, "hybrid damping " + fmt(damping));
  c.expect(damping < be, "hybrid not below BE");
  c.note("hybrid |G(pi)| = " + fmt(damping, "%.3g") + ", BE " + fmt(be, "%.3g"));
  return c.done();
}

// 11. Nonlinear conduction agreement.
Outcome conduction() {
  Checks c;
  RunConfig rc;
  rc.preset = "conduction-2d";
  rc.dt_ratio = 20.0;
  rc.steps = 5;
  rc.integrator = Integrator::rkl2;
  const auto sts = run(rc);
  rc.integrator = Integrator::be_pcg_pc2;
  const auto be = run(rc);
  const double diff = relative_l2(sts.final_state(), be.final_state());
  c.expect(diff < 0.05, "relative L2 " + fmt(diff));
  c.note("relative L2 = " + fmt(100 * diff, "%.3f") + "%");
  return c.done();
}

// 12. Byte-identical CLI reruns.
std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
  Checks c;
  if (cli.empty()) {
    c.expect(false, "no CLI path given");
    return c.done();
  }
  const fs::path root = fs::temp_directory_path() / ("stiffstep-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::string> commands = {
      "converge --scheme rkl2", "converge --scheme be-pcg-pc2", "stability --preset conduction-2d",
      "amp", "speedup", "run --preset conduction-2d --scheme rkl2 --steps 3",
      "run --preset heat-1d --scheme be-pcg-pc2 --steps 3", "scale-sim --preset comet",
      "scale-sim --preset stampede"};
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::to_string(i) + "_" + std::to_string(rep));
      const std::string cmd = "\"" + cli + "\" --seed 7 --out \"" + dir.string() + "\" " + commands[i] + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) c.expect(false, "'" + commands[i] + "' failed");
      dirs.push_back(dir);
    }
    std::vector<fs::path> names;
    if (fs::exists(dirs[0]))
      for (const auto& e : fs::directory_iterator(dirs[0])) names.push_back(e.path().filename());
    c.expect(!names.empty(), "'" + commands[i] + "' wrote nothing");
    for (const auto& name : names) {
      ++files;
      c.expect(fs::exists(dirs[1] / name) && read_file(dirs[0] / name) == read_file(dirs[1] / name),
               "'" + commands[i] + "' " + name.string() + " differs");
    }
    if (fs::exists(dirs[1])) {
      std::size_t second = 0;
      for ([[maybe_unused]] const auto& e : fs::directory_iterator(dirs[1])) ++second;
      c.expect(second == names.size(), "'" + commands[i] + "' file sets differ");
    }
  }
  fs::remove_all(root);
  c.note(std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files compared");
  return c.done();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds; <= 0 means no limit
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "temporal order: RKL2 2.0 +- 0.2, BE 1.0 +- 0.2", 5, order_of_accuracy},
      {2, "minimal RKL2 stage count", 1, stage_formula},
      {3, "RKL2 max-norm stability and positivity", 5, stability_positivity},
      {4, "amplification factor claims", 2, amplification},
      {5, "speedup model", 1, speedup},
      {6, "preconditioner limits", 5, preconditioners},
      {7, "Gershgorin bounds", 5, gershgorin},
      {8, "communication tallies", 0, tallies},
      {9, "scaling mechanism", 2, scaling},
      {10, "hybrid Euler prefix damping", 1, hybrid},
      {11, "RKL2 vs BE on nonlinear conduction", 10, conduction},
      {12, "byte-identical CLI reruns", 0, [&] { return determinism(cli); }},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit > 0 && secs > cr.limit) {
      out.pass = false;
      out.detail += " | over the " + fmt(cr.limit) + " s limit";
    }
    std::string timing = fmt(secs, "%.3f") + " s";
    if (cr.limit > 0) timing += " / limit " + fmt(cr.limit) + " s";
    std::printf("%s [%d] %s (%s): %s\n", out.pass ? "PASS" : "FAIL", cr.id, cr.title, timing.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
