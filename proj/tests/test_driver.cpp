#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "stiffstep/config.hpp"
#include "stiffstep/driver.hpp"
#include "stiffstep/sts.hpp"

using namespace stiffstep;

namespace {

RunConfig make(const std::string& preset, Integrator integrator, double ratio, std::size_t steps) {
  RunConfig rc;
  rc.preset = preset;
  rc.integrator = integrator;
  rc.dt_ratio = ratio;
  rc.steps = steps;
  return rc;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("zero steps echo the initial state") {
    for (const auto& name : problem_preset_names()) {
      const auto res = run(make(name, Integrator::rkl2, 10.0, 0));
      REQUIRE(res.snapshots.size() == 1);
      CHECK(res.final_state() == res.problem.initial);
      CHECK(res.reports.empty());
      CHECK(res.total.local_events == 0);
    }
  }

  TEST_CASE("PC1 and PC2 agree on a linear problem") {
    auto rc = make("heat-1d", Integrator::be_pcg_pc1, 50.0, 10);
    rc.tol = 1e-10;
    const auto a = run(rc);
    rc.integrator = Integrator::be_pcg_pc2;
    const auto b = run(rc);
    std::vector<double> diff(a.final_state().size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.final_state()[i] - b.final_state()[i];
    CHECK(norm(diff) <= 10 * rc.tol * norm(a.problem.initial));
    CHECK(b.total.iterations < a.total.iterations);
  }

  TEST_CASE("RKL2 and BE agree on nonlinear conduction") {
    auto rc = make("conduction-2d", Integrator::rkl2, 20.0, 5);
    const auto sts = run(rc);
    rc.integrator = Integrator::be_pcg_pc2;
    const auto be = run(rc);
    CHECK(relative_l2(sts.final_state(), be.final_state()) < 0.05);
  }

  TEST_CASE("Neumann runs conserve the integral") {
    for (const auto& name : integrator_names()) {
      CAPTURE(name);
      auto rc = make("heat-1d-neumann", parse_integrator(name), 20.0, 6);
      rc.tol = 1e-13;
      const auto res = run(rc);
      const auto prob = res.problem.assemble(res.problem.initial);
      const double before = prob.integral(res.problem.initial);
      const double after = prob.integral(res.final_state());
      CHECK(std::abs(after - before) <= 1e-9 * std::abs(before));
    }
  }

  TEST_CASE("stretched Dirichlet runs obey the maximum principle") {
    for (const char* preset : {"heat-1d-stretched", "mas-corona-1d"}) {
      for (const auto& name : integrator_names()) {
        CAPTURE(preset);
        CAPTURE(name);
        const auto res = run(make(preset, parse_integrator(name), 20.0, 5));
        const double bound = testing::max_abs(res.problem.initial);
        for (const auto& snap : res.snapshots) CHECK(testing::max_abs(snap.u) <= bound * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("report arithmetic") {
    const auto be = run(make("heat-1d", Integrator::be_pcg_pc1, 50.0, 4));
    REQUIRE(be.reports.size() == 4);
    std::size_t iters = 0;
    for (const auto& r : be.reports) {
      CHECK(r.global_events == 3 * r.iterations);
      CHECK(r.local_events == r.iterations + 1);
      iters += r.iterations;
    }
    CHECK(be.total.iterations == iters);
    CHECK(be.total.global_events == 3 * iters);
    CHECK(be.total.local_events == iters + 4);

    const auto sts = run(make("heat-1d", Integrator::rkl2, 50.0, 4));
    for (const auto& r : sts.reports) {
      CHECK(r.global_events == 0);
      CHECK(r.local_events == static_cast<std::size_t>(rkl2_stages_for_ratio(50.0)));
    }
  }

  TEST_CASE("snapshots follow the cadence") {
    auto rc = make("heat-1d", Integrator::rkl2, 5.0, 7);
    rc.cadence = 3;
    const auto res = run(rc);
    std::vector<std::size_t> steps;
    for (const auto& s : res.snapshots) steps.push_back(s.step);
    CHECK(steps == std::vector<std::size_t>{0, 3, 6, 7});
    CHECK(res.snapshots.back().t == doctest::Approx(7 * res.dt));
    CHECK(res.dt == doctest::Approx(5.0 * res.dt_euler));
  }

  TEST_CASE("solver failures carry the step") {
    // sin(pi x) is an eigenvector (one iteration suffices), so use the stretched preset.
    auto rc = make("heat-1d-stretched", Integrator::be_pcg_pc1, 50.0, 3);
    rc.kmax = 1;
    try {
      run(rc);
      FAIL("expected a solver error");
    } catch (const SolverError& e) {
      CHECK(e.step() == 1);
    }
    auto pinned = make("heat-1d", Integrator::rkl2, 50.0, 2);
    pinned.stages = 3;
    CHECK_THROWS_AS(run(pinned), SolverError);
  }

  TEST_CASE("bad names and bad steps") {
    CHECK_THROWS_AS(problem_preset("heat-3d"), std::invalid_argument);
    CHECK_THROWS_AS(parse_integrator("rk4"), std::invalid_argument);
    auto rc = make("heat-1d", Integrator::rkl2, 0.0, 1);
    CHECK_THROWS_AS(run(rc), std::invalid_argument);
    for (const auto& name : integrator_names()) CHECK(to_string(parse_integrator(name)) == name);
  }

  TEST_CASE("run config from text") {
    const auto cfg = Config::parse_string(
        "[run]\npreset = conduction-2d\nintegrator = be-pcg-pc2\ndt_ratio = 20\nsteps = 5\n"
        "blocks = 8\nstages = 9\n");
    const auto rc = run_config_from(cfg);
    CHECK(rc.preset == "conduction-2d");
    CHECK(rc.integrator == Integrator::be_pcg_pc2);
    CHECK(rc.dt_ratio == 20.0);
    CHECK(rc.steps == 5);
    CHECK(rc.blocks == 8);
    CHECK(rc.stages == 9);
    CHECK_FALSE(rc.dt.has_value());
    CHECK_THROWS_AS(run_config_from(Config::parse_string("[run]\nsteps = -1\n")), std::invalid_argument);
    CHECK_THROWS_AS(run_config_from(Config::parse_string("[run]\nintegrator = magic\n")),
                    std::invalid_argument);
  }

  TEST_CASE("convergence orders") {
    const auto sts = convergence_study(Integrator::rkl2, 10.0, 4);
    const auto be = convergence_study(Integrator::be_pcg_pc1, 10.0, 4);
    REQUIRE(sts.size() == 4);
    CHECK_FALSE(sts[0].order.has_value());
    for (std::size_t i = 1; i < 4; ++i) {
      CHECK(*sts[i].order == doctest::Approx(2.0).epsilon(0.1));
      CHECK(*be[i].order == doctest::Approx(1.0).epsilon(0.2));
      CHECK(sts[i].dt == doctest::Approx(sts[i - 1].dt / 2));
    }
  }
}
