#include <doctest.h>

#include <stdexcept>

#include "helpers.hpp"
#include "stiffstep/krylov.hpp"
#include "stiffstep/operators.hpp"
#include "stiffstep/precond.hpp"
#include "stiffstep/stability.hpp"

using namespace stiffstep;

namespace {

// Dense Gaussian elimination, the oracle for small systems.
std::vector<double> dense_solve(const SparseMatrix& a, std::vector<double> b) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

SparseMatrix random_spd(std::mt19937_64& rng, std::size_t n) {
  std::vector<Triplet> t;
  std::vector<double> diag(n, 0.5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (u(rng) < 0.2) continue;
      const double v = u(rng);
      t.push_back({i, j, v});
      t.push_back({j, i, v});
      diag[i] += std::abs(v);
      diag[j] += std::abs(v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, diag[i]});
  return SparseMatrix::from_triplets(n, t, SparseMatrix::Layout::csr);
}

double energy_error(const SparseMatrix& a, std::span<const double> x, const std::vector<double>& exact) {
  std::vector<double> e(x.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = x[i] - exact[i];
  return dot(e, a.multiply(e));
}

}  // namespace

TEST_SUITE("krylov") {
  TEST_CASE("identity system converges in one iteration") {
    const auto a = SparseMatrix::identity(4);
    const std::vector<double> b = {1, -2, 3, 0.5};
    const auto res = pcg_solve(a, b, std::vector<double>(4, 0.0), build_pc1(a), 1e-9, 0);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    CHECK(res.x == b);
  }

  TEST_CASE("exact preconditioner converges in one iteration") {
    const auto a = testing::tridiag(3, -1, 2, -1);
    const auto res = pcg_solve(a, std::vector<double>{1, 0, 0}, std::vector<double>(3, 0.0),
                               build_pc2(a, uniform_blocks(3, 1)), 1e-9, 0);
    CHECK(res.report.iterations == 1);
    CHECK(res.x[0] == doctest::Approx(0.75));
    CHECK(res.x[1] == doctest::Approx(0.5));
    CHECK(res.x[2] == doctest::Approx(0.25));
  }

  TEST_CASE("PC2 with four blocks beats PC1 on a stiff BE system") {
    const auto grid = make_uniform_grid(50, 1.0);
    const auto prob = assemble_diffusion_1d(grid, std::vector<double>(50, 1.0), BoundaryType::dirichlet_zero);
    const auto a = be_system(prob, 50.0 * gershgorin_bound(prob.M).dt_euler);
    std::mt19937_64 rng(1);
    const auto b = testing::uniform(rng, 50, 0.0, 1.0);
    const std::vector<double> x0(50, 0.0);
    const auto r1 = pcg_solve(a, b, x0, build_pc1(a), 1e-9, 0);
    const auto r2 = pcg_solve(a, b, x0, build_pc2(a, uniform_blocks(50, 4)), 1e-9, 0);
    CHECK(r1.report.converged);
    CHECK(r2.report.converged);
    CHECK(r2.report.iterations < r1.report.iterations);
  }

  TEST_CASE("residual check") {
    const auto a = testing::tridiag(3, -1, 2, -1);
    const std::vector<double> b = {3, -1, 2};
    const auto x = dense_solve(a, b);
    CHECK(residual_norm(a, x, b) <= 1e-12 * norm2(b));
    CHECK(residual_norm(a, std::vector<double>(3, 0.0), b) == doctest::Approx(norm2(b)));
    std::vector<double> half = b;
    for (auto& v : half) v /= 2;
    CHECK(residual_norm(SparseMatrix::identity(3), half, b) == doctest::Approx(norm2(b) / 2));
  }

  TEST_CASE("tallies and history follow the iteration count") {
    std::mt19937_64 rng(2);
    const auto a = random_spd(rng, 30);
    const auto b = testing::uniform(rng, 30, -1, 1);
    const auto res = pcg_solve(a, b, std::vector<double>(30, 0.0), build_pc1(a), 1e-10, 0);
    const auto& rep = res.report;
    CHECK(rep.converged);
    CHECK(rep.residual_history.size() == rep.iterations + 1);
    CHECK(rep.global_events == 3 * rep.iterations);
    CHECK(rep.local_events == rep.iterations + 1);
    CHECK(rep.residual_history.back() <= 1e-20 * rep.residual_history.front());
  }

  TEST_CASE("starting from the solution needs no iterations") {
    const auto a = testing::tridiag(5, -1, 3, -1);
    const std::vector<double> x = {1, 2, 3, 4, 5};
    const auto b = a.multiply(x);
    const auto res = pcg_solve(a, b, x, build_pc1(a), 1e-9, 0);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 0);
    CHECK(res.report.local_events == 1);
    CHECK(res.report.global_events == 0);
  }

  TEST_CASE("finite termination without preconditioning") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto a = random_spd(rng, n);
      const auto b = testing::uniform(rng, n, -1, 1);
      PcgOptions opt;
      opt.tol = 1e-300;
      opt.kmax = n;
      const auto res = pcg_solve(a, b, std::vector<double>(n, 0.0), build_pc1(SparseMatrix::identity(n)), opt);
      const auto exact = dense_solve(a, b);
      for (std::size_t i = 0; i < n; ++i) CHECK(res.x[i] == doctest::Approx(exact[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("kmax exhaustion is flagged, not thrown") {
    std::mt19937_64 rng(8);
    const auto a = random_spd(rng, 40);
    const auto b = testing::uniform(rng, 40, -1, 1);
    const auto res = pcg_solve(a, b, std::vector<double>(40, 0.0), build_pc1(a), 1e-14, 2);
    CHECK_FALSE(res.report.converged);
    CHECK(res.report.iterations == 2);
    CHECK(res.x.size() == 40);
  }

  TEST_CASE("indefinite matrix raises not-SPD") {
    const auto a = testing::diagonal({1, -1});
    CHECK_THROWS_AS(pcg_solve(a, std::vector<double>{1, 1}, std::vector<double>(2, 0.0),
                              build_pc1(SparseMatrix::identity(2)), 1e-9, 0),
                    NotSpdError);
  }

  TEST_CASE("energy norm of the error never increases") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_spd(rng, 20);
      const auto b = testing::uniform(rng, 20, -1, 1);
      const auto exact = dense_solve(a, b);
      std::vector<double> energies;
      PcgOptions opt;
      opt.tol = 1e-12;
      opt.observer = [&](const PcgIterate& it) { energies.push_back(energy_error(a, it.x, exact)); };
      for (std::size_t blocks : {1u, 4u, 20u}) {
        energies.clear();
        pcg_solve(a, b, std::vector<double>(20, 0.0), build_pc2(a, uniform_blocks(20, blocks)), opt);
        for (std::size_t k = 1; k < energies.size(); ++k) {
          CHECK(energies[k] <= energies[k - 1] * (1 + 1e-12) + 1e-28);
        }
      }
    }
  }

  TEST_CASE("successive residuals are orthogonal in the preconditioned inner product") {
    std::mt19937_64 rng(10);
    const auto a = random_spd(rng, 12);
    const auto b = testing::uniform(rng, 12, -1, 1);
    std::vector<std::vector<double>> rs, zs;
    PcgOptions opt;
    opt.tol = 1e-8;
    opt.observer = [&](const PcgIterate& it) {
      rs.emplace_back(it.r.begin(), it.r.end());
      zs.emplace_back(it.z.begin(), it.z.end());
    };
    pcg_solve(a, b, std::vector<double>(12, 0.0), build_pc2(a, uniform_blocks(12, 3)), opt);
    REQUIRE(rs.size() >= 3);
    for (std::size_t k = 1; k < rs.size(); ++k) {
      const double scale = std::sqrt(std::abs(dot(rs[k], zs[k]) * dot(rs[k - 1], zs[k - 1])));
      CHECK(std::abs(dot(rs[k], zs[k - 1])) <= 1e-10 * scale);
    }
  }

  TEST_CASE("DIA and CSR inputs produce identical iterates") {
    const auto grid = make_geometric_grid(40, 0.01, 1.03);
    std::mt19937_64 rng(4);
    const auto alpha = testing::uniform(rng, 40, 1, 10);
    const auto pd = assemble_diffusion_1d(grid, alpha, BoundaryType::dirichlet_zero, SparseMatrix::Layout::dia);
    const auto pc = assemble_diffusion_1d(grid, alpha, BoundaryType::dirichlet_zero, SparseMatrix::Layout::csr);
    const auto ad = be_system(pd, 1e-3);
    const auto ac = be_system(pc, 1e-3);
    const auto b = testing::uniform(rng, 40, -1, 1);
    const std::vector<double> x0(40, 0.0);
    const auto rd = pcg_solve(ad, b, x0, build_pc2(ad, uniform_blocks(40, 4)), 1e-10, 0);
    const auto rc = pcg_solve(ac, b, x0, build_pc2(ac, uniform_blocks(40, 4)), 1e-10, 0);
    CHECK(rd.x == rc.x);
    CHECK(rd.report.residual_history == rc.report.residual_history);
  }

  TEST_CASE("size mismatch and bad tolerance") {
    const auto a = SparseMatrix::identity(3);
    CHECK_THROWS_AS(pcg_solve(a, std::vector<double>(2), std::vector<double>(3), build_pc1(a), 1e-9, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(pcg_solve(a, std::vector<double>(3), std::vector<double>(3), build_pc1(a), 0.0, 0),
                    std::invalid_argument);
  }
}
