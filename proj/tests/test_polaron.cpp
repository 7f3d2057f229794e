#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "polaron/polaron_mcmc.hpp"
#include "polaron/rng.hpp"

using namespace polaron;

TEST_CASE("cutoff potential closed forms, p = 1") {
  const double A = 4.0;
  CHECK(potential_VA(0.0, A) == doctest::Approx(2 * A));
  CHECK(potential_VA(0.125, A) == doctest::Approx(6.0));   // 2A - A^2 r
  CHECK(potential_VA(0.25, A) == doctest::Approx(4.0));    // junction r = 1/A
  CHECK(potential_VA(2.0, A) == doctest::Approx(0.5));
  // C^1 junction: symmetric finite difference matches the tangent slope -A^2.
  const double h = 1e-7;
  const double slope =
      (potential_VA(0.25 + h, A) - potential_VA(0.25 - h, A)) / (2 * h);
  CHECK(slope == doctest::Approx(-A * A).epsilon(1e-4));
}

TEST_CASE("cutoff potential, general exponent") {
  CHECK(potential_VA(0.0, 9.0, 2.0) == doctest::Approx(9.0));
  CHECK(potential_VA(0.1, 9.0, 2.0) == doctest::Approx(9.0));  // clipped
  CHECK(potential_VA(1.0 / 3.0, 9.0, 2.0) == doctest::Approx(9.0));
  CHECK(potential_VA(1.0, 9.0, 2.0) == doctest::Approx(1.0));
  CHECK(potential_VA(2.0, 9.0, 0.5) == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK_THROWS_AS(potential_VA(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(potential_VA(-0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(potential_VA(1.0, 2.0, -1.0), std::invalid_argument);
}

namespace {

double brute_energy(const Eigen::MatrixXd& inc, const PolaronConfig& cfg) {
  const Lattice lat(cfg.T, cfg.eta, std::max<int>(1, inc.cols()));
  Eigen::MatrixXd pos(inc.rows() + 1, inc.cols());
  pos.row(0).setZero();
  for (int j = 0; j < inc.rows(); ++j) pos.row(j + 1) = pos.row(j) + inc.row(j);
  double sum = 0;
  const int n = static_cast<int>(lat.n());
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const double r = (pos.row(j) - pos.row(l)).norm();
      sum += cfg.kernelAt(lat.time(j), lat.time(l)) *
             potential_VA(r, cfg.A, cfg.p);
    }
  return lat.eta() * lat.eta() * sum;
}

}  // namespace

TEST_CASE("interaction energy matches the brute-force double sum") {
  PolaronConfig cfg;
  cfg.T = 2;
  cfg.eta = 0.25;
  cfg.A = 10.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 0.5);
  Eigen::MatrixXd inc(8, 3);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 3; ++c) inc(r, c) = g(rng);
  CHECK(interaction_energy(inc, cfg) ==
        doctest::Approx(brute_energy(inc, cfg)).epsilon(1e-12));

  SUBCASE("one-dimensional paths work too") {
    Eigen::MatrixXd one = inc.col(0);
    CHECK(interaction_energy(one, cfg) ==
          doctest::Approx(brute_energy(one, cfg)).epsilon(1e-12));
  }

  SUBCASE("custom kernel is honoured") {
    cfg.kernel = [](double, double) { return 1.0; };
    CHECK(interaction_energy(inc, cfg) ==
          doctest::Approx(brute_energy(inc, cfg)).epsilon(1e-12));
  }

  SUBCASE("general exponent") {
    cfg.p = 1.5;
    CHECK(interaction_energy(inc, cfg) ==
          doctest::Approx(brute_energy(inc, cfg)).epsilon(1e-12));
  }

  SUBCASE("wrong increment count rejected") {
    Eigen::MatrixXd bad(5, 3);
    bad.setZero();
    CHECK_THROWS_AS(interaction_energy(bad, cfg), std::invalid_argument);
  }
}

TEST_CASE("interaction energy of a frozen path is the kernel mass") {
  // All increments zero: every pair distance vanishes, V_A(0) factors out.
  PolaronConfig cfg;
  cfg.T = 2;
  cfg.eta = 0.25;
  cfg.A = 3.0;
  cfg.kernel = [](double, double) { return 1.0; };
  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(8, 3);
  const double expected = 0.25 * 0.25 * 64.0 * potential_VA(0.0, 3.0);
  CHECK(interaction_energy(inc, cfg) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("interaction energy grows with the cutoff") {
  PolaronConfig lo, hi;
  lo.T = hi.T = 2;
  lo.eta = hi.eta = 0.25;
  lo.A = 10.0;
  hi.A = 100.0;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.5);
  Eigen::MatrixXd inc(8, 3);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 3; ++c) inc(r, c) = g(rng);
  CHECK(interaction_energy(inc, hi) >= interaction_energy(inc, lo));
}

TEST_CASE("free-case sampler reproduces Brownian endpoint moments") {
  PolaronConfig cfg;
  cfg.alpha = 0.0;
  cfg.T = 4;
  cfg.eta = 1.0 / 16;
  McmcOptions opt;
  opt.chains = 4;
  const long steps = 6000;
  McmcRun run = mcmc_run(cfg, steps, 1234, opt);
  const McmcEstimate& est = run.estimate;
  // sigma^2 = E||B_T||^2 / (3T) = 1 for Brownian motion, any T and eta.
  CHECK(std::abs(est.sigma2 - 1.0) < 3.0 * est.sigma2Stderr + 1e-12);
  CHECK(est.ess > 500.0);
  CHECK_FALSE(est.lowEss);
  CHECK(est.acceptRate > 0.99);  // everything accepts when alpha = 0
  CHECK(est.chains.size() == 4);
  CHECK(est.steps == steps);
  // rho adapts upward to the identity cap in the free case.
  for (const auto& c : est.chains) CHECK(c.rhoFinal == doctest::Approx(1.0));
}

TEST_CASE("sampler is deterministic in the seed") {
  PolaronConfig cfg;
  cfg.alpha = 0.5;
  cfg.T = 2;
  cfg.eta = 0.25;
  cfg.A = 5.0;
  McmcOptions opt;
  opt.chains = 2;
  McmcRun a = mcmc_run(cfg, 800, 99, opt);
  McmcRun b = mcmc_run(cfg, 800, 99, opt);
  CHECK(a.estimate.mean == b.estimate.mean);
  CHECK(a.series == b.series);
  McmcRun c = mcmc_run(cfg, 800, 100, opt);
  CHECK(a.estimate.mean != c.estimate.mean);
}

TEST_CASE("bridge-only dynamics freeze the endpoint") {
  PolaronConfig cfg;
  cfg.alpha = 0.0;
  cfg.T = 2;
  cfg.eta = 0.25;
  McmcOptions opt;
  opt.chains = 1;
  opt.proposal.bridgeFraction = 1.0;
  opt.adaptRho = false;
  McmcRun run = mcmc_run(cfg, 500, 5, opt);
  REQUIRE(!run.series.empty());
  for (double v : run.series) CHECK(v == run.series.front());
}

TEST_CASE("interacting run shrinks the diffusion constant") {
  PolaronConfig cfg;
  cfg.alpha = 2.0;
  cfg.T = 2;
  cfg.eta = 1.0 / 8;
  cfg.A = 20.0;
  McmcOptions opt;
  opt.chains = 2;
  McmcRun run = mcmc_run(cfg, 6000, 17, opt);
  const McmcEstimate& est = run.estimate;
  CHECK(est.sigma2 > 0.0);
  CHECK(est.sigma2 < 1.0);  // attraction contracts the path
  CHECK(est.acceptRate > 0.05);
  CHECK(est.acceptRate < 1.0);
  CHECK(std::isfinite(est.stderrv));
}

TEST_CASE("snapshot collection and thinning") {
  PolaronConfig cfg;
  cfg.alpha = 0.0;
  cfg.T = 2;
  cfg.eta = 0.25;
  McmcOptions opt;
  opt.chains = 2;
  opt.keepEvery = 50;
  McmcRun run = mcmc_run(cfg, 1000, 3, opt);
  // 1000 steps, 200 burned: 800 kept, thinned every 50 -> 16 per chain.
  CHECK(run.snapshots.size() == 32);
  for (const auto& s : run.snapshots) {
    CHECK(s.rows() == 8);
    CHECK(s.cols() == 3);
  }
}

TEST_CASE("sampler input validation") {
  PolaronConfig cfg;
  cfg.T = 2;
  cfg.eta = 0.25;
  McmcOptions opt;
  opt.chains = 0;
  CHECK_THROWS_AS(mcmc_run(cfg, 1000, 1, opt), std::invalid_argument);
  opt.chains = 1;
  CHECK_THROWS_AS(mcmc_run(cfg, 60, 1, opt), std::invalid_argument);
  cfg.alpha = -1.0;
  CHECK_THROWS_AS(mcmc_run(cfg, 1000, 1, opt), std::invalid_argument);
}

TEST_CASE("oscillation statistics on a hand-built path") {
  const Lattice lat(2, 0.5, 1);
  Eigen::MatrixXd inc(4, 1);
  inc << 0.5, 0.5, 0.2, 0.2;
  // Window 0 visits {0, 0.5, 1.0} (oscillation 1.0); window 1 visits
  // {1.0, 1.2, 1.4} (oscillation 0.4).
  OscillationTable t =
      oscillation_stats({inc, inc}, lat, {0.3, 0.5, 1.0});
  CHECK(t.windowsPerPath == 2);
  CHECK(t.paths == 2);
  CHECK(t.fraction[0] == doctest::Approx(0.0));
  CHECK(t.fraction[1] == doctest::Approx(0.5));
  CHECK(t.fraction[2] == doctest::Approx(1.0));
  for (double s : t.stderrs) CHECK(s == doctest::Approx(0.0));

  CHECK_THROWS_AS(oscillation_stats({}, lat, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(oscillation_stats({inc}, lat, {}), std::invalid_argument);
  Eigen::MatrixXd bad(3, 1);
  bad.setZero();
  CHECK_THROWS_AS(oscillation_stats({bad}, lat, {1.0}), std::invalid_argument);
}

TEST_CASE("oscillation fractions from free samples are ordered in R") {
  PolaronConfig cfg;
  cfg.alpha = 0.0;
  cfg.T = 4;
  cfg.eta = 1.0 / 8;
  McmcOptions opt;
  opt.chains = 1;
  opt.keepEvery = 20;
  McmcRun run = mcmc_run(cfg, 2000, 21, opt);
  REQUIRE(run.snapshots.size() > 10);
  OscillationTable t =
      oscillation_stats(run.snapshots, cfg.lattice(), {0.5, 1.0, 2.0, 4.0});
  for (std::size_t i = 1; i < t.fraction.size(); ++i)
    CHECK(t.fraction[i] >= t.fraction[i - 1]);
  CHECK(t.fraction.back() > 0.9);  // oscillation beyond 4 is rare over a unit window
}
