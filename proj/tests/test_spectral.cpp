#include "polaron/spectral.hpp"

#include <cmath>

#include "doctest.h"
#include "polaron/forms.hpp"

using namespace polaron;

TEST_CASE("eigenpair matches closed form and pinned example") {
  // beta = pi^2/2, k = 1 gives lambda = 1 exactly.
  CHECK(eigenpair(1, M_PI * M_PI / 2).lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eigenpair(3, 18.0).lambda ==
        doctest::Approx(36.0 / (9 * M_PI * M_PI)).epsilon(1e-14));
  CHECK_THROWS_AS(eigenpair(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(eigenpair(1, -1.0), std::invalid_argument);
}

TEST_CASE("eigenfunctions are L2 normalized and orthogonal (quadrature oracle)") {
  // Composite midpoint quadrature on [0,1].
  const int N = 20000;
  for (int k : {1, 2, 5}) {
    double norm = 0, ortho = 0;
    for (int i = 0; i < N; ++i) {
      double t = (i + 0.5) / N;
      double v = eigenfunction(k, t);
      norm += v * v / N;
      ortho += v * eigenfunction(k + 1, t) / N;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(ortho) < 1e-8);
  }
}

TEST_CASE("eigenpairs satisfy the integral kernel equation (quadrature oracle)") {
  // The white-noise kernel of the unit-window double integral is
  // 2(min(u,v) - uv) after reflection; check K v_k = (lambda_k / beta) v_k
  // with lambda_k = 2 beta / (pi^2 k^2) via quadrature.
  const int N = 4000;
  double beta = 3.7;
  for (int k : {1, 2, 4}) {
    double worst = 0;
    for (double t : {0.21, 0.5, 0.83}) {
      double acc = 0;
      for (int i = 0; i < N; ++i) {
        double u = (i + 0.5) / N;
        acc += 2.0 * (std::min(t, u) - t * u) * eigenfunction(k, u) / N;
      }
      double expect = (eigenpair(k, beta).lambda / beta) * eigenfunction(k, t);
      worst = std::max(worst, std::abs(acc - expect));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("deficit coefficient interpolates between 0 and 1") {
  CHECK(deficit_coeff(1, 0.0) == doctest::Approx(0.0));
  // lam2 = 4 beta / pi^2 k^2; beta = pi^2/4, k = 1 gives lam2 = 1, coeff 1/2.
  CHECK(deficit_coeff(1, M_PI * M_PI / 4) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(deficit_coeff(1, 1e12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(deficit_coeff(100, 1.0) < 1e-3);
}

TEST_CASE("variance series: free case and bounds") {
  for (double t : {0.0, 0.25, 0.7, 1.0})
    CHECK(variance_series(0.0, t) == doctest::Approx(t));
  for (double beta : {0.5, 5.0, 500.0}) {
    for (double t : {0.125, 0.5, 0.875}) {
      double v = variance_series(beta, t);
      CHECK(v > 0.0);
      CHECK(v < t);  // confinement only shrinks variance
    }
  }
  // Monotone decreasing in beta at fixed t.
  CHECK(variance_series(10.0, 0.5) < variance_series(1.0, 0.5));
  CHECK_THROWS_AS(variance_series(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("variance series is stable under tolerance refinement") {
  for (double beta : {2.0, 100.0}) {
    double coarse = variance_series(beta, 0.375, 1e-6);
    double fine = variance_series(beta, 0.375, 1e-13);
    CHECK(std::abs(coarse - fine) < 2e-6);
  }
  CHECK(truncation_order(100.0, 1e-10) > truncation_order(100.0, 1e-4));
  CHECK(truncation_order(1000.0, 1e-8) > truncation_order(1.0, 1e-8));
}

TEST_CASE("series vs independent matrix oracle at eta = 1/64") {
  // The two routes share no code: the oracle assembles the lattice form and
  // inverts the precision. Discretization error at this mesh is ~7.5e-3.
  Lattice lat(1, 1.0 / 64, 1);
  double worst = 0;
  for (double beta : {2.0, 10.0, 100.0}) {
    for (int j = 1; j < 8; ++j) {
      double t = j / 8.0;
      double a = variance_series(beta, t, 1e-10);
      double b = variance_matrix_oracle(lat, beta, j * 8);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  CHECK(worst < 1e-2);
  CHECK(worst > 1e-4);  // the routes really are independent discretizations
}

TEST_CASE("covariance series agrees with variance on the diagonal") {
  for (double beta : {1.0, 50.0})
    for (double t : {0.25, 0.625})
      CHECK(covariance_shepp(beta, t, t) ==
            doctest::Approx(variance_series(beta, t)).epsilon(1e-10));
  CHECK(covariance_shepp(7.0, 0.3, 0.8) ==
        doctest::Approx(covariance_shepp(7.0, 0.8, 0.3)).epsilon(1e-12));
}

TEST_CASE("covariance series vs matrix cross-covariance oracle") {
  Lattice lat(1, 1.0 / 64, 1);
  GaussianPathMeasure mu = tilde_measure(lat, 20.0, 0);
  Eigen::MatrixXd cov = mu.covariance();
  auto pathVar = [&](int j, int l) {
    Eigen::VectorXd a = endpoint_functional(lat, j).coefficients;
    Eigen::VectorXd b = endpoint_functional(lat, l).coefficients;
    return a.dot(cov * b);
  };
  double worst = 0;
  for (int j : {16, 32, 48})
    for (int l : {16, 40}) {
      double series = covariance_shepp(20.0, j / 64.0, l / 64.0);
      worst = std::max(worst, std::abs(series - pathVar(j, l)));
    }
  CHECK(worst < 1e-2);
}

TEST_CASE("fourier identity partial sums converge to t/2") {
  for (double t : {0.125, 0.5, 0.875}) {
    CHECK(fourier_identity_check(t, 1000000) < 1e-5);
    // Convergence: longer sums do better.
    CHECK(fourier_identity_check(t, 1000000) <
          fourier_identity_check(t, 1000) + 1e-12);
  }
}

TEST_CASE("confinement matches brownian when beta = 0") {
  Lattice lat(1, 1.0 / 16, 1);
  GaussianPathMeasure mu = tilde_measure(lat, 0.0, 0);
  CHECK((mu.precision() - brownian(lat).precision()).norm() < 1e-12);
}
