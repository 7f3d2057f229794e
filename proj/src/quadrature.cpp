#include "polaron/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace polaron {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the
// three-term recurrence, weights are mu0 * (first eigenvector component)^2.
QuadRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const int n = offdiag.size() + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    J(k, k + 1) = offdiag(k);
    J(k + 1, k) = offdiag(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule r;
  r.nodes = es.eigenvalues();
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double v0 = es.eigenvectors()(0, i);
    r.weights(i) = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: need b > a");
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) {
    double beta = k * k / (4.0 * k * k - 1.0);
    off(k - 1) = std::sqrt(beta);
  }
  QuadRule r = golub_welsch(off, 2.0);  // mu0 = int_{-1}^{1} 1 dx
  // Affine map to [a, b].
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes(i) = mid + half * r.nodes(i);
    r.weights(i) *= half;
  }
  return r;
}

QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  return golub_welsch(off, 1.0);  // weight integrates to 1 (normal density)
}

}  // namespace polaron
