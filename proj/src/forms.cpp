#include "polaron/forms.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

namespace polaron {

namespace {

void check_interval(const Lattice& lat, int i, const char* who) {
  if (i < 0 || i >= lat.T())
    throw std::invalid_argument(std::string(who) + ": interval index out of range");
}

// Assemble a value-space form S ((n+1)x(n+1)) and push it to increments.
QuadraticForm from_value_space(const Lattice& lat, const Eigen::MatrixXd& S) {
  return conjugate_to_increments(lat, S);
}

}  // namespace

QuadraticForm intra_interval_form(const Lattice& lat, int i) {
  check_interval(lat, i, "intra_interval_form");
  const int m = lat.m();
  const int g = lat.gridPoints();
  const double e2 = lat.eta() * lat.eta();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(g, g);
  const int b = lat.gridBegin(i);
  // eta^2 sum_{j,l in G} (x_j - x_l)^2 = x^T S x with S = eta^2 (2m I - 2 J)
  // on the m half-open grid points.
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < m; ++l) S(b + j, b + l) -= 2.0 * e2;
    S(b + j, b + j) += 2.0 * m * e2;
  }
  return from_value_space(lat, S);
}

QuadraticForm adjacent_coupling_form(const Lattice& lat, int i) {
  if (i < 0 || i + 1 >= lat.T())
    throw std::invalid_argument(
        "adjacent_coupling_form: needs intervals i and i+1 inside [0, T]");
  const int m = lat.m();
  const int g = lat.gridPoints();
  const double e2 = lat.eta() * lat.eta();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(g, g);
  const int bi = lat.gridBegin(i);
  const int bj = lat.gridBegin(i + 1);
  // eta^2 sum_{t in G_i, s in G_{i+1}} (x_t - x_s)^2
  //   = eta^2 (m I on G_i + m I on G_{i+1} - cross ones blocks).
  for (int j = 0; j < m; ++j) {
    S(bi + j, bi + j) += m * e2;
    S(bj + j, bj + j) += m * e2;
    for (int l = 0; l < m; ++l) {
      S(bi + j, bj + l) -= e2;
      S(bj + l, bi + j) -= e2;
    }
  }
  return from_value_space(lat, S);
}

QuadraticForm window_form(const Lattice& lat, int a, int b) {
  if (a < 0 || b > lat.T() || a >= b)
    throw std::invalid_argument("window_form: bad window [a, b]");
  const int g = lat.gridPoints();
  const double e2 = lat.eta() * lat.eta();
  const int begin = lat.gridBegin(a);
  const int count = (b - a) * lat.m();  // half-open grid of [a, b)
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(g, g);
  for (int j = 0; j < count; ++j) {
    for (int l = 0; l < count; ++l) S(begin + j, begin + l) -= 2.0 * e2;
    S(begin + j, begin + j) += 2.0 * count * e2;
  }
  return from_value_space(lat, S);
}

LinearFunctional interval_average(const Lattice& lat, int i) {
  check_interval(lat, i, "interval_average");
  const int m = lat.m();
  const int g = lat.gridPoints();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(g);
  const int b = lat.gridBegin(i);
  // Trapezoid weights: eta * (1/2, 1, ..., 1, 1/2) over the m+1 grid values.
  w(b) = 0.5 * lat.eta();
  w(b + m) = 0.5 * lat.eta();
  for (int j = 1; j < m; ++j) w(b + j) = lat.eta();
  LinearFunctional a;
  a.coefficients = lat.pathMap().transpose() * w;
  return a;
}

LinearFunctional riemann_average(const Lattice& lat, int i) {
  check_interval(lat, i, "riemann_average");
  const int m = lat.m();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(lat.gridPoints());
  const int b = lat.gridBegin(i);
  for (int j = 0; j < m; ++j) w(b + j) = lat.eta();
  LinearFunctional a;
  a.coefficients = lat.pathMap().transpose() * w;
  return a;
}

LinearFunctional endpoint_functional(const Lattice& lat, int k) {
  if (k < 0 || k >= lat.gridPoints())
    throw std::invalid_argument("endpoint_functional: grid index out of range");
  LinearFunctional a;
  a.coefficients = Eigen::VectorXd::Zero(lat.n());
  for (int r = 0; r < k; ++r) a.coefficients(r) = 1.0;
  return a;
}

QuadraticForm mean_difference_form(const Lattice& lat, int i, int j) {
  LinearFunctional ai = riemann_average(lat, i);
  LinearFunctional aj = riemann_average(lat, j);
  Eigen::VectorXd diff = ai.coefficients - aj.coefficients;
  return make_form(diff * diff.transpose(), true);
}

QuadraticForm centered_form(const Lattice& lat, int i) {
  check_interval(lat, i, "centered_form");
  const int m = lat.m();
  const int g = lat.gridPoints();
  const double eta = lat.eta();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(g, g);
  const int b = lat.gridBegin(i);
  // eta * sum_{t in G_i} (x_t - mean)^2 = x^T S x with
  // S = eta (I - (1/m) J) on the half-open grid.
  for (int j = 0; j < m; ++j) {
    S(b + j, b + j) += eta;
    for (int l = 0; l < m; ++l) S(b + j, b + l) -= eta / m;
  }
  return from_value_space(lat, S);
}

GaussianPathMeasure confined_measure(const Lattice& lat, double beta,
                                     const std::vector<int>& intervals,
                                     const std::vector<int>& couplings) {
  if (!(beta >= 0))
    throw std::invalid_argument("confined_measure: beta must be >= 0");
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(lat.n(), lat.n());
  for (int i : intervals) total += intra_interval_form(lat, i).matrix;
  for (int i : couplings) total += adjacent_coupling_form(lat, i).matrix;
  QuadraticForm q = make_form(beta * total, true);
  char lab[128];
  std::snprintf(lab, sizeof(lab), "BM<beta=%g;Q:%zu;C:%zu>", beta,
                intervals.size(), couplings.size());
  return reweight_quadratic(brownian(lat), q, lab);
}

GaussianPathMeasure confined_measure_full(const Lattice& lat, double beta) {
  std::vector<int> intervals, couplings;
  for (int i = 0; i < lat.T(); ++i) intervals.push_back(i);
  for (int i = 0; i + 1 < lat.T(); ++i) couplings.push_back(i);
  return confined_measure(lat, beta, intervals, couplings);
}

GaussianPathMeasure tilde_measure(const Lattice& lat, double beta, int i) {
  return confined_measure(lat, beta, {i}, {});
}

}  // namespace polaron
