#include "polaron/gaussian_measure.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "polaron/rng.hpp"

namespace polaron {

GaussianPathMeasure::GaussianPathMeasure(Lattice lattice,
                                         Eigen::MatrixXd precision,
                                         std::string label)
    : lattice_(std::move(lattice)),
      precision_(std::move(precision)),
      label_(std::move(label)) {
  if (precision_.rows() != lattice_.n() || precision_.cols() != lattice_.n())
    throw std::invalid_argument(
        "GaussianPathMeasure: precision must be n x n in increment "
        "coordinates");
  double asym = (precision_ - precision_.transpose()).norm();
  if (asym > 1e-10 * (1.0 + precision_.norm()))
    throw std::invalid_argument("GaussianPathMeasure: precision not symmetric");
  precision_ = 0.5 * (precision_ + precision_.transpose());
  llt_.compute(precision_);
  if (llt_.info() != Eigen::Success)
    throw std::invalid_argument(
        "GaussianPathMeasure: precision not positive definite");
}

double GaussianPathMeasure::functionalVariance(const LinearFunctional& a) const {
  if (a.coefficients.size() != lattice_.n())
    throw std::invalid_argument("functionalVariance: dimension mismatch");
  return a.coefficients.dot(llt_.solve(a.coefficients));
}

Eigen::MatrixXd GaussianPathMeasure::covariance() const {
  return llt_.solve(Eigen::MatrixXd::Identity(lattice_.n(), lattice_.n()));
}

bool GaussianPathMeasure::isIsotropic(double* scale) const {
  double c = precision_(0, 0);
  Eigen::MatrixXd diff =
      precision_ - c * Eigen::MatrixXd::Identity(precision_.rows(),
                                                 precision_.cols());
  bool iso = diff.norm() <= 1e-10 * (1.0 + precision_.norm());
  if (iso && scale) *scale = c;
  return iso;
}

GaussianPathMeasure brownian(const Lattice& lat) {
  Eigen::MatrixXd P =
      (1.0 / lat.eta()) * Eigen::MatrixXd::Identity(lat.n(), lat.n());
  return GaussianPathMeasure(lat, std::move(P), "BM");
}

GaussianPathMeasure reweight_quadratic(const GaussianPathMeasure& mu,
                                       const QuadraticForm& q,
                                       const std::string& label) {
  if (q.matrix.rows() != mu.lattice().n())
    throw std::invalid_argument("reweight_quadratic: form size mismatch");
  Eigen::MatrixXd P = mu.precision() + 2.0 * q.matrix;
  std::string lab = label.empty() ? mu.label() + "<reweighted>" : label;
  return GaussianPathMeasure(mu.lattice(), std::move(P), lab);
}

GaussianPathMeasure dilate2(const GaussianPathMeasure& mu) {
  return GaussianPathMeasure(mu.lattice(), 0.25 * mu.precision(),
                             mu.label() + "<dilate2>");
}

std::vector<Eigen::MatrixXd> sample(const GaussianPathMeasure& mu, int count,
                                    std::uint64_t seed) {
  const int n = mu.lattice().n();
  const int d = mu.lattice().d();
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // x = L^{-T} z has covariance P^{-1} when P = L L^T.
  const auto& L = mu.llt().matrixU();  // U = L^T
  std::vector<Eigen::MatrixXd> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Eigen::MatrixXd z(n, d);
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < d; ++c) z(j, c) = gauss(rng);
    out.push_back(L.solve(z));
  }
  return out;
}

double second_moment(const GaussianPathMeasure& mu, const LinearFunctional& a) {
  return mu.lattice().d() * mu.functionalVariance(a);
}

}  // namespace polaron
