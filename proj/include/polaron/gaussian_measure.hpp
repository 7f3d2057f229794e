#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "polaron/lattice.hpp"

namespace polaron {

// A centered Gaussian measure on lattice paths, parameterized by its
// precision matrix in increment coordinates (n x n, per spatial coordinate;
// the d spatial coordinates are i.i.d.). The density is
//   dmu/dx  proportional to  exp(-1/2 sum_coords x_c^T P x_c).
class GaussianPathMeasure {
 public:
  GaussianPathMeasure(Lattice lattice, Eigen::MatrixXd precision,
                      std::string label);

  const Lattice& lattice() const { return lattice_; }
  const Eigen::MatrixXd& precision() const { return precision_; }
  const std::string& label() const { return label_; }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

  // Per-coordinate covariance of the linear functional a under the measure:
  // a^T P^{-1} a, via Cholesky solve (never a dense inverse).
  double functionalVariance(const LinearFunctional& a) const;

  // Per-coordinate covariance of increments, Cov(x_j, x_l). Computed on
  // demand; O(n^3) once.
  Eigen::MatrixXd covariance() const;

  // Whether the precision is c*I (within tolerance); used by consumers that
  // only support isotropic whitening.
  bool isIsotropic(double* scale = nullptr) const;

 private:
  Lattice lattice_;
  Eigen::MatrixXd precision_;
  std::string label_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Brownian increments measure: precision (1/eta) * I.
GaussianPathMeasure brownian(const Lattice& lat);

// Multiply the density by exp(-q(x)): precision -> P + 2 * q.matrix.
// Throws if the result is not positive definite.
GaussianPathMeasure reweight_quadratic(const GaussianPathMeasure& mu,
                                       const QuadraticForm& q,
                                       const std::string& label = "");

// Law of 2x when x ~ mu (covariance 4*Sigma, precision P/4): the spatial
// doubling used by the confinement recursion.
GaussianPathMeasure dilate2(const GaussianPathMeasure& mu);

// Draw `count` paths (each n x d increments). Deterministic in (mu, seed).
std::vector<Eigen::MatrixXd> sample(const GaussianPathMeasure& mu, int count,
                                    std::uint64_t seed);

// d * a^T P^{-1} a: second moment of the (d-dimensional) linear functional.
double second_moment(const GaussianPathMeasure& mu, const LinearFunctional& a);

}  // namespace polaron
