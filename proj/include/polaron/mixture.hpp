#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace polaron {

using Functional = std::function<double(const Eigen::VectorXd&)>;

// One component of a finite mixture over a shared base measure. `density`
// evaluates the normalized density d(nu_j)/d(base) pointwise, so a mixture
// with weights summing to 1 satisfies sum_j w_j density_j == d(mix)/d(base).
struct MixtureComponent {
  double weight;
  std::string id;
  Functional density;
};

struct MixtureDecomposition {
  std::vector<MixtureComponent> components;

  double totalWeight() const;
  // Weights nonnegative and summing to 1 within tol.
  void validate(double tol = 1e-9) const;
};

// Computes E^{nu_j}[f] for a (normalized) component measure.
using ComponentEstimator =
    std::function<double(const MixtureComponent&, const Functional&)>;

// Reweight the mixture by a nonnegative functional f:
//   new weight   q_j = p_j E_j / sum_k p_k E_k,     E_j = E^{nu_j}[f],
//   new density  rho_j f / E_j.
// Throws if every component expectation vanishes or any is negative.
MixtureDecomposition mixture_reweight(const MixtureDecomposition& d,
                                      const Functional& f,
                                      const ComponentEstimator& estimator);

// Merge components according to a partition of the index set (each index
// exactly once). Merged weight is the group sum; merged density is the
// weight-averaged density, keeping the mixture identity exact.
MixtureDecomposition coarsen(const MixtureDecomposition& d,
                             const std::vector<std::vector<int>>& partition);

// Product mixture over independent factors: every choice of one component
// per factor becomes a product component acting on the concatenated vector
// (factor i reads the slice of length dims[i]). Components are generated in
// odometer order, last factor fastest.
MixtureDecomposition product_mixture(
    const std::vector<MixtureDecomposition>& factors,
    const std::vector<int>& dims);

// Gauss-Hermite tensor estimator over a centered Gaussian base with
// independent coordinates of standard deviations `sds` (length = total
// dimension). Cost is nodes^dim evaluations; intended for small products.
// `refScale` > 1 widens the quadrature reference Gaussian by that factor and
// corrects with the exact likelihood ratio; use it when component densities
// grow against the base (e.g. wider-variance components), where quadrature
// at the base scale diverges.
ComponentEstimator gauss_hermite_estimator(const std::vector<double>& sds,
                                           int nodesPerDim,
                                           double refScale = 1.0);

// Shared-pass expectations for a full product mixture: one sweep over the
// tensor grid accumulates E^{nu_gamma}[f] for every product component gamma
// (odometer order, matching product_mixture) plus the base expectation
// E^{base}[f]. All expectations reuse identical node evaluations of f.
struct ProductExpectations {
  std::vector<double> component;  // E^{nu_gamma}[f]
  double base;                    // E^{base}[f]
};

ProductExpectations product_expectations(
    const std::vector<MixtureDecomposition>& factors,
    const std::vector<int>& dims, const std::vector<double>& sds,
    int nodesPerDim, const Functional& f);

}  // namespace polaron
