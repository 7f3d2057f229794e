#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polaron/convex_body.hpp"
#include "polaron/gaussian_measure.hpp"
#include "polaron/sigma_profile.hpp"

namespace polaron {

// Two-component split of an isotropic Gaussian measure around a convex body:
//   mu = (1 - deltaPrime) * good + deltaPrime * bad,
// where bad has density e^{-sigma(d(x))} / deltaPrime w.r.t. mu (d = distance
// to the body in the flattened sample space) and good carries the
// complement. The good component is supported where sigma(d) > 0, i.e.
// within distance 2 C1 R + 1 + width of the body.
struct GoodBadDecomposition {
  double delta = 0.0;        // estimated 1 - mu(K)
  double deltaStderr = 0.0;
  double deltaPrime = 0.0;   // exact mixture weight of the bad part, E[e^-sigma(d)]
  double deltaPrimeStderr = 0.0;
  double precisionScale = 1.0;  // c with precision = c * I
  ConvexBody body;
  SigmaProfile profile;

  // e^{-sigma(d(x))} in [0, 1]: the unnormalized bad weight.
  double badWeightRaw(const Eigen::VectorXd& x) const;
  // Densities w.r.t. mu (normalized by the estimated weights).
  double badDensity(const Eigen::VectorXd& x) const;
  double goodDensity(const Eigen::VectorXd& x) const;

  // x is good-supported iff d(x) < profile support end.
  bool inGoodSupport(const Eigen::VectorXd& x) const;
};

// Build the decomposition by Monte Carlo over nMC draws from mu. Throws
// std::invalid_argument for non-isotropic precision (whitening beyond a
// global scaling would change the distance geometry) and std::domain_error
// when the estimated exterior mass delta exceeds 0.1 (the split is only
// meaningful in the confined regime).
GoodBadDecomposition decompose(const GaussianPathMeasure& mu,
                               const ConvexBody& body,
                               const SigmaProfile& profile, int nMC,
                               std::uint64_t seed);

// Rejection samplers for the two components (flattened coordinates).
std::vector<Eigen::VectorXd> sample_good(const GoodBadDecomposition& dec,
                                         const GaussianPathMeasure& mu,
                                         int count, std::uint64_t seed);
std::vector<Eigen::VectorXd> sample_bad(const GoodBadDecomposition& dec,
                                        const GaussianPathMeasure& mu,
                                        int count, std::uint64_t seed);

// Midpoint convexity probe of g(x) = sigma(d(x)) + (3/8) c ||x||^2 along
// random segments with endpoints drawn from dilate2(mu): counts violations
// g(mid) > (g(x)+g(z))/2 + tol.
struct LogConcavityReport {
  int lines = 0;
  int violations = 0;
  double worstViolation = 0.0;  // largest positive excess
  bool pass() const { return violations == 0; }
};

LogConcavityReport logconcavity_check(const GoodBadDecomposition& dec,
                                      const GaussianPathMeasure& mu,
                                      int nLines, std::uint64_t seed,
                                      double tol = 1e-6);

}  // namespace polaron
