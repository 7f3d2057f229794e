#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "polaron/convex_body.hpp"
#include "polaron/gaussian_measure.hpp"

namespace polaron {

// Monte Carlo probability of a convex body under a Gaussian path measure:
// (estimate, stderr). Ball/Slab act on flattened increments, OscillationSet
// on the window of grid values starting at 0.
std::pair<double, double> convex_prob(const GaussianPathMeasure& mu,
                                      const ConvexBody& body, int count,
                                      std::uint64_t seed);

enum class GciVerdict { pass, tie, fail };

// Replicated comparison of a claimed inequality lhs >= rhs. The margin is
// averaged over independent randomized replicates; the verdict is
//   fail iff margin < -3 * marginStderr,
//   pass iff margin > +3 * marginStderr,
//   tie  otherwise (equality cases land here by design).
struct GciReport {
  std::string caseId;
  double lhs = 0, rhs = 0;
  double stderrLhs = 0, stderrRhs = 0;
  double margin = 0, marginStderr = 0;
  long samples = 0;
  int replicates = 0;
  GciVerdict verdict = GciVerdict::tie;
};

std::string to_string(GciVerdict v);

// Correlation inequality for two symmetric convex bodies:
//   P(x in K1 and K2) >= P(K1) * P(K2).
// Sampling uses scrambled Sobol when the flattened dimension is at most 6,
// plain Monte Carlo otherwise; `nSamples` is split across `replicates`
// independent randomizations and the margin stderr comes from the replicate
// scatter (paired, so shared noise cancels).
GciReport gci_pair_test(const GaussianPathMeasure& mu, const ConvexBody& k1,
                        const ConvexBody& k2, long nSamples,
                        std::uint64_t seed, int replicates = 32,
                        const std::string& caseId = "");

// Even, quasi-concave test functional exp(-|<direction, x>| / scale).
struct DecreasingFunctional {
  Eigen::VectorXd direction;
  double scale = 1.0;

  double operator()(const Eigen::VectorXd& x) const;
};

// Functional form of the inequality: E[prod f_i] >= prod E[f_i].
GciReport gci_functional_test(const GaussianPathMeasure& mu,
                              const std::vector<DecreasingFunctional>& fs,
                              long nSamples, std::uint64_t seed,
                              int replicates = 32,
                              const std::string& caseId = "");

// Stochastic-dominance consequence checks for "confined is smaller than
// reference": exact covariance ordering (reference minus confined PSD, trace
// comparison) plus per-body probability margins confined(K) - reference(K),
// which must not be significantly negative.
struct DominationReport {
  bool covarianceOrdered = false;
  double traceConfined = 0, traceReference = 0;
  std::vector<GciReport> bodyReports;
  bool pass() const;
};

DominationReport domination_test(const GaussianPathMeasure& confined,
                                 const GaussianPathMeasure& reference,
                                 const std::vector<ConvexBody>& bodies,
                                 long nSamples, std::uint64_t seed);

// Sampler-adapter variant for non-Gaussian left measures (e.g. mixture
// components): only the Monte Carlo route runs, with the reference sampled
// from its own measure.
DominationReport domination_test(
    const std::function<Eigen::VectorXd(std::mt19937_64&)>& confinedSampler,
    const GaussianPathMeasure& reference,
    const std::vector<ConvexBody>& bodies, long nSamples, std::uint64_t seed);

}  // namespace polaron
