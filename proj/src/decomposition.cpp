#include "polaron/decomposition.hpp"

#include <cmath>
#include <stdexcept>

#include "polaron/rng.hpp"
#include "polaron/stats.hpp"

namespace polaron {

double GoodBadDecomposition::badWeightRaw(const Eigen::VectorXd& x) const {
  return std::exp(-profile.sigma(body.distance(x)));
}

double GoodBadDecomposition::badDensity(const Eigen::VectorXd& x) const {
  return badWeightRaw(x) / deltaPrime;
}

double GoodBadDecomposition::goodDensity(const Eigen::VectorXd& x) const {
  return (1.0 - badWeightRaw(x)) / (1.0 - deltaPrime);
}

bool GoodBadDecomposition::inGoodSupport(const Eigen::VectorXd& x) const {
  return body.distance(x) < profile.supportEnd();
}

GoodBadDecomposition decompose(const GaussianPathMeasure& mu,
                               const ConvexBody& body,
                               const SigmaProfile& profile, int nMC,
                               std::uint64_t seed) {
  double scale = 0;
  if (!mu.isIsotropic(&scale))
    throw std::invalid_argument(
        "decompose: requires isotropic precision c*I (whitening is a global "
        "scaling); conjugate the measure first");
  if (nMC < 100) throw std::invalid_argument("decompose: nMC too small");

  RunningStats outside, badWeight;
  auto draws = sample(mu, nMC, seed);
  for (const auto& draw : draws) {
    Eigen::VectorXd x = flatten(draw);
    double dist = body.distance(x);
    outside.add(dist > 0 ? 1.0 : 0.0);
    badWeight.add(std::exp(-profile.sigma(dist)));
  }

  GoodBadDecomposition dec{outside.mean(),
                           outside.stderror(),
                           badWeight.mean(),
                           badWeight.stderror(),
                           scale,
                           body,
                           profile};
  if (dec.delta > 0.1)
    throw std::domain_error(
        "decompose: estimated exterior mass exceeds 0.1; the measure is not "
        "confined enough for this body");
  return dec;
}

namespace {

std::vector<Eigen::VectorXd> rejection_sample(const GoodBadDecomposition& dec,
                                              const GaussianPathMeasure& mu,
                                              int count, std::uint64_t seed,
                                              bool wantBad) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  const int batch = 256;
  std::uint64_t sub = 0;
  long guard = 0;
  while (static_cast<int>(out.size()) < count) {
    auto draws = sample(mu, batch, derive_seed(seed, ++sub));
    for (const auto& draw : draws) {
      if (static_cast<int>(out.size()) >= count) break;
      Eigen::VectorXd x = flatten(draw);
      double w = dec.badWeightRaw(x);
      bool isBad = unif(rng) < w;
      if (isBad == wantBad) out.push_back(std::move(x));
    }
    if (++guard > 100000)
      throw std::runtime_error("rejection_sample: acceptance rate too low");
  }
  return out;
}

}  // namespace

std::vector<Eigen::VectorXd> sample_good(const GoodBadDecomposition& dec,
                                         const GaussianPathMeasure& mu,
                                         int count, std::uint64_t seed) {
  return rejection_sample(dec, mu, count, seed, false);
}

std::vector<Eigen::VectorXd> sample_bad(const GoodBadDecomposition& dec,
                                        const GaussianPathMeasure& mu,
                                        int count, std::uint64_t seed) {
  return rejection_sample(dec, mu, count, seed, true);
}

LogConcavityReport logconcavity_check(const GoodBadDecomposition& dec,
                                      const GaussianPathMeasure& mu,
                                      int nLines, std::uint64_t seed,
                                      double tol) {
  auto g = [&](const Eigen::VectorXd& x) {
    return dec.profile.sigma(dec.body.distance(x)) +
           0.375 * dec.precisionScale * x.squaredNorm();
  };
  GaussianPathMeasure wide = dilate2(mu);
  auto ends = sample(wide, 2 * nLines, seed);
  LogConcavityReport rep;
  rep.lines = nLines;
  for (int i = 0; i < nLines; ++i) {
    Eigen::VectorXd x = flatten(ends[2 * i]);
    Eigen::VectorXd z = flatten(ends[2 * i + 1]);
    double excess = g(0.5 * (x + z)) - 0.5 * (g(x) + g(z));
    if (excess > tol) {
      ++rep.violations;
      rep.worstViolation = std::max(rep.worstViolation, excess);
    }
  }
  return rep;
}

}  // namespace polaron
