#include "polaron/recursion.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "polaron/stats.hpp"

namespace polaron {

namespace {

void validate_inputs(double alpha, double p, const RecursionConstants& c) {
  if (!(alpha >= 2.0))
    throw std::invalid_argument("recursion: alpha must be >= 2");
  if (!(p > 0.0) || !(p < 2.0))
    throw std::invalid_argument("recursion: p must lie in (0, 2)");
  if (!(c.cDecomp >= 100.0))
    throw std::invalid_argument("recursion: cDecomp must be >= 100");
  if (!(c.cUnif > 0.0) || !(c.cP > 0.0) || !(c.cStop > 0.0))
    throw std::invalid_argument("recursion: constants must be positive");
}

long step_cap(double alpha, const RecursionConstants& c) {
  return std::lround(std::ceil(c.cStop * std::log(alpha)));
}

// Shared driver: `update` maps (R_k, beta_k) to R_{k+1}.
template <typename Update>
RecursionTrace drive(double alpha, double p, const RecursionConstants& c,
                     Update update) {
  validate_inputs(alpha, p, c);
  const double logAlpha = std::log(alpha);
  RecursionTrace trace;
  trace.alpha = alpha;
  trace.p = p;
  trace.constants = c;

  auto beta_of = [&](double R) { return alpha / (c.cP * std::pow(R, 2.0 + p)); };

  double R = c.cDecomp * c.cDecomp * std::sqrt(logAlpha);
  double beta = beta_of(R);
  trace.steps.push_back({1, R, beta});

  const long cap = step_cap(alpha, c);
  for (;;) {
    const double next = update(R, beta);
    if (!(next > 0) || !std::isfinite(next))
      throw std::domain_error("recursion: update left the positive reals");
    if (next / R > 0.5) {
      trace.nextRatio = next / R;
      break;
    }
    if (static_cast<long>(trace.steps.size()) >= cap)
      throw std::runtime_error(
          "recursion: halving phase exceeded ceil(cStop log alpha) steps");
    R = next;
    beta = beta_of(R);
    trace.steps.push_back({static_cast<int>(trace.steps.size()) + 1, R, beta});
  }

  trace.L = static_cast<int>(trace.steps.size());
  trace.RL = trace.steps.back().R;
  trace.betaL = trace.steps.back().beta;
  trace.massLowerBound = trace.betaL;
  return trace;
}

}  // namespace

RecursionTrace recursion_run(double alpha, double p,
                             const RecursionConstants& c) {
  const double logAlpha = std::log(alpha);
  const double factor =
      c.cDecomp * c.cUnif * std::sqrt(logAlpha) * std::pow(alpha, -0.25);
  const double expo = (2.0 + p) / 4.0;
  return drive(alpha, p, c,
               [&](double R, double) { return factor * std::pow(R, expo); });
}

RecursionTrace recursion_run_beta_form(double alpha, double p,
                                       const RecursionConstants& c) {
  return drive(alpha, p, c, [&](double, double beta) {
    if (!(beta > 1.0))
      throw std::domain_error(
          "recursion (beta form): log beta_k not positive — alpha too small "
          "for the chosen constants");
    return c.cDecomp * c.cUnif * std::sqrt(std::log(beta)) *
           std::pow(beta, -0.25);
  });
}

FixedPointReport fixed_point_check(const std::vector<RecursionTrace>& traces) {
  if (traces.size() < 2)
    throw std::invalid_argument("fixed_point_check: need >= 2 traces");
  const double p = traces.front().p;
  FixedPointReport rep;
  rep.p = p;
  rep.betaSlopeTarget = 4.0 / (2.0 - p);
  const double qBeta = (4.0 + 2.0 * p) / (2.0 - p);
  const double qRadius = 2.0 / (2.0 - p);

  rep.stopCapHolds = true;
  std::vector<double> logA, betaCorrected, radiusCorrected;
  for (const auto& t : traces) {
    if (t.L < 1 || t.steps.empty())
      throw std::invalid_argument("fixed_point_check: incomplete trace");
    if (t.p != p)
      throw std::invalid_argument("fixed_point_check: mixed exponents");
    const double la = std::log(t.alpha);
    rep.alphas.push_back(t.alpha);
    rep.stopIndices.push_back(t.L);
    rep.betaRatio.push_back(t.betaL * std::pow(la, qBeta) /
                            std::pow(t.alpha, rep.betaSlopeTarget));
    rep.radiusRatio.push_back(t.RL * std::pow(t.alpha, 1.0 / (2.0 - p)) /
                              std::pow(la, qRadius));
    if (t.L > step_cap(t.alpha, t.constants)) rep.stopCapHolds = false;
    logA.push_back(la);
    betaCorrected.push_back(std::log(t.betaL) + qBeta * std::log(la));
    radiusCorrected.push_back(std::log(t.RL) - qRadius * std::log(la));
  }

  auto band = [](const std::vector<double>& v) {
    double lo = v.front(), hi = v.front();
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return hi / lo;
  };
  rep.betaBand = band(rep.betaRatio);
  rep.radiusBand = band(rep.radiusRatio);
  rep.betaSlope = fit_line(logA, betaCorrected).slope;
  rep.radiusSlope = fit_line(logA, radiusCorrected).slope;
  return rep;
}

MassBoundReport mass_bound(const RecursionTrace& trace, double horizonT) {
  if (trace.L < 1 || trace.steps.empty())
    throw std::invalid_argument("mass_bound: incomplete trace");
  MassBoundReport rep;
  rep.alpha = trace.alpha;
  rep.p = trace.p;
  rep.horizonT = horizonT;
  rep.massLowerBound = trace.betaL;
  const double sA = 4.0 / (2.0 - trace.p);
  const double sL = (4.0 + 2.0 * trace.p) / (2.0 - trace.p);
  const double la = std::log(trace.alpha);
  rep.scaleExpr = std::pow(trace.alpha, sA) / std::pow(la, sL);
  rep.displacementBound =
      horizonT / rep.scaleExpr + 1.0 / std::sqrt(rep.scaleExpr);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "c * alpha^%g / (log alpha)^%g", sA, sL);
  rep.symbolic = buf;
  return rep;
}

}  // namespace polaron
