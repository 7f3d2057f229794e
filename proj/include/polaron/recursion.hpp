#pragma once

#include <string>
#include <vector>

namespace polaron {

// Absolute constants of the confinement recursion. The analysis only proves
// existence, so these are configuration with documented defaults; cDecomp
// must stay >= 100 (the decomposition step requires that margin).
struct RecursionConstants {
  double cDecomp = 100.0;  // decomposition constant, >= 100
  double cUnif = 10.0;     // uniform-oscillation constant
  double cP = 16.0 * 2.718281828459045235 * 2.718281828459045235;  // 16 e^2
  double cStop = 3.0;      // cap multiplier: L <= ceil(cStop * log alpha)
};

struct RecursionStep {
  int k = 0;
  double R = 0;
  double beta = 0;
};

struct RecursionTrace {
  double alpha = 0;
  double p = 1;
  RecursionConstants constants;
  std::vector<RecursionStep> steps;  // k = 1 .. L
  int L = 0;
  double RL = 0;
  double betaL = 0;
  double massLowerBound = 0;  // betaL, the confinement scale at the stop index
  double nextRatio = 0;       // R_{L+1}/R_L for the first rejected step
};

// Radius/confinement recursion: R1 = cDecomp^2 sqrt(log alpha),
// beta_k = alpha / (cP R_k^{2+p}), and the closed-form update
//   R_{k+1} = cDecomp cUnif (log alpha)^{1/2} alpha^{-1/4} R_k^{(2+p)/4},
// iterated while each step at least halves the radius. Stops at the first
// k with R_{k+1}/R_k > 1/2; throws if the halving phase outlives the
// ceil(cStop log alpha) cap.
RecursionTrace recursion_run(double alpha, double p,
                             const RecursionConstants& constants = {});

// Literal confinement-driven variant: the update reads the current beta_k,
//   R_{k+1} = cDecomp cUnif (log beta_k)^{1/2} beta_k^{-1/4}.
// Requires beta_k > 1 throughout; throws domain_error otherwise (alpha too
// small for the chosen constants — reported, never clamped). Feasible only
// at astronomically large alpha with the default constants.
RecursionTrace recursion_run_beta_form(double alpha, double p = 1.0,
                                       const RecursionConstants& constants = {});

// Fixed-point scaling over a grid of completed traces (same p, same
// constants): the compensated ratios
//   beta_L (log a)^{(4+2p)/(2-p)} / a^{4/(2-p)},
//   R_L a^{1/(2-p)} / (log a)^{2/(2-p)}
// should occupy a fixed multiplicative band, and the log-corrected slope of
// log beta_L against log alpha should approach 4/(2-p).
struct FixedPointReport {
  double p = 1;
  std::vector<double> alphas;
  std::vector<double> betaRatio;
  std::vector<double> radiusRatio;
  std::vector<int> stopIndices;
  double betaBand = 0;    // max/min of betaRatio
  double radiusBand = 0;  // max/min of radiusRatio
  double betaSlope = 0;   // corrected fit slope
  double betaSlopeTarget = 0;  // 4/(2-p)
  double radiusSlope = 0;      // corrected fit slope, target -1/(2-p)
  bool stopCapHolds = false;   // every L <= ceil(cStop log alpha)
};

FixedPointReport fixed_point_check(const std::vector<RecursionTrace>& traces);

// Effective-mass lower-bound report: betaL from the trace, the matching
// closed-form scale alpha^{4/(2-p)}/(log alpha)^{(4+2p)/(2-p)}, and the
// displacement bound T/scale + 1/sqrt(scale) evaluated at a horizon T.
struct MassBoundReport {
  double alpha = 0;
  double p = 1;
  double horizonT = 0;
  double massLowerBound = 0;  // betaL
  double scaleExpr = 0;       // alpha^{4/(2-p)} / (log alpha)^{(4+2p)/(2-p)}
  double displacementBound = 0;
  std::string symbolic;  // e.g. "c * alpha^4 / (log alpha)^6"
};

MassBoundReport mass_bound(const RecursionTrace& trace, double horizonT);

}  // namespace polaron
