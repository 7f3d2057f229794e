#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polaron/gaussian_measure.hpp"
#include "polaron/lattice.hpp"

namespace polaron {

// Coulomb potential with strength cutoff A. For p == 1 the cutoff is the
// tangent line at r = 1/A (value 2A at r = 0, C^1 at the junction); for
// general p it is the plain truncation min(A, r^{-p}).
double potential_VA(double r, double A, double p = 1.0);

struct PolaronConfig {
  double alpha = 1.0;
  int T = 4;
  double eta = 1.0 / 32;
  double A = 50.0;
  double p = 1.0;
  // Memory kernel kappa(t, s); defaults to exp(-|t - s|) when empty.
  std::function<double(double, double)> kernel;

  Lattice lattice() const { return Lattice(T, eta, 3); }
  double kernelAt(double t, double s) const;
};

// Discretized double-integral interaction
//   eta^2 * sum_{j,l in G} kappa(t_j, t_l) V_A(||B_j - B_l||)
// over the half-open grid G = {0, eta, ..., T - eta}, diagonal included
// (kappa(t,t) V_A(0) eta^2 per grid point). Increments are n x d with any d.
double interaction_energy(const Eigen::MatrixXd& increments,
                          const PolaronConfig& cfg);

struct ProposalOptions {
  double rho = 0.2;            // pCN mixing angle
  double bridgeFraction = 0.5; // probability of a bridge refresh move
};

struct McmcOptions {
  ProposalOptions proposal;
  int chains = 4;
  double burnFraction = 0.2;    // discarded prefix (adaptation happens here)
  bool adaptRho = true;         // tune rho toward 25-40% pCN acceptance
  int batches = 32;             // batch-means blocks per chain
  int keepEvery = 0;            // snapshot every k-th post-burn step (0: none)
};

struct ChainDiagnostics {
  double mean = 0, varOfMean = 0, ess = 0;
  double acceptPcn = 0, acceptBridge = 0, rhoFinal = 0;
  long kept = 0;
};

struct McmcEstimate {
  double mean = 0;          // pooled E ||B_T||^2
  double stderrv = 0;
  double ess = 0;           // pooled effective sample size
  double sigma2 = 0;        // mean / (3 T)
  double sigma2Stderr = 0;
  double acceptRate = 0;    // all moves, all chains
  long steps = 0;           // per chain
  std::uint64_t seed = 0;
  bool lowEss = false;      // pooled ess < 100: do not trust the headline
  std::vector<ChainDiagnostics> chains;
};

struct McmcRun {
  McmcEstimate estimate;
  std::vector<double> series;              // chain 0 ||B_T||^2, post-burn
  std::vector<Eigen::MatrixXd> snapshots;  // thinned increment configs
};

// Metropolis sampler for the interaction-weighted path measure
//   dP proportional to exp(alpha * interaction_energy) dBM.
// Moves: preconditioned Crank-Nicolson rotations of all increments (exact
// BM-prior invariance) mixed with single-interval Brownian-bridge refreshes
// (endpoint-preserving, delta-energy evaluated on the changed window only).
// Deterministic in (cfg, steps, seed, options); chains use derived seeds.
McmcRun mcmc_run(const PolaronConfig& cfg, long steps, std::uint64_t seed,
                 const McmcOptions& options = {});

// Per-window oscillation statistics of sampled paths: for each radius R in
// rGrid, the fraction of unit windows whose grid values stay within pairwise
// distance R, with a stderr over snapshots.
struct OscillationTable {
  std::vector<double> rGrid;
  std::vector<double> fraction;
  std::vector<double> stderrs;
  long windowsPerPath = 0;
  long paths = 0;
};

OscillationTable oscillation_stats(const std::vector<Eigen::MatrixXd>& paths,
                                   const Lattice& lat,
                                   const std::vector<double>& rGrid);

}  // namespace polaron
