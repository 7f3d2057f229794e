#include "polaron/polaron_mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "polaron/rng.hpp"
#include "polaron/stats.hpp"

namespace polaron {

double potential_VA(double r, double A, double p) {
  if (A <= 0) throw std::invalid_argument("potential_VA: A must be positive");
  if (r < 0) throw std::invalid_argument("potential_VA: negative radius");
  if (p == 1.0) {
    const double junction = 1.0 / A;
    if (r >= junction) return 1.0 / r;
    return 2.0 * A - A * A * r;  // tangent at r = 1/A
  }
  if (p <= 0) throw std::invalid_argument("potential_VA: p must be positive");
  if (r == 0) return A;
  return std::min(A, std::pow(r, -p));
}

double PolaronConfig::kernelAt(double t, double s) const {
  if (kernel) return kernel(t, s);
  return std::exp(-std::abs(t - s));
}

namespace {

// Precomputed data for repeated energy evaluation on one lattice: the kernel
// table over the half-open grid and scratch space for proposals.
struct EnergyWorkspace {
  const PolaronConfig& cfg;
  int n;          // grid points carrying energy (value indices 0..n-1)
  int m;          // grid points per unit interval
  double eta2;
  Eigen::MatrixXd kappa;  // n x n, kappa(t_j, t_l)
  double diagonal;        // eta^2 sum_j kappa(t_j,t_j) V_A(0), state-free

  EnergyWorkspace(const PolaronConfig& c, const Lattice& lat)
      : cfg(c), n(static_cast<int>(lat.n())), m(static_cast<int>(lat.m())),
        eta2(lat.eta() * lat.eta()), kappa(n, n) {
    for (int j = 0; j < n; ++j)
      for (int l = 0; l <= j; ++l) {
        const double v = cfg.kernelAt(lat.time(j), lat.time(l));
        kappa(j, l) = v;
        kappa(l, j) = v;
      }
    const double v0 = potential_VA(0.0, cfg.A, cfg.p);
    double acc = 0;
    for (int j = 0; j < n; ++j) acc += kappa(j, j);
    diagonal = eta2 * v0 * acc;
  }

  double pairValue(const Eigen::MatrixXd& pos, int j, int l) const {
    return potential_VA((pos.row(j) - pos.row(l)).norm(), cfg.A, cfg.p);
  }

  double full(const Eigen::MatrixXd& pos) const {
    CompensatedSum acc;
    for (int j = 1; j < n; ++j)
      for (int l = 0; l < j; ++l) acc.add(kappa(j, l) * pairValue(pos, j, l));
    return diagonal + 2.0 * eta2 * acc.value();
  }

  // Energy change when position rows [first, last) are replaced by fresh
  // rows while everything else stays put. Rows outside [0, n) carry no energy.
  double delta(const Eigen::MatrixXd& pos, const Eigen::MatrixXd& fresh,
               int first, int last) const {
    last = std::min(last, n);
    CompensatedSum acc;
    for (int j = first; j < last; ++j) {
      const int fj = j - first;
      for (int l = 0; l < n; ++l) {
        if (l >= first && l < last) continue;
        const double oldV = kappa(j, l) * pairValue(pos, j, l);
        const double newV =
            kappa(j, l) *
            potential_VA((fresh.row(fj) - pos.row(l)).norm(), cfg.A, cfg.p);
        acc.add(newV - oldV);
      }
      for (int l = first; l < j; ++l) {
        const int fl = l - first;
        const double oldV = kappa(j, l) * pairValue(pos, j, l);
        const double newV =
            kappa(j, l) *
            potential_VA((fresh.row(fj) - fresh.row(fl)).norm(), cfg.A, cfg.p);
        acc.add(newV - oldV);
      }
    }
    return 2.0 * eta2 * acc.value();
  }
};

Eigen::MatrixXd positions_of(const Eigen::MatrixXd& inc) {
  Eigen::MatrixXd pos(inc.rows() + 1, inc.cols());
  pos.row(0).setZero();
  for (int j = 0; j < inc.rows(); ++j) pos.row(j + 1) = pos.row(j) + inc.row(j);
  return pos;
}

struct ChainResult {
  ChainDiagnostics diag;
  std::vector<double> series;
  std::vector<Eigen::MatrixXd> snapshots;
};

ChainResult run_chain(const PolaronConfig& cfg, const Lattice& lat,
                      const EnergyWorkspace& ws, long steps,
                      std::uint64_t chainSeed, const McmcOptions& opt) {
  const int n = static_cast<int>(lat.n());
  const int m = static_cast<int>(lat.m());
  const int d = static_cast<int>(lat.d());
  const double eta = lat.eta();
  const double sqrtEta = std::sqrt(eta);
  const bool freeCase = (cfg.alpha == 0.0);

  auto rng = make_rng(chainSeed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto fill_gauss = [&](Eigen::MatrixXd& mat, double scale) {
    for (int r = 0; r < mat.rows(); ++r)
      for (int c = 0; c < mat.cols(); ++c) mat(r, c) = scale * gauss(rng);
  };

  Eigen::MatrixXd inc(n, d);
  fill_gauss(inc, sqrtEta);
  Eigen::MatrixXd pos;  // maintained only when the energy is in play
  double energy = 0.0;
  if (!freeCase) {
    pos = positions_of(inc);
    energy = ws.full(pos);
  }
  Eigen::RowVectorXd endpoint = inc.colwise().sum();

  const long burn = std::lround(opt.burnFraction * static_cast<double>(steps));
  double rho = opt.proposal.rho;
  long pcnProp = 0, pcnAcc = 0, brProp = 0, brAcc = 0;
  long windowProp = 0, windowAcc = 0;
  const long adaptWindow = 50;

  Eigen::MatrixXd propInc(n, d), noise(m, d), freshPos(m - 1 > 0 ? m - 1 : 0, d);
  ChainResult out;
  out.series.reserve(static_cast<std::size_t>(std::max<long>(steps - burn, 0)));

  for (long s = 0; s < steps; ++s) {
    const bool bridge = (m > 1) && (unif(rng) < opt.proposal.bridgeFraction);
    if (!bridge) {
      ++pcnProp;
      ++windowProp;
      fill_gauss(propInc, sqrtEta);
      const double keep = std::sqrt(std::max(0.0, 1.0 - rho * rho));
      propInc = keep * inc + rho * propInc;
      bool accept = true;
      double propEnergy = 0.0;
      Eigen::MatrixXd propPos;
      if (!freeCase) {
        propPos = positions_of(propInc);
        propEnergy = ws.full(propPos);
        const double logA = cfg.alpha * (propEnergy - energy);
        accept = (logA >= 0) || (std::log(unif(rng)) < logA);
      }
      if (accept) {
        inc.swap(propInc);
        if (!freeCase) {
          pos.swap(propPos);
          energy = propEnergy;
        }
        endpoint = inc.colwise().sum();
        ++pcnAcc;
        ++windowAcc;
      }
    } else {
      ++brProp;
      const int interval =
          std::min<int>(lat.T() - 1,
                        static_cast<int>(unif(rng) * lat.T()));
      const int base = interval * m;
      fill_gauss(noise, sqrtEta);
      const Eigen::RowVectorXd target =
          inc.middleRows(base, m).colwise().sum();
      const Eigen::RowVectorXd shift =
          (noise.colwise().sum() - target) / static_cast<double>(m);
      noise.rowwise() -= shift;  // bridge increments with the same window sum
      bool accept = true;
      double dE = 0.0;
      if (!freeCase) {
        // Interior positions base+1 .. base+m-1 move; endpoints do not.
        Eigen::RowVectorXd runner = pos.row(base);
        for (int j = 1; j < m; ++j) {
          runner += noise.row(j - 1);
          freshPos.row(j - 1) = runner;
        }
        dE = ws.delta(pos, freshPos, base + 1, base + m);
        const double logA = cfg.alpha * dE;
        accept = (logA >= 0) || (std::log(unif(rng)) < logA);
      }
      if (accept) {
        inc.middleRows(base, m) = noise;
        if (!freeCase) {
          pos.middleRows(base + 1, m - 1) = freshPos;
          energy += dE;
        }
        ++brAcc;
      }
    }

    if (opt.adaptRho && s < burn && windowProp >= adaptWindow) {
      const double rate =
          static_cast<double>(windowAcc) / static_cast<double>(windowProp);
      if (rate > 0.40) rho = std::min(1.0, rho * 1.3);
      else if (rate < 0.25) rho = std::max(1e-3, rho / 1.3);
      windowProp = windowAcc = 0;
    }

    if (s >= burn) {
      out.series.push_back(endpoint.squaredNorm());
      if (opt.keepEvery > 0 && (s - burn) % opt.keepEvery == 0)
        out.snapshots.push_back(inc);
    }
  }

  ChainDiagnostics diag;
  diag.kept = static_cast<long>(out.series.size());
  RunningStats rs;
  for (double v : out.series) rs.add(v);
  diag.mean = rs.mean();
  auto [varOfMean, ess] = batch_means(out.series, opt.batches);
  diag.varOfMean = varOfMean;
  diag.ess = ess;
  diag.acceptPcn = pcnProp ? static_cast<double>(pcnAcc) / pcnProp : 0.0;
  diag.acceptBridge = brProp ? static_cast<double>(brAcc) / brProp : 0.0;
  diag.rhoFinal = rho;
  out.diag = diag;
  return out;
}

}  // namespace

double interaction_energy(const Eigen::MatrixXd& increments,
                          const PolaronConfig& cfg) {
  const Lattice lat(cfg.T, cfg.eta, std::max<int>(1, increments.cols()));
  if (increments.rows() != static_cast<Eigen::Index>(lat.n()))
    throw std::invalid_argument(
        "interaction_energy: increment count does not match the lattice");
  EnergyWorkspace ws(cfg, lat);
  return ws.full(positions_of(increments));
}

McmcRun mcmc_run(const PolaronConfig& cfg, long steps, std::uint64_t seed,
                 const McmcOptions& opt) {
  if (cfg.alpha < 0) throw std::invalid_argument("mcmc_run: negative alpha");
  if (opt.chains < 1) throw std::invalid_argument("mcmc_run: need >= 1 chain");
  const Lattice lat = cfg.lattice();
  const long burn = std::lround(opt.burnFraction * static_cast<double>(steps));
  if (steps - burn < 2L * opt.batches)
    throw std::invalid_argument("mcmc_run: too few steps for batch means");
  EnergyWorkspace ws(cfg, lat);

  McmcRun run;
  std::vector<ChainResult> results;
  results.reserve(opt.chains);
  for (int c = 0; c < opt.chains; ++c)
    results.push_back(
        run_chain(cfg, lat, ws, steps, derive_seed(seed, c), opt));

  // Inverse-variance pooling across chains; equal weights if any batch
  // variance degenerates.
  bool allPositive = true;
  for (const auto& r : results)
    if (!(r.diag.varOfMean > 0)) allPositive = false;
  double wSum = 0, mSum = 0, essSum = 0;
  for (const auto& r : results) {
    const double w = allPositive ? 1.0 / r.diag.varOfMean : 1.0;
    wSum += w;
    mSum += w * r.diag.mean;
    essSum += r.diag.ess;
  }
  McmcEstimate est;
  est.mean = mSum / wSum;
  if (allPositive) {
    est.stderrv = std::sqrt(1.0 / wSum);
  } else {
    RunningStats spread;
    for (const auto& r : results) spread.add(r.diag.mean);
    est.stderrv = results.size() > 1 ? spread.stderror() : 0.0;
  }
  est.ess = essSum;
  const double denom = static_cast<double>(lat.d()) * lat.T();
  est.sigma2 = est.mean / denom;
  est.sigma2Stderr = est.stderrv / denom;
  double accWeighted = 0;
  for (const auto& r : results)
    accWeighted += 0.5 * (r.diag.acceptPcn + r.diag.acceptBridge);
  est.acceptRate = accWeighted / results.size();
  est.steps = steps;
  est.seed = seed;
  est.lowEss = est.ess < 100.0;
  for (const auto& r : results) est.chains.push_back(r.diag);

  run.estimate = est;
  run.series = std::move(results.front().series);
  for (auto& r : results)
    for (auto& snap : r.snapshots) run.snapshots.push_back(std::move(snap));
  return run;
}

OscillationTable oscillation_stats(const std::vector<Eigen::MatrixXd>& paths,
                                   const Lattice& lat,
                                   const std::vector<double>& rGrid) {
  if (paths.empty())
    throw std::invalid_argument("oscillation_stats: no paths");
  if (rGrid.empty())
    throw std::invalid_argument("oscillation_stats: empty radius grid");
  const int m = static_cast<int>(lat.m());
  const int T = static_cast<int>(lat.T());
  std::vector<RunningStats> stats(rGrid.size());
  for (const auto& inc : paths) {
    if (inc.rows() != static_cast<Eigen::Index>(lat.n()) ||
        inc.cols() != static_cast<Eigen::Index>(lat.d()))
      throw std::invalid_argument("oscillation_stats: path shape mismatch");
    const Eigen::MatrixXd pos = positions_of(inc);
    std::vector<double> osc(T, 0.0);
    for (int i = 0; i < T; ++i) {
      double worst = 0;
      for (int a = i * m; a <= (i + 1) * m; ++a)
        for (int b = i * m; b < a; ++b)
          worst = std::max(worst, (pos.row(a) - pos.row(b)).norm());
      osc[i] = worst;
    }
    for (std::size_t r = 0; r < rGrid.size(); ++r) {
      int within = 0;
      for (int i = 0; i < T; ++i)
        if (osc[i] <= rGrid[r]) ++within;
      stats[r].add(static_cast<double>(within) / T);
    }
  }
  OscillationTable table;
  table.rGrid = rGrid;
  table.windowsPerPath = T;
  table.paths = static_cast<long>(paths.size());
  for (auto& s : stats) {
    table.fraction.push_back(s.mean());
    table.stderrs.push_back(paths.size() > 1 ? s.stderror() : 0.0);
  }
  return table;
}

}  // namespace polaron
