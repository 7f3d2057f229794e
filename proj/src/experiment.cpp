#include "polaron/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "polaron/convex_body.hpp"
#include "polaron/decomposition.hpp"
#include "polaron/forms.hpp"
#include "polaron/gci.hpp"
#include "polaron/lattice.hpp"
#include "polaron/polaron_mcmc.hpp"
#include "polaron/qmc.hpp"
#include "polaron/recursion.hpp"
#include "polaron/rng.hpp"
#include "polaron/sigma_profile.hpp"
#include "polaron/spectral.hpp"
#include "polaron/stats.hpp"

#ifndef POLARON_GIT_DESCRIBE
#define POLARON_GIT_DESCRIBE "unknown"
#endif

namespace polaron {

void ExperimentResult::assertThat(const std::string& name, bool ok,
                                  const std::string& detail) {
  pass = pass && ok;
  nlohmann::json a;
  a["name"] = name;
  a["pass"] = ok;
  a["detail"] = detail;
  report["assertions"].push_back(a);
  lines.push_back(std::string(ok ? "[ ok ] " : "[FAIL] ") + name + " — " +
                  detail);
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

namespace {

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

std::vector<double> grid_or(const Config& cfg, const std::string& key,
                            std::vector<double> fallback) {
  auto v = cfg.numbers(key);
  return v.empty() ? fallback : v;
}

}  // namespace

// ---------------------------------------------------------------------------
// spectral: series formula vs exact lattice covariance
// ---------------------------------------------------------------------------

ExperimentResult run_spectral(const Config& cfg, std::uint64_t) {
  ExperimentResult res;
  const double eta = cfg.number("spectral.eta", 1.0 / 256);
  const double tol = cfg.number("spectral.tol", 5e-3);
  const double freeTol = cfg.number("spectral.freeTol", 1e-10);
  const auto betas = grid_or(cfg, "spectral.betas", {0, 2, 10, 100, 1000});
  const auto tGrid = grid_or(cfg, "spectral.tgrid",
                             {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875});

  const Lattice lat(1, eta, 3);
  std::ostringstream csv;
  csv << "beta,t,series,matrix,absdiff\n";
  double maxDiff = 0, maxFreeDiff = 0;
  for (double beta : betas) {
    const GaussianPathMeasure mu = tilde_measure(lat, beta, 0);
    double rowMax = 0;
    for (double t : tGrid) {
      const long k = std::lround(t / eta);
      if (std::abs(k * eta - t) > 1e-9)
        throw std::invalid_argument("spectral: t not on the lattice grid");
      const double series = variance_series(beta, t);
      const double matrix =
          mu.functionalVariance(endpoint_functional(lat, static_cast<int>(k)));
      const double diff = std::abs(series - matrix);
      rowMax = std::max(rowMax, diff);
      csv << csv_num(beta) << "," << csv_num(t) << "," << csv_num(series)
          << "," << csv_num(matrix) << "," << csv_num(diff) << "\n";
    }
    if (beta == 0)
      maxFreeDiff = std::max(maxFreeDiff, rowMax);
    else
      maxDiff = std::max(maxDiff, rowMax);
    res.note(fmt("beta=%-8g max|series-matrix| = %.3e", beta, rowMax));
  }
  res.csv["spectral.csv"] = csv.str();
  res.report["eta"] = eta;
  res.report["maxAbsDiff"] = maxDiff;
  res.report["maxFreeDiff"] = maxFreeDiff;
  res.report["tolerance"] = tol;
  res.assertThat("series matches lattice covariance", maxDiff <= tol,
                 fmt("max diff %.3e <= %.1e", maxDiff, tol));
  res.assertThat("free case is exact", maxFreeDiff <= freeTol,
                 fmt("beta=0 diff %.3e <= %.1e", maxFreeDiff, freeTol));
  return res;
}

// ---------------------------------------------------------------------------
// recursion: fixed-point scaling over an alpha grid
// ---------------------------------------------------------------------------

namespace {

double calibrated_cunif(const Config& cfg, double p) {
  if (cfg.has("recursion.cUnif")) return cfg.number("recursion.cUnif", 0);
  if (p == 0.5) return 5e-4;
  if (p == 1.0) return 0.05;
  if (p == 1.5) return 0.03;
  throw std::invalid_argument(
      "recursion: no calibrated cUnif for this p; set recursion.cUnif");
}

}  // namespace

ExperimentResult run_recursion(const Config& cfg, std::uint64_t) {
  ExperimentResult res;
  const auto ps = grid_or(cfg, "recursion.ps", {0.5, 1.0, 1.5});
  const double aMin = cfg.number("recursion.alphaMin", 1e3);
  const double aMax = cfg.number("recursion.alphaMax", 1e6);
  const long points = cfg.integer("recursion.points", 61);
  const double slopeTol = cfg.number("recursion.slopeTol", 0.15);
  const double horizonT = cfg.number("recursion.horizonT", 4.0);
  if (points < 2 || !(aMin >= 2) || !(aMax > aMin))
    throw std::invalid_argument("recursion: need >= 2 grid points, 2 <= alphaMin < alphaMax");

  std::ostringstream csv;
  csv << "p,alpha,k,R,beta\n";
  for (double p : ps) {
    RecursionConstants constants;
    constants.cDecomp = cfg.number("recursion.cDecomp", 100.0);
    constants.cUnif = calibrated_cunif(cfg, p);
    constants.cStop = cfg.number("recursion.cStop", 3.0);

    std::vector<RecursionTrace> traces;
    for (long i = 0; i < points; ++i) {
      const double a = std::pow(
          10.0, std::log10(aMin) +
                    (std::log10(aMax) - std::log10(aMin)) * i / (points - 1.0));
      traces.push_back(recursion_run(a, p, constants));
      for (const auto& s : traces.back().steps)
        csv << csv_num(p) << "," << csv_num(traces.back().alpha) << "," << s.k
            << "," << csv_num(s.R) << "," << csv_num(s.beta) << "\n";
    }
    const FixedPointReport rep = fixed_point_check(traces);
    const MassBoundReport mass = mass_bound(traces.back(), horizonT);

    nlohmann::json jp;
    jp["p"] = p;
    jp["cUnif"] = constants.cUnif;
    jp["slope"] = rep.betaSlope;
    jp["slopeTarget"] = rep.betaSlopeTarget;
    jp["betaBand"] = rep.betaBand;
    jp["radiusBand"] = rep.radiusBand;
    jp["radiusSlope"] = rep.radiusSlope;
    jp["stopCapHolds"] = rep.stopCapHolds;
    jp["massLowerBound"] = mass.massLowerBound;
    jp["massSymbolic"] = mass.symbolic;
    jp["displacementBound"] = mass.displacementBound;
    res.report["perP"].push_back(jp);

    res.note(fmt("p=%.2f slope %.4f (target %.4f)", p, rep.betaSlope,
                 rep.betaSlopeTarget));
    res.assertThat(fmt("exponent at p=%.2f", p, 0, 0),
                   std::abs(rep.betaSlope - rep.betaSlopeTarget) <= slopeTol,
                   fmt("|%.4f - %.4f| <= %.2f", rep.betaSlope,
                       rep.betaSlopeTarget, slopeTol));
    res.assertThat(fmt("stop cap at p=%.2f", p, 0, 0), rep.stopCapHolds,
                   "L <= ceil(cStop log alpha) on the whole grid");
  }
  res.csv["recursion_trace.csv"] = csv.str();
  return res;
}

// ---------------------------------------------------------------------------
// mcmc: sigma^2(alpha) estimation with confinement comparison
// ---------------------------------------------------------------------------

ExperimentResult run_mcmc(const Config& cfg, std::uint64_t seed) {
  ExperimentResult res;
  const auto alphas = grid_or(cfg, "mcmc.alphas", {0.0, 0.5, 1.0, 2.0});
  const long T = cfg.integer("mcmc.T", 4);
  const double eta = cfg.number("mcmc.eta", 1.0 / 32);
  const double A = cfg.number("mcmc.A", 50.0);
  const double p = cfg.number("mcmc.p", 1.0);
  const long steps = cfg.integer("mcmc.steps", 20000);
  const int chains = static_cast<int>(cfg.integer("mcmc.chains", 4));
  const int keepEvery = static_cast<int>(cfg.integer("mcmc.keepEvery", 40));
  const double minEss = cfg.number("mcmc.minEss", 100.0);
  const auto rGrid = grid_or(cfg, "mcmc.rGrid", {1.5, 2.0, 3.0});

  McmcOptions opt;
  opt.chains = chains;
  opt.keepEvery = keepEvery;
  opt.proposal.rho = cfg.number("mcmc.rho", 0.2);
  opt.proposal.bridgeFraction = cfg.number("mcmc.bridgeFraction", 0.5);

  std::ostringstream csv, oscCsv;
  csv << "alpha,meanB2,stderr,sigma2,sigma2stderr,ess,acceptRate\n";
  oscCsv << "alpha,R,fraction,stderr\n";

  const double freeMoment = 3.0 * static_cast<double>(T);
  std::vector<double> sigma2s;
  OscillationTable baseline;
  bool haveBaseline = false;

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    PolaronConfig pc;
    pc.alpha = alphas[i];
    pc.T = static_cast<int>(T);
    pc.eta = eta;
    pc.A = A;
    pc.p = p;
    const McmcRun run = mcmc_run(pc, steps, derive_seed(seed, 7000 + i), opt);
    const McmcEstimate& est = run.estimate;
    sigma2s.push_back(est.sigma2);

    csv << csv_num(pc.alpha) << "," << csv_num(est.mean) << ","
        << csv_num(est.stderrv) << "," << csv_num(est.sigma2) << ","
        << csv_num(est.sigma2Stderr) << "," << csv_num(est.ess) << ","
        << csv_num(est.acceptRate) << "\n";

    nlohmann::json ja;
    ja["alpha"] = pc.alpha;
    ja["meanB2"] = est.mean;
    ja["stderr"] = est.stderrv;
    ja["sigma2"] = est.sigma2;
    ja["sigma2Stderr"] = est.sigma2Stderr;
    ja["ess"] = est.ess;
    ja["acceptRate"] = est.acceptRate;
    ja["lowEss"] = est.lowEss;

    if (est.lowEss) {
      res.note(fmt("alpha=%-5g ESS=%.0f < 100 — headline withheld, see JSON",
                   pc.alpha, est.ess));
    } else {
      res.note(fmt("alpha=%-5g sigma2 = %.4f +- %.4f", pc.alpha, est.sigma2,
                   est.sigma2Stderr));
    }

    if (pc.alpha == 0.0) {
      res.assertThat("free endpoint second moment",
                     std::abs(est.mean - freeMoment) <=
                         3.0 * est.stderrv + 1e-12,
                     fmt("|%.4f - %g| <= 3 x %.4f", est.mean, freeMoment,
                         est.stderrv));
      res.assertThat("free-case ESS", est.ess >= minEss,
                     fmt("ess %.0f >= %g", est.ess, minEss));
    } else {
      res.assertThat(fmt("endpoint moment dominated at alpha=%g", pc.alpha),
                     est.mean <= freeMoment + 3.0 * est.stderrv,
                     fmt("%.4f <= %g + 3 x %.4f", est.mean, freeMoment,
                         est.stderrv));
    }

    if (keepEvery > 0 && !run.snapshots.empty()) {
      const OscillationTable t =
          oscillation_stats(run.snapshots, pc.lattice(), rGrid);
      for (std::size_t r = 0; r < rGrid.size(); ++r) {
        oscCsv << csv_num(pc.alpha) << "," << csv_num(rGrid[r]) << ","
               << csv_num(t.fraction[r]) << "," << csv_num(t.stderrs[r])
               << "\n";
        ja["oscillation"].push_back({{"R", rGrid[r]},
                                     {"fraction", t.fraction[r]},
                                     {"stderr", t.stderrs[r]}});
      }
      if (pc.alpha == 0.0) {
        baseline = t;
        haveBaseline = true;
      } else if (haveBaseline) {
        for (std::size_t r = 0; r < rGrid.size(); ++r) {
          const double slack = 3.0 * std::sqrt(std::pow(t.stderrs[r], 2) +
                                               std::pow(baseline.stderrs[r], 2));
          res.assertThat(
              fmt("confinement at alpha=%g, R=%g", pc.alpha, rGrid[r]),
              t.fraction[r] >= baseline.fraction[r] - slack,
              fmt("%.4f >= %.4f - %.4f", t.fraction[r], baseline.fraction[r],
                  slack));
        }
      }
    }
    res.report["runs"].push_back(ja);
  }

  bool monotone = true;
  for (std::size_t i = 1; i < sigma2s.size(); ++i)
    if (sigma2s[i] > sigma2s[i - 1]) monotone = false;
  res.report["monotoneSigma2"] = monotone;
  if (!monotone)
    res.note("warning: sigma2 point estimates not monotone across the alpha "
             "grid (allowed within error)");

  res.csv["mcmc.csv"] = csv.str();
  res.csv["mcmc_oscillation.csv"] = oscCsv.str();
  return res;
}

// ---------------------------------------------------------------------------
// gci: randomized correlation-inequality suite
// ---------------------------------------------------------------------------

namespace {

ConvexBody random_body(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (unif(rng) < 0.5) {
    Eigen::VectorXd normal(d);
    for (int i = 0; i < d; ++i) normal[i] = gauss(rng);
    if (normal.norm() < 1e-12) normal[0] = 1.0;
    return make_slab(normal, 0.8 + 1.7 * unif(rng));
  }
  return make_ball(std::sqrt(static_cast<double>(d)) * (0.85 + 0.65 * unif(rng)));
}

}  // namespace

ExperimentResult run_gci(const Config& cfg, std::uint64_t seed) {
  ExperimentResult res;
  const long cases = cfg.integer("gci.cases", 50);
  const long samples = cfg.integer("gci.samplesPerCase", 200000);
  const int replicates = static_cast<int>(cfg.integer("gci.replicates", 32));
  if (cases < 1) throw std::invalid_argument("gci: need >= 1 case");

  std::ostringstream jsonl;
  long nPass = 0, nTie = 0, nFail = 0;
  // Equality-case control: independent axis slabs have true margin exactly
  // zero, so their pooled (inverse-variance) margin must be consistent with
  // zero. Pooling across the control population is the statistically sound
  // form of this check — a per-case 3-sigma gate would trip on ordinary
  // sampling noise at a guaranteed ~0.5% rate per case — and it is strictly
  // more sensitive to a genuine estimator bias. Per-case excursions are
  // still tallied for the report.
  double ctrlWeightedSum = 0, ctrlInvVar = 0, ctrlMaxAbsZ = 0;
  long ctrlCases = 0, ctrlBeyond3 = 0;
  for (long i = 0; i < cases; ++i) {
    auto rng = make_rng(derive_seed(seed, 500 + i));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = 2 + static_cast<int>(unif(rng) * 5.0);
    const Lattice lat(1, 1.0, d);
    const GaussianPathMeasure mu = brownian(lat);

    ConvexBody k1 = make_ball(1.0), k2 = make_ball(1.0);
    std::string kind;
    const double coin = unif(rng);
    if (coin < 0.05 && d >= 2) {
      // independent axis-aligned slabs: the equality case of the inequality
      Eigen::VectorXd e0 = Eigen::VectorXd::Zero(d), e1 = Eigen::VectorXd::Zero(d);
      e0[0] = 1.0;
      e1[1] = 1.0;
      k1 = make_slab(e0, 0.8 + 1.2 * unif(rng));
      k2 = make_slab(e1, 0.8 + 1.2 * unif(rng));
      kind = "independent-slabs";
    } else if (coin < 0.35) {
      k1 = make_intersection({random_body(rng, d), random_body(rng, d)});
      k2 = random_body(rng, d);
      kind = "triple";
    } else {
      k1 = random_body(rng, d);
      k2 = random_body(rng, d);
      kind = "pair";
    }

    char id[48];
    std::snprintf(id, sizeof(id), "case-%04ld-d%d-%s", i, d, kind.c_str());
    const GciReport rep = gci_pair_test(mu, k1, k2, samples,
                                        derive_seed(seed, 900 + i),
                                        replicates, id);
    switch (rep.verdict) {
      case GciVerdict::pass: ++nPass; break;
      case GciVerdict::tie: ++nTie; break;
      case GciVerdict::fail: ++nFail; break;
    }
    if (kind == "independent-slabs") {
      const double sd = std::max(rep.marginStderr, 1e-12);
      const double z = rep.margin / sd;
      ctrlWeightedSum += rep.margin / (sd * sd);
      ctrlInvVar += 1.0 / (sd * sd);
      ctrlMaxAbsZ = std::max(ctrlMaxAbsZ, std::abs(z));
      if (std::abs(z) > 3.0) ++ctrlBeyond3;
      ++ctrlCases;
    }

    nlohmann::json jc;
    jc["caseId"] = rep.caseId;
    jc["d"] = d;
    jc["kind"] = kind;
    jc["lhs"] = rep.lhs;
    jc["rhs"] = rep.rhs;
    jc["margin"] = rep.margin;
    jc["marginStderr"] = rep.marginStderr;
    jc["verdict"] = to_string(rep.verdict);
    jsonl << jc.dump() << "\n";
  }

  res.csv["gci_cases.jsonl"] = jsonl.str();
  res.report["cases"] = cases;
  res.report["pass"] = nPass;
  res.report["tie"] = nTie;
  res.report["fail"] = nFail;
  res.note(fmt("verdicts: %g pass / %g tie", static_cast<double>(nPass),
               static_cast<double>(nTie)));
  res.assertThat("no fail verdicts", nFail == 0,
                 fmt("%g fails out of %g cases", static_cast<double>(nFail),
                     static_cast<double>(cases)));
  const double ctrlMargin = ctrlInvVar > 0 ? ctrlWeightedSum / ctrlInvVar : 0.0;
  const double ctrlStderr = ctrlInvVar > 0 ? std::sqrt(1.0 / ctrlInvVar) : 0.0;
  res.report["controlCases"] = ctrlCases;
  res.report["controlPooledMargin"] = ctrlMargin;
  res.report["controlPooledStderr"] = ctrlStderr;
  res.report["controlMaxAbsZ"] = ctrlMaxAbsZ;
  res.report["controlBeyond3Sigma"] = ctrlBeyond3;
  res.assertThat(
      "independent-slab margins consistent with zero",
      ctrlCases == 0 || std::abs(ctrlMargin) <= 3.0 * ctrlStderr,
      fmt("pooled margin %.2e within 3 x %.2e over %g equality cases",
          ctrlMargin, ctrlStderr, static_cast<double>(ctrlCases)));
  return res;
}

// ---------------------------------------------------------------------------
// decompose: good/bad split suite with negative control
// ---------------------------------------------------------------------------

namespace {

struct DecomposeCase {
  int d;
  ConvexBody body;
  std::string name;
};

}  // namespace

ExperimentResult run_decompose(const Config& cfg, std::uint64_t seed) {
  ExperimentResult res;
  const int nMC = static_cast<int>(cfg.integer("decompose.nmc", 200000));
  const int goodSamples =
      static_cast<int>(cfg.integer("decompose.goodSamples", 100000));
  const int logconLines =
      static_cast<int>(cfg.integer("decompose.logconLines", 1000));
  const double deltaMax = cfg.number("decompose.deltaMax", 1e-3);
  const double R = cfg.number("decompose.R", 3.0);
  const double C1 = cfg.number("decompose.C1", 3.0);

  std::vector<DecomposeCase> suite;
  suite.push_back({2, make_ball(4.0), "d2-ball4"});
  suite.push_back({3, make_ball(4.5), "d3-ball4.5"});
  suite.push_back({8, make_ball(5.5), "d8-ball5.5"});
  suite.push_back(
      {2, make_box(Eigen::VectorXd::Constant(2, 3.9)), "d2-box3.9"});

  const SigmaProfile profile(R, C1);
  std::ostringstream csv;
  csv << "case,delta,deltaStderr,deltaPrime,deltaPrimeStderr,"
         "supportViolations,logconViolations\n";

  for (std::size_t i = 0; i < suite.size(); ++i) {
    const DecomposeCase& dc = suite[i];
    const Lattice lat(1, 1.0, dc.d);
    const GaussianPathMeasure mu = brownian(lat);
    const GoodBadDecomposition dec =
        decompose(mu, dc.body, profile, nMC, derive_seed(seed, 300 + i));

    long supportViolations = 0;
    for (const auto& x :
         sample_good(dec, mu, goodSamples, derive_seed(seed, 400 + i)))
      if (!dec.inGoodSupport(x)) ++supportViolations;

    const LogConcavityReport lc =
        logconcavity_check(dec, mu, logconLines, derive_seed(seed, 450 + i));

    csv << dc.name << "," << csv_num(dec.delta) << ","
        << csv_num(dec.deltaStderr) << "," << csv_num(dec.deltaPrime) << ","
        << csv_num(dec.deltaPrimeStderr) << "," << supportViolations << ","
        << lc.violations << "\n";

    nlohmann::json jc;
    jc["case"] = dc.name;
    jc["d"] = dc.d;
    jc["delta"] = dec.delta;
    jc["deltaStderr"] = dec.deltaStderr;
    jc["deltaPrime"] = dec.deltaPrime;
    jc["deltaPrimeStderr"] = dec.deltaPrimeStderr;
    jc["supportViolations"] = supportViolations;
    jc["logconViolations"] = lc.violations;
    jc["logconWorst"] = lc.worstViolation;
    res.report["cases"].push_back(jc);
    res.note(dc.name + fmt(": delta=%.2e delta'=%.2e", dec.delta,
                           dec.deltaPrime));

    res.assertThat(dc.name + ": exterior mass small", dec.delta <= deltaMax,
                   fmt("delta %.2e <= %.1e", dec.delta, deltaMax));
    const double slack = 3.0 * std::sqrt(std::pow(dec.deltaStderr, 2) +
                                         std::pow(dec.deltaPrimeStderr, 2));
    res.assertThat(dc.name + ": delta' <= delta within 3 stderr",
                   dec.deltaPrime <= dec.delta + slack + std::exp(-R * R),
                   fmt("%.3e <= %.3e + %.1e", dec.deltaPrime,
                       dec.delta + slack, std::exp(-R * R)));
    res.assertThat(dc.name + ": good support clean", supportViolations == 0,
                   fmt("%g violations in %g samples",
                       static_cast<double>(supportViolations),
                       static_cast<double>(goodSamples)));
    res.assertThat(dc.name + ": log-concavity clean", lc.violations == 0,
                   fmt("%g violations on %g segments",
                       static_cast<double>(lc.violations),
                       static_cast<double>(logconLines)));
  }

  if (cfg.flag("decompose.negativeControl", true)) {
    const SigmaProfile weak(R, 0.01);
    const Lattice lat(1, 1.0, 2);
    const GaussianPathMeasure mu = brownian(lat);
    const GoodBadDecomposition dec =
        decompose(mu, make_ball(4.0), weak, nMC, derive_seed(seed, 777));
    const LogConcavityReport lc =
        logconcavity_check(dec, mu, logconLines, derive_seed(seed, 778));
    res.report["negativeControl"] = {{"C1", 0.01},
                                     {"violations", lc.violations},
                                     {"worst", lc.worstViolation}};
    res.note(fmt("negative control C1=0.01: %g violations",
                 static_cast<double>(lc.violations)));
    res.assertThat("negative control detects violations", lc.violations >= 1,
                   fmt("%g midpoint violations found",
                       static_cast<double>(lc.violations)));
  }

  // report-only: coarse search for the smallest C1 that passes the
  // log-concavity probe on the d=2 reference case
  {
    const Lattice lat(1, 1.0, 2);
    const GaussianPathMeasure mu = brownian(lat);
    double smallest = -1;
    for (double c1 : {1.0, 1.5, 2.0, 2.5, 8.0 / 3.0, 3.0}) {
      const SigmaProfile pr(R, c1);
      const GoodBadDecomposition dec =
          decompose(mu, make_ball(4.0), pr, 20000, derive_seed(seed, 800));
      if (logconcavity_check(dec, mu, 200, derive_seed(seed, 801)).pass()) {
        smallest = c1;
        break;
      }
    }
    res.report["smallestPassingC1"] = smallest;
  }

  res.csv["decompose.csv"] = csv.str();
  return res;
}

// ---------------------------------------------------------------------------
// oracle-check: fast battery of exact cross-checks
// ---------------------------------------------------------------------------

ExperimentResult run_oracle_check(const Config& cfg, std::uint64_t) {
  ExperimentResult res;
  const double tolExact = cfg.number("oracle.tolExact", 1e-10);

  {  // window identity W - 2|avg diff|^2 = 2 Q0 + 2 Q1
    const Lattice lat(2, 1.0 / 16, 1);
    const Eigen::MatrixXd lhs = window_form(lat, 0, 2).matrix -
                                2.0 * mean_difference_form(lat, 0, 1).matrix;
    const Eigen::MatrixXd rhs = 2.0 * intra_interval_form(lat, 0).matrix +
                                2.0 * intra_interval_form(lat, 1).matrix;
    const double diff = (lhs - rhs).norm();
    res.assertThat("two-window decomposition identity", diff <= tolExact,
                   fmt("matrix diff %.2e", diff));
  }
  {  // linear path energy (1 - eta^2)/6
    const Lattice lat(1, 1.0 / 16, 1);
    const Eigen::MatrixXd inc = Eigen::MatrixXd::Constant(16, 1, 1.0 / 16);
    const double q = intra_interval_form(lat, 0)(inc);
    const double expect = (1.0 - 1.0 / 256) / 6.0;
    res.assertThat("linear-path intra value", std::abs(q - expect) <= 1e-12,
                   fmt("|%.12f - %.12f|", q, expect));
  }
  {  // dilation/reweight commutation
    const Lattice lat(1, 1.0 / 8, 1);
    const QuadraticForm q = intra_interval_form(lat, 0);
    const GaussianPathMeasure a = dilate2(reweight_quadratic(brownian(lat), q));
    const QuadraticForm qQuarter = make_form(q.matrix / 4.0, q.shiftInvariant);
    const GaussianPathMeasure b =
        reweight_quadratic(dilate2(brownian(lat)), qQuarter);
    const double diff = (a.precision() - b.precision()).norm();
    res.assertThat("dilation commutes with reweighting", diff <= 1e-12,
                   fmt("precision diff %.2e", diff));
  }
  {  // spectral series vs matrix route at coarse mesh
    const Lattice lat(1, 1.0 / 64, 3);
    const GaussianPathMeasure mu = tilde_measure(lat, 100.0, 0);
    double worst = 0;
    for (int k = 8; k < 64; k += 8) {
      const double t = k / 64.0;
      const double diff = std::abs(variance_series(100.0, t) -
                                   mu.functionalVariance(endpoint_functional(lat, k)));
      worst = std::max(worst, diff);
    }
    res.assertThat("spectral routes agree at eta=1/64",
                   worst <= 1e-2 && worst >= 1e-4,
                   fmt("max diff %.2e in [1e-4, 1e-2]", worst));
  }
  {  // Fourier identity partial sum
    const double err = fourier_identity_check(0.5, 100000);
    res.assertThat("Fourier identity at t=1/2", err <= 1e-5,
                   fmt("partial-sum error %.2e", err));
  }
  {  // pinned eigenpair and deficit coefficient
    const double lam = eigenpair(1, M_PI * M_PI / 2.0).lambda;
    res.assertThat("unit eigenvalue pin", std::abs(lam - 1.0) <= 1e-12,
                   fmt("lambda %.12f", lam));
    const double c = deficit_coeff(1, M_PI * M_PI / 4.0);
    res.assertThat("half deficit pin", std::abs(c - 0.5) <= 1e-12,
                   fmt("coefficient %.12f", c));
  }
  {  // Sobol opening block
    SobolSequence seq(2, 0);
    const double expect[4][2] = {
        {0.0, 0.0}, {0.5, 0.5}, {0.75, 0.25}, {0.25, 0.75}};
    double worst = 0;
    for (auto& row : expect) {
      const auto pt = seq.next();
      worst = std::max({worst, std::abs(pt[0] - row[0] - 0.5 / 4294967296.0),
                        std::abs(pt[1] - row[1] - 0.5 / 4294967296.0)});
    }
    res.assertThat("Sobol opening points", worst <= 1e-9,
                   fmt("max deviation %.2e", worst));
  }
  {  // Brownian endpoint second moment
    const Lattice lat(4, 0.25, 3);
    const double m = second_moment(brownian(lat), endpoint_functional(lat, 16));
    res.assertThat("Brownian endpoint moment", std::abs(m - 12.0) <= 1e-10,
                   fmt("E||B_4||^2 = %.12f", m));
  }
  {  // normal quantile pin
    const double q = normal_quantile(0.975);
    res.assertThat("normal quantile pin",
                   std::abs(q - 1.959963984540054) <= 1e-9,
                   fmt("q(0.975) = %.15f", q));
  }
  res.report["checks"] = static_cast<int>(res.report["assertions"].size());
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult run_subcommand(const std::string& name, const Config& cfg,
                                std::uint64_t seed) {
  if (name == "spectral") return run_spectral(cfg, seed);
  if (name == "recursion") return run_recursion(cfg, seed);
  if (name == "mcmc") return run_mcmc(cfg, seed);
  if (name == "gci") return run_gci(cfg, seed);
  if (name == "decompose") return run_decompose(cfg, seed);
  if (name == "oracle-check") return run_oracle_check(cfg, seed);
  throw std::invalid_argument("unknown subcommand: " + name);
}

nlohmann::json make_manifest(const std::string& subcommand, const Config& cfg,
                             std::uint64_t seed, double wallSeconds,
                             const std::vector<std::string>& cmdline) {
  nlohmann::json m;
  m["format"] = 1;
  m["subcommand"] = subcommand;
  m["seed"] = seed;
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  m["configHash"] = hash;
  m["resolvedConfig"] = nlohmann::json::object();
  for (const auto& [k, v] : cfg.entries()) m["resolvedConfig"][k] = v;
  m["gitDescribe"] = POLARON_GIT_DESCRIBE;
  m["wallTimeSeconds"] = wallSeconds;
  m["cmdline"] = cmdline;
  return m;
}

}  // namespace polaron
