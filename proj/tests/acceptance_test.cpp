// Acceptance suite: ten end-to-end criteria for the laboratory, each printed
// as a single PASS/FAIL line with its measured quantity, pinned tolerance,
// and wall time. Exit status 0 only when every criterion passes. Criteria
// with a pinned time budget also fail when the budget is exceeded.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polaron/config.hpp"
#include "polaron/experiment.hpp"
#include "polaron/forms.hpp"
#include "polaron/gaussian_measure.hpp"
#include "polaron/lattice.hpp"
#include "polaron/mixture.hpp"
#include "polaron/polaron_mcmc.hpp"
#include "polaron/rng.hpp"
#include "polaron/spectral.hpp"
#include "polaron/stats.hpp"

using namespace polaron;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 2026;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Confinement variance: analytic series vs exact lattice covariance.
// ---------------------------------------------------------------------------

Outcome series_vs_matrix() {
  const Lattice lat(1, 1.0 / 256, 3);
  double worst = 0;
  for (double beta : {2.0, 10.0, 100.0, 1000.0}) {
    const GaussianPathMeasure mu = tilde_measure(lat, beta, 0);
    for (int k = 1; k <= lat.n(); ++k) {
      const double s = variance_series(beta, lat.time(k));
      const double m = mu.functionalVariance(endpoint_functional(lat, k));
      worst = std::max(worst, std::abs(s - m));
    }
  }
  return {worst <= 5e-3,
          fmt("max|series-matrix| %.3e <= 5e-3 at eta=1/256, all grid times",
              worst)};
}

// ---------------------------------------------------------------------------
// 2. Fourier partial-sum identity sum_k (1-cos(pi k t))^2/(pi k)^2 -> t/2.
// ---------------------------------------------------------------------------

Outcome fourier_partial_sums() {
  double worst = 0;
  for (int i = 1; i <= 10; ++i)
    worst = std::max(worst, fourier_identity_check(0.1 * i, 1000000L));
  return {worst <= 2e-6,
          fmt("max partial-sum error %.3e <= 2e-6 at K=1e6, t=0.1..1.0", worst)};
}

// ---------------------------------------------------------------------------
// 3. Variance scaling band: sup_t Var(B_t) * sqrt(beta) within a factor 4.
// ---------------------------------------------------------------------------

Outcome variance_band() {
  double lo = 1e300, hi = 0;
  for (int j = 0; j <= 25; ++j) {
    const double beta = std::pow(10.0, 1.0 + j / 5.0);
    double sup = 0;
    for (int k = 1; k <= 512; ++k)
      sup = std::max(sup, variance_series(beta, k / 512.0));
    const double v = sup * std::sqrt(beta);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {hi / lo <= 4.0,
          fmt("sup_t Var * sqrt(beta) in [%.4f, %.4f], band %.4f <= 4 over "
              "beta in [10, 1e6]",
              lo, hi, hi / lo)};
}

// ---------------------------------------------------------------------------
// 4. Window-moment exponents under the fully confined measure at eta=1/64:
//    dominant terms decay like 1/beta and grow linearly in the horizon s.
// ---------------------------------------------------------------------------

LinearFunctional window_mean_difference(const Lattice& lat, int i, int j) {
  LinearFunctional diff = riemann_average(lat, i);
  diff.coefficients -= riemann_average(lat, j).coefficients;
  return diff;
}

Outcome window_moment_exponents() {
  const double eta = 1.0 / 64;
  std::vector<std::string> fits;
  double worstDev = 0;
  auto record = [&](const char* name, double slope, double target) {
    worstDev = std::max(worstDev, std::abs(slope - target));
    fits.push_back(fmt("%s %.3f", name, slope));
  };

  // Two-window horizon: adjacent mean difference vs beta.
  {
    std::vector<double> bs, es;
    const Lattice lat(2, eta, 3);
    for (double beta : {64.0, 128.0, 256.0, 512.0, 1024.0}) {
      const GaussianPathMeasure mu = confined_measure(lat, beta, {0, 1}, {0});
      bs.push_back(beta);
      es.push_back(second_moment(mu, window_mean_difference(lat, 0, 1)));
    }
    record("adjacent/beta", fit_loglog(bs, es).slope, -1.0);
  }

  // Long horizons s in {2,4,8,16}: first-vs-last window mean difference and
  // endpoint second moment. Consecutive differences isolate the linear term.
  const std::vector<double> betas{100.0, 1000.0, 10000.0};
  const std::vector<int> ss{2, 4, 8, 16};
  std::vector<std::vector<double>> inter(betas.size()), endm(betas.size());
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    for (int s : ss) {
      const Lattice lat(s, eta, 3);
      const GaussianPathMeasure mu = confined_measure_full(lat, betas[bi]);
      inter[bi].push_back(
          second_moment(mu, window_mean_difference(lat, 0, s - 1)));
      endm[bi].push_back(second_moment(mu, endpoint_functional(lat, lat.n())));
    }
  }
  const std::vector<double> sHalf{2.0, 4.0, 8.0};
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    std::vector<double> dInter, dEnd;
    for (int k = 0; k < 3; ++k) {
      dInter.push_back(inter[bi][k + 1] - inter[bi][k]);
      dEnd.push_back(endm[bi][k + 1] - endm[bi][k]);
    }
    record(fmt("windows/s@beta=%g", betas[bi]).c_str(),
           fit_loglog(sHalf, dInter).slope, 1.0);
    record(fmt("endpoint/s@beta=%g", betas[bi]).c_str(),
           fit_loglog(sHalf, dEnd).slope, 1.0);
  }
  std::vector<double> fInter, fEnd;
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    fInter.push_back(inter[bi][3] - inter[bi][0]);
    fEnd.push_back(endm[bi][3] - endm[bi][0]);
  }
  record("windows/beta", fit_loglog(betas, fInter).slope, -1.0);
  record("endpoint/beta", fit_loglog(betas, fEnd).slope, -1.0);

  std::string all;
  for (const auto& f : fits) all += (all.empty() ? "" : ", ") + f;
  return {worstDev <= 0.1,
          fmt("max exponent deviation %.4f <= 0.1 over 9 fits (%s)", worstDev,
              all.c_str())};
}

// ---------------------------------------------------------------------------
// 5. Confinement recursion: fixed-point slope and iteration cap.
// ---------------------------------------------------------------------------

Outcome recursion_scaling() {
  const ExperimentResult r = run_recursion(Config{}, kSeed);
  double worstDev = 0;
  for (const auto& jp : r.report.at("perP"))
    worstDev = std::max(worstDev,
                        std::abs(jp.at("slope").get<double>() -
                                 jp.at("slopeTarget").get<double>()));
  return {r.pass, fmt("slopes within 0.15 of 4/(2-p) for p in {0.5,1,1.5} "
                      "(max dev %.4f), stop caps hold",
                      worstDev)};
}

// ---------------------------------------------------------------------------
// 6. Randomized correlation-inequality suite: 1000 pair/triple cases.
// ---------------------------------------------------------------------------

Outcome correlation_inequality_suite() {
  Config cfg;
  cfg.set("gci.cases", "1000");
  cfg.set("gci.samplesPerCase", "100000");
  const ExperimentResult r = run_gci(cfg, kSeed);
  return {r.pass,
          fmt("%ld pass / %ld tie / %ld fail out of 1000 cases; pooled "
              "equality-control margin %.2e (3-sigma band 3 x %.2e)",
              r.report.at("pass").get<long>(), r.report.at("tie").get<long>(),
              r.report.at("fail").get<long>(),
              r.report.at("controlPooledMargin").get<double>(),
              r.report.at("controlPooledStderr").get<double>())};
}

// ---------------------------------------------------------------------------
// 7. Good/bad decomposition suite with log-concavity and negative control.
// ---------------------------------------------------------------------------

Outcome decomposition_suite() {
  const ExperimentResult r = run_decompose(Config{}, kSeed);
  long nOk = 0, nAll = 0;
  for (const auto& a : r.report.at("assertions")) {
    ++nAll;
    if (a.at("pass").get<bool>()) ++nOk;
  }
  return {r.pass, fmt("%ld/%ld checks passed: delta <= 1e-3, delta' <= delta, "
                      "clean support and log-concavity, control detected",
                      nOk, nAll)};
}

// ---------------------------------------------------------------------------
// 8. Path-sampler moments: free case exact, interaction confines.
// ---------------------------------------------------------------------------

Outcome sampler_moments() {
  Config cfg;
  cfg.set("mcmc.steps", "40000");
  cfg.set("mcmc.minEss", "1000");
  const ExperimentResult r = run_mcmc(cfg, kSeed);
  double freeEss = 0, freeMean = 0;
  for (const auto& jr : r.report.at("runs")) {
    if (jr.at("alpha").get<double>() == 0.0) {
      freeEss = jr.at("ess").get<double>();
      freeMean = jr.at("meanB2").get<double>();
    }
  }
  return {r.pass, fmt("free case E||B_4||^2 = %.3f (target 12, 3-sigma), "
                      "ESS %.0f >= 1000; moments dominated and confinement "
                      "fractions >= free baseline for alpha in {0.5,1,2}",
                      freeMean, freeEss)};
}

// ---------------------------------------------------------------------------
// 9. Mixture algebra: reweight/coarsen commutation on randomized mixtures,
//    and the 2^T product decomposition against direct per-factor expectations.
// ---------------------------------------------------------------------------

MixtureComponent scaled_gaussian(double weight, double s, std::string id) {
  return {weight, std::move(id), [s](const Eigen::VectorXd& x) {
            const double v = x(0);
            return (1.0 / s) * std::exp(-v * v / (2 * s * s) + v * v / 2);
          }};
}

Outcome mixture_commutation() {
  // Part 1: randomized commutation at 1e-10.
  auto rng = make_rng(derive_seed(kSeed, 41));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ComponentEstimator est = gauss_hermite_estimator({1.0}, 40, 1.8);
  const Functional f = [](const Eigen::VectorXd& x) {
    return 0.3 + x(0) * x(0);
  };
  double worstCommute = 0;
  for (int c = 0; c < 100; ++c) {
    const int k = 2 + static_cast<int>(unif(rng) * 4.0);
    MixtureDecomposition d;
    double totW = 0;
    for (int j = 0; j < k; ++j) {
      const double w = 0.1 + unif(rng);
      d.components.push_back(
          scaled_gaussian(w, 0.6 + 0.8 * unif(rng), fmt("c%d", j)));
      totW += w;
    }
    for (auto& comp : d.components) comp.weight /= totW;

    const int groups = 1 + static_cast<int>(unif(rng) * k);
    std::vector<std::vector<int>> partition(groups);
    for (int j = 0; j < k; ++j)
      partition[static_cast<int>(unif(rng) * groups)].push_back(j);
    partition.erase(std::remove_if(partition.begin(), partition.end(),
                                   [](const std::vector<int>& g) {
                                     return g.empty();
                                   }),
                    partition.end());

    const MixtureDecomposition a = coarsen(mixture_reweight(d, f, est), partition);
    const MixtureDecomposition b = mixture_reweight(coarsen(d, partition), f, est);
    if (a.components.size() != b.components.size())
      return {false, "commutation changed the component count"};
    for (std::size_t j = 0; j < a.components.size(); ++j) {
      worstCommute = std::max(worstCommute, std::abs(a.components[j].weight -
                                                     b.components[j].weight));
      for (double v : {-1.3, 0.0, 0.4, 2.2}) {
        Eigen::VectorXd x(1);
        x << v;
        const double da = a.components[j].density(x);
        const double db = b.components[j].density(x);
        worstCommute =
            std::max(worstCommute, std::abs(da - db) / std::max(1.0, db));
      }
    }
  }
  if (worstCommute > 1e-10)
    return {false, fmt("commutation deviation %.3e > 1e-10", worstCommute)};

  // Part 2: per-increment good/bad split of the base measure; reweighting the
  // 2^T product mixture must match direct per-component expectations, and the
  // mixture must stay an exact decomposition (weights resum to one, component
  // expectations resum to the base expectation).
  const double R = 1.5;
  const double pGood = normal_cdf(R) - normal_cdf(-R);
  double worstWeight = 0, worstClosure = 0;
  const std::vector<int> horizons{2, 4, 6};
  const std::vector<int> nodesPer{20, 12, 8};
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const int T = horizons[h];
    PolaronConfig pc;
    pc.alpha = 0.5;
    pc.T = T;
    pc.eta = 1.0;
    pc.A = 2.0;
    pc.p = 1.0;
    const Functional tilt = [pc](const Eigen::VectorXd& x) {
      const Eigen::MatrixXd inc = x;
      return std::exp(pc.alpha * interaction_energy(inc, pc));
    };

    MixtureDecomposition factor;
    factor.components.push_back({pGood, "g", [R, pGood](const Eigen::VectorXd& x) {
                                   return std::abs(x(0)) <= R ? 1.0 / pGood : 0.0;
                                 }});
    factor.components.push_back({1.0 - pGood, "b",
                                 [R, pGood](const Eigen::VectorXd& x) {
                                   return std::abs(x(0)) > R ? 1.0 / (1.0 - pGood)
                                                             : 0.0;
                                 }});
    const std::vector<MixtureDecomposition> factors(T, factor);
    const std::vector<int> dims(T, 1);
    const std::vector<double> sds(T, 1.0);

    const MixtureDecomposition prod = product_mixture(factors, dims);
    const MixtureDecomposition routeA = mixture_reweight(
        prod, tilt, gauss_hermite_estimator(sds, nodesPer[h], 1.0));

    const ProductExpectations pe =
        product_expectations(factors, dims, sds, nodesPer[h], tilt);
    double total = 0;
    for (std::size_t g = 0; g < prod.components.size(); ++g)
      total += prod.components[g].weight * pe.component[g];
    double sumW = 0;
    for (std::size_t g = 0; g < prod.components.size(); ++g) {
      const double direct = prod.components[g].weight * pe.component[g] / total;
      worstWeight =
          std::max(worstWeight, std::abs(routeA.components[g].weight - direct));
      sumW += routeA.components[g].weight;
    }
    worstClosure = std::max(worstClosure, std::abs(sumW - 1.0));
    worstClosure =
        std::max(worstClosure, std::abs(total - pe.base) / std::abs(pe.base));
  }
  const bool ok = worstWeight <= 1e-8 && worstClosure <= 1e-10;
  return {ok, fmt("commutation dev %.2e <= 1e-10 (100 cases); product weights "
                  "dev %.2e <= 1e-8, closure dev %.2e <= 1e-10 (T=2,4,6)",
                  worstCommute, worstWeight, worstClosure)};
}

// ---------------------------------------------------------------------------
// 10. Manifest rerun reproduces every CSV byte.
// ---------------------------------------------------------------------------

int run_driver(const std::string& argsTail) {
  const std::string cmd =
      std::string(POLARON_LAB_BIN) + " " + argsTail + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome manifest_rerun() {
  const fs::path base = fs::temp_directory_path() / "polaron-acceptance";
  fs::remove_all(base);
  std::vector<std::pair<std::string, std::vector<std::string>>> jobs = {
      {"spectral --seed 4242 --override spectral.eta=1/128", {"spectral.csv"}},
      {"mcmc --seed 4242 --override mcmc.steps=1500 --override mcmc.chains=2",
       {"mcmc.csv", "mcmc_oscillation.csv"}},
  };
  int checked = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const fs::path a = base / fmt("run%zu", j), b = base / fmt("rerun%zu", j);
    if (run_driver(jobs[j].first + " --out " + a.string()) != 0)
      return {false, "driver run failed: " + jobs[j].first};
    if (run_driver("rerun --manifest " + (a / "manifest.json").string() +
                   " --out " + b.string()) != 0)
      return {false, "manifest rerun failed: " + jobs[j].first};
    for (const auto& name : jobs[j].second) {
      const std::string bytesA = slurp(a / name), bytesB = slurp(b / name);
      if (bytesA.empty() || bytesA != bytesB)
        return {false, name + " not reproduced bitwise"};
      ++checked;
    }
  }
  return {true, fmt("%d CSV files byte-identical across manifest reruns "
                    "(spectral + mcmc)",
                    checked)};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double budgetSeconds;  // 0 = no pinned budget
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> entries = {
      {"series vs lattice covariance", 30, series_vs_matrix},
      {"Fourier partial-sum identity", 5, fourier_partial_sums},
      {"variance scaling band", 0, variance_band},
      {"window-moment exponents", 120, window_moment_exponents},
      {"recursion fixed-point scaling", 1, recursion_scaling},
      {"correlation-inequality suite", 300, correlation_inequality_suite},
      {"good/bad decomposition suite", 180, decomposition_suite},
      {"path-sampler moments", 600, sampler_moments},
      {"mixture commutation and product closure", 0, mixture_commutation},
      {"manifest rerun reproducibility", 0, manifest_rerun},
  };

  std::printf("acceptance suite: %zu criteria, master seed %llu\n",
              entries.size(), static_cast<unsigned long long>(kSeed));
  bool all = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entries[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool inBudget =
        entries[i].budgetSeconds <= 0 || secs <= entries[i].budgetSeconds;
    const bool pass = o.pass && inBudget;
    all = all && pass;
    std::printf("[%s] %2zu/%zu %s — %s%s (%.1fs)\n", pass ? "PASS" : "FAIL",
                i + 1, entries.size(), entries[i].name, o.detail.c_str(),
                inBudget ? ""
                         : fmt(" [exceeded %gs budget]",
                               entries[i].budgetSeconds)
                               .c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ACCEPTANCE: PASS (10/10)"
                          : "ACCEPTANCE: FAIL — see lines above");
  return all ? 0 : 1;
}
