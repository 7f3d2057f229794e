#include "polaron/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "polaron/forms.hpp"
#include "polaron/stats.hpp"

namespace polaron {

EigenPair eigenpair(int k, double beta) {
  if (k < 1) throw std::invalid_argument("eigenpair: k must be >= 1");
  if (!(beta >= 0)) throw std::invalid_argument("eigenpair: beta must be >= 0");
  return {2.0 * beta / (M_PI * M_PI * k * k), k};
}

double eigenfunction(int k, double t) {
  return std::sqrt(2.0) * std::sin(M_PI * k * t);
}

double deficit_coeff(int k, double beta) {
  double lam2 = 2.0 * eigenpair(k, beta).lambda;
  return lam2 / (1.0 + lam2);
}

long truncation_order(double beta, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("truncation_order: tol must be > 0");
  if (beta == 0) return 0;
  // Tail bound: term_k <= 32 beta / (pi^4 k^4), so the tail beyond K is below
  // 32 beta / (3 pi^4 K^3).
  double k0 = std::sqrt(4.0 * beta) / M_PI;
  double kTol = std::cbrt(32.0 * beta / (3.0 * std::pow(M_PI, 4) * tol));
  long K = static_cast<long>(std::ceil(std::max({8.0, k0, kTol})));
  return K;
}

double variance_series(double beta, double t, double tol) {
  if (!(beta >= 0)) throw std::invalid_argument("variance_series: beta must be >= 0");
  if (t < 0 || t > 1)
    throw std::invalid_argument("variance_series: t must be in [0,1]");
  if (beta == 0) return t;
  long K = truncation_order(beta, tol);
  CompensatedSum sum;
  for (long k = K; k >= 1; --k) {  // smallest terms first
    double oc = 1.0 - std::cos(M_PI * k * t);
    double term = deficit_coeff(static_cast<int>(k), beta) * 2.0 * oc * oc /
                  (M_PI * M_PI * k * k);
    sum.add(term);
  }
  return t - sum.value();
}

double covariance_shepp(double beta, double t, double s, double tol) {
  if (!(beta >= 0)) throw std::invalid_argument("covariance_shepp: beta must be >= 0");
  if (t < 0 || t > 1 || s < 0 || s > 1)
    throw std::invalid_argument("covariance_shepp: times must be in [0,1]");
  if (beta == 0) return std::min(t, s);
  long K = truncation_order(beta, tol);
  CompensatedSum sum;
  for (long k = K; k >= 1; --k) {
    double oct = 1.0 - std::cos(M_PI * k * t);
    double ocs = 1.0 - std::cos(M_PI * k * s);
    double term = deficit_coeff(static_cast<int>(k), beta) * 2.0 * oct * ocs /
                  (M_PI * M_PI * k * k);
    sum.add(term);
  }
  return std::min(t, s) - sum.value();
}

double fourier_identity_check(double t, long K) {
  if (t < 0 || t > 1)
    throw std::invalid_argument("fourier_identity_check: t must be in [0,1]");
  CompensatedSum sum;
  for (long k = K; k >= 1; --k) {
    double oc = 1.0 - std::cos(M_PI * k * t);
    sum.add(oc * oc / (M_PI * M_PI * k * k));
  }
  return std::abs(sum.value() - t / 2.0);
}

double variance_matrix_oracle(const Lattice& lat, double beta, int k) {
  if (lat.T() != 1)
    throw std::invalid_argument("variance_matrix_oracle: lattice must span [0,1]");
  GaussianPathMeasure mu = tilde_measure(lat, beta, 0);
  return mu.functionalVariance(endpoint_functional(lat, k));
}

}  // namespace polaron
