#include "polaron/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace polaron {

void RunningStats::add(double x) {
  ++n_;
  double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::stderror() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_));
}

void CompensatedSum::add(double x) {
  double y = x - c_;
  double t = sum_ + y;
  c_ = (t - sum_) - y;
  sum_ = t;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points, equal lengths");
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: degenerate xs");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ssr += r * r;
  }
  f.residualRms = std::sqrt(ssr / n);
  if (n > 2) f.slopeStderr = std::sqrt(ssr / (n - 2) / sxx);
  return f;
}

LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0))
      throw std::invalid_argument("fit_loglog: inputs must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  return fit_line(lx, ly);
}

std::pair<double, double> batch_means(const std::vector<double>& series,
                                      int nBatches) {
  const std::size_t n = series.size();
  if (nBatches < 2 || n < static_cast<std::size_t>(2 * nBatches))
    throw std::invalid_argument("batch_means: series too short");
  const std::size_t b = n / nBatches;  // drop remainder
  RunningStats batchStats;
  for (int k = 0; k < nBatches; ++k) {
    double m = 0;
    for (std::size_t i = k * b; i < (k + 1) * b; ++i) m += series[i];
    batchStats.add(m / static_cast<double>(b));
  }
  double varOfMean = batchStats.variance() / nBatches;
  RunningStats all;
  for (std::size_t i = 0; i < b * static_cast<std::size_t>(nBatches); ++i)
    all.add(series[i]);
  double ess = (varOfMean > 0) ? all.variance() / varOfMean
                               : static_cast<double>(n);
  return {varOfMean, ess};
}

namespace {

// Acklam's rational approximation to the standard normal quantile.
double acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - plow) return -acklam(1 - p);
  double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("normal_quantile: p must be in (0,1)");
  double x = acklam(p);
  // One Halley step against the exact CDF.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  x = x - u / (1 + x * u / 2);
  return x;
}

}  // namespace polaron
