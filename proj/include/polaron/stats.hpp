#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace polaron {

// Running mean/variance accumulator (Welford).
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased sample variance
  double stderror() const;  // sqrt(variance / n)

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Kahan-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeStderr = 0.0;
  double residualRms = 0.0;
};

// Ordinary least squares of ys against xs.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// OLS of log(ys) against log(xs); all inputs must be positive.
LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

// Batch-means variance of the mean for a correlated series: splits into
// `nBatches` equal batches and uses the variance of batch means.
// Returns (varianceOfMean, effectiveSampleSize).
std::pair<double, double> batch_means(const std::vector<double>& series,
                                      int nBatches = 32);

// Standard normal quantile (inverse CDF), accurate to ~1e-15 via a rational
// approximation refined with one Halley step on erfc. p must be in (0,1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace polaron
