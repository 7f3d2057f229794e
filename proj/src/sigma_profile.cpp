#include "polaron/sigma_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polaron/quadrature.hpp"

namespace polaron {

double sigma_tilde(double r, double R, double C1) {
  double rr = std::abs(r);
  double b1 = 1.0, b2 = C1 * R + 1.0, b3 = 2.0 * C1 * R + 1.0;
  if (rr <= b1) return R * R;
  if (rr <= b2) return R * R - (rr - 1.0) * (rr - 1.0) / (2.0 * C1 * C1);
  if (rr <= b3) {
    double u = b3 - rr;
    return u * u / (2.0 * C1 * C1);
  }
  return 0.0;
}

double sigma_tilde_d1(double r, double R, double C1) {
  double rr = std::abs(r);
  double sign = (r < 0) ? -1.0 : 1.0;
  double b1 = 1.0, b2 = C1 * R + 1.0, b3 = 2.0 * C1 * R + 1.0;
  if (rr <= b1 || rr >= b3) return 0.0;
  if (rr <= b2) return sign * (-(rr - 1.0) / (C1 * C1));
  return sign * (-(b3 - rr) / (C1 * C1));
}

double sigma_tilde_d2(double r, double R, double C1) {
  double rr = std::abs(r);
  double b1 = 1.0, b2 = C1 * R + 1.0, b3 = 2.0 * C1 * R + 1.0;
  if (rr < b1 || rr > b3) return 0.0;
  if (rr < b2) return -1.0 / (C1 * C1);
  return 1.0 / (C1 * C1);
}

SigmaProfile::SigmaProfile(double R, double C1) : R_(R), C1_(C1) {
  if (!(R > 0) || !(C1 > 0))
    throw std::invalid_argument("SigmaProfile: R and C1 must be positive");
  width_ = std::min(1.0, C1) / 10.0;
  QuadRule rule = gauss_legendre(48, 0.0, 1.0);
  glNodes_.assign(rule.nodes.data(), rule.nodes.data() + rule.nodes.size());
  glWeights_.assign(rule.weights.data(),
                    rule.weights.data() + rule.weights.size());
  // Normalize the bump numerically over [-w, w].
  bumpNorm_ = 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < glNodes_.size(); ++i) {
    double u = -width_ + 2.0 * width_ * glNodes_[i];
    acc += 2.0 * width_ * glWeights_[i] * bump(u);
  }
  bumpNorm_ = 1.0 / acc;
}

double SigmaProfile::bump(double u) const {
  double z = u / width_;
  if (std::abs(z) >= 1.0) return 0.0;
  return bumpNorm_ * std::exp(-1.0 / (1.0 - z * z));
}

double SigmaProfile::convolve(double r, double (*f)(double, double, double)) const {
  // Integrate f(r - u) * bump(u) over [-w, w], splitting at points where
  // r - u crosses a breakpoint of the piecewise definition.
  double b3 = 2.0 * C1_ * R_ + 1.0;
  double breaks[] = {-b3, -(C1_ * R_ + 1.0), -1.0, 1.0, C1_ * R_ + 1.0, b3};
  std::vector<double> cuts{-width_, width_};
  for (double b : breaks) {
    double u = r - b;
    if (u > -width_ && u < width_) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double a = cuts[s], b = cuts[s + 1];
    if (!(b > a)) continue;
    for (std::size_t i = 0; i < glNodes_.size(); ++i) {
      double u = a + (b - a) * glNodes_[i];
      acc += (b - a) * glWeights_[i] * bump(u) * f(r - u, R_, C1_);
    }
  }
  return acc;
}

double SigmaProfile::sigma(double r) const {
  if (std::abs(r) >= supportEnd()) return 0.0;
  if (std::abs(r) + width_ <= 1.0) return R_ * R_;  // inside the plateau
  return convolve(r, &sigma_tilde);
}

double SigmaProfile::dsigma(double r) const {
  if (std::abs(r) >= supportEnd()) return 0.0;
  if (std::abs(r) + width_ <= 1.0) return 0.0;
  return convolve(r, &sigma_tilde_d1);
}

double SigmaProfile::d2sigma(double r) const {
  if (std::abs(r) >= supportEnd()) return 0.0;
  if (std::abs(r) + width_ <= 1.0) return 0.0;
  return convolve(r, &sigma_tilde_d2);
}

ProfileCheck check_profile(const SigmaProfile& p, int gridPoints) {
  ProfileCheck c;
  double end = p.supportEnd();
  double slopeBound = p.R() / p.C1();
  double curvBound = 1.0 / (p.C1() * p.C1());
  double tol = 1e-8 * std::max(1.0, p.R() * p.R());
  c.nonIncreasing = true;
  c.slopeBounded = true;
  c.curvatureBounded = true;
  double prev = p.sigma(0.0);
  for (int i = 1; i <= gridPoints; ++i) {
    double r = end * i / gridPoints;
    double v = p.sigma(r);
    if (v > prev + tol) c.nonIncreasing = false;
    prev = v;
    double sl = std::abs(p.dsigma(r));
    if (sl > slopeBound * (1 + 1e-9) + 1e-12)
      c.worstSlopeExcess = std::max(c.worstSlopeExcess, sl - slopeBound);
    double cv = std::abs(p.d2sigma(r));
    if (cv > curvBound * (1 + 1e-9) + 1e-12)
      c.worstCurvatureExcess = std::max(c.worstCurvatureExcess, cv - curvBound);
  }
  c.slopeBounded = c.worstSlopeExcess <= 1e-9 * slopeBound + 1e-12;
  c.curvatureBounded = c.worstCurvatureExcess <= 1e-9 * curvBound + 1e-12;
  c.plateauAtZero = std::abs(p.sigma(0.0) - p.R() * p.R()) <= tol;
  c.compactSupport = std::abs(p.sigma(end + 1e-9)) == 0.0 &&
                     std::abs(p.sigma(end * 1.5)) == 0.0;
  return c;
}

}  // namespace polaron
