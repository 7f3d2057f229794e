#pragma once

#include <vector>

namespace polaron {

// Piecewise-quadratic penalty ramp:
//   r in [0, 1]              : R^2                       (plateau)
//   r in [1, C1 R + 1]       : R^2 - (r-1)^2 / (2 C1^2)
//   r in [C1 R+1, 2 C1 R+1]  : (2 C1 R - r + 1)^2 / (2 C1^2)
//   r beyond                 : 0
// C^1 with piecewise-constant second derivative in {0, -1/C1^2, +1/C1^2};
// slope bounded by R / C1.
double sigma_tilde(double r, double R, double C1);
double sigma_tilde_d1(double r, double R, double C1);
double sigma_tilde_d2(double r, double R, double C1);

// Mollified profile sigma = sigma_tilde * bump(width), smooth in r. The
// second derivative is computed as the convolution of sigma_tilde'' with the
// bump (valid since sigma_tilde is C^1).
class SigmaProfile {
 public:
  SigmaProfile(double R, double C1);

  double R() const { return R_; }
  double C1() const { return C1_; }
  double width() const { return width_; }
  double supportEnd() const { return 2.0 * C1_ * R_ + 1.0 + width_; }

  double sigma(double r) const;
  double dsigma(double r) const;
  double d2sigma(double r) const;

 private:
  double R_;
  double C1_;
  double width_;
  double bumpNorm_;  // normalizer of the bump kernel
  std::vector<double> glNodes_, glWeights_;  // reference rule on [0, 1]

  double bump(double u) const;
  double convolve(double r, double (*f)(double, double, double)) const;
};

// Numerical verification of the profile contract on a grid:
// nonincreasing, R^2 plateau at 0, compact support, slope and curvature
// bounds. Violations beyond tolerance are counted, worst excess recorded.
struct ProfileCheck {
  bool nonIncreasing = false;
  bool plateauAtZero = false;
  bool compactSupport = false;
  bool slopeBounded = false;
  bool curvatureBounded = false;
  double worstSlopeExcess = 0.0;      // max(|sigma'| - R/C1, 0)
  double worstCurvatureExcess = 0.0;  // max(|sigma''| - 1/C1^2, 0)
  bool pass() const {
    return nonIncreasing && plateauAtZero && compactSupport && slopeBounded &&
           curvatureBounded;
  }
};

ProfileCheck check_profile(const SigmaProfile& p, int gridPoints = 2000);

}  // namespace polaron
