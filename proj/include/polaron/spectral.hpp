#pragma once

#include <Eigen/Dense>

#include "polaron/lattice.hpp"

namespace polaron {

// Spectral description of the unit-window fluctuation confinement
//   density proportional to exp(-beta * Q), Q = int int ||B_t - B_s||^2,
// on [0, 1]. The white-noise kernel of Q is 2(min(u,v) - uv) after the
// substitution u -> 1-u, with eigenfunctions sqrt(2) sin(pi k t).

struct EigenPair {
  double lambda;  // 2 beta / (pi^2 k^2)
  int k;
};

EigenPair eigenpair(int k, double beta);

// Eigenfunction value sqrt(2) sin(pi k t).
double eigenfunction(int k, double t);

// Series coefficient of the covariance deficit along mode k:
// lam2 / (1 + lam2) with lam2 = 2 * lambda_k. The doubling is because each
// unordered pair (t, s) appears twice in the double integral, so the
// Gaussian precision is I + 2 beta Theta.
double deficit_coeff(int k, double beta);

// Var(B_t) under the confined measure on [0,1] per coordinate:
//   t - sum_k c_k * 2 (1 - cos(pi k t))^2 / (pi^2 k^2),
// truncated adaptively so the tail is below `tol`, summed smallest-first
// with compensated summation. beta = 0 returns t exactly.
double variance_series(double beta, double t, double tol = 1e-10);

// Cov(B_t, B_s) per coordinate under the same measure:
//   min(t,s) - sum_k c_k * 2 (1-cos(pi k t))(1-cos(pi k s)) / (pi^2 k^2).
double covariance_shepp(double beta, double t, double s, double tol = 1e-10);

// |partial_sum_{k<=K} (1-cos(pi k t))^2/(pi^2 k^2) - t/2| for t in [0,1].
double fourier_identity_check(double t, long K);

// Number of series terms the adaptive truncation uses.
long truncation_order(double beta, double tol);

// Independent finite-lattice oracle: exact Var(B_t) at grid time k*eta under
// the matrix-assembled confined measure on a [0,1] lattice (T=1).
double variance_matrix_oracle(const Lattice& lat, double beta, int k);

}  // namespace polaron
