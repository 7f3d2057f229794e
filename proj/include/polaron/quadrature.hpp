#pragma once

#include <Eigen/Dense>

namespace polaron {

struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Gauss-Legendre rule with n nodes on [a, b]; exact for polynomials of
// degree <= 2n - 1. Nodes/weights via Golub-Welsch.
QuadRule gauss_legendre(int n, double a, double b);

// Probabilists' Gauss-Hermite rule with n nodes: integrates against the
// standard normal density, weights sum to 1; exact for polynomial moments
// of degree <= 2n - 1.
QuadRule gauss_hermite(int n);

}  // namespace polaron
