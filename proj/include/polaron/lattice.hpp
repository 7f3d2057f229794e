#pragma once

#include <Eigen/Dense>

namespace polaron {

// Uniform time lattice on [0, T] with mesh eta = 1/m for an integer m >= 1.
//
// Canonical coordinates everywhere are the n = T*m Brownian increments
// Delta_j = B_{(j+1)eta} - B_{j eta}, stored per spatial coordinate; the d
// spatial coordinates are i.i.d. under every measure in scope, so matrices
// are n x n (never dn x dn). Path values are recovered through the path map
// (the lower-triangular all-ones matrix), with B_0 = 0.
class Lattice {
 public:
  Lattice(int T, double eta, int d = 3);

  int T() const { return T_; }
  double eta() const { return 1.0 / m_; }
  int m() const { return m_; }  // grid points per unit interval, 1/eta
  int d() const { return d_; }
  int n() const { return T_ * m_; }        // number of increments
  int gridPoints() const { return n() + 1; }  // values, including t=0 and t=T
  double time(int k) const { return static_cast<double>(k) / m_; }
  // First value-grid index of unit interval i (intervals are [i, i+1]).
  int gridBegin(int i) const { return i * m_; }

  bool operator==(const Lattice& o) const {
    return T_ == o.T_ && m_ == o.m_ && d_ == o.d_;
  }

  // Path map V: (n+1) x n, V_{k,r} = 1 for r < k; values = V * increments.
  Eigen::MatrixXd pathMap() const;

  // Positions (gridPoints x d) from increments (n x d), origin at 0.
  Eigen::MatrixXd positions(const Eigen::MatrixXd& increments) const;

 private:
  int T_;
  int m_;
  int d_;
};

// A quadratic form on paths, stored in increment coordinates, per spatial
// coordinate. The form of a path X (n x d increments) is
// sum_coords x_c^T matrix x_c.
struct QuadraticForm {
  Eigen::MatrixXd matrix;
  bool shiftInvariant = false;

  // Value of the form on an increment configuration (n x d).
  double operator()(const Eigen::MatrixXd& increments) const;
};

// Symmetrize and wrap a matrix; checks shift invariance structurally when
// a value-space origin is known (see forms.cpp assembly).
QuadraticForm make_form(const Eigen::MatrixXd& m, bool shiftInvariant);

// Conjugate a value-space form S ((n+1) x (n+1), acting on grid values with
// B_0 included) down to increment coordinates: M = V^T S V.
// Shift invariance of the result corresponds to S * ones == 0.
QuadraticForm conjugate_to_increments(const Lattice& lat,
                                      const Eigen::MatrixXd& valueForm);

// A linear functional on paths, per spatial coordinate, in increment
// coordinates: a(X)_c = coefficients . x_c.
struct LinearFunctional {
  Eigen::VectorXd coefficients;

  Eigen::VectorXd operator()(const Eigen::MatrixXd& increments) const;
};

}  // namespace polaron
