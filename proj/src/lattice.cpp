#include "polaron/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace polaron {

Lattice::Lattice(int T, double eta, int d) : T_(T), d_(d) {
  if (T < 1) throw std::invalid_argument("Lattice: T must be a positive integer");
  if (d < 1) throw std::invalid_argument("Lattice: d must be >= 1");
  if (!(eta > 0) || eta > 1)
    throw std::invalid_argument("Lattice: eta must be in (0, 1]");
  double minv = 1.0 / eta;
  m_ = static_cast<int>(std::lround(minv));
  if (std::abs(minv - m_) > 1e-9 * minv)
    throw std::invalid_argument("Lattice: 1/eta must be an integer");
}

Eigen::MatrixXd Lattice::pathMap() const {
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(gridPoints(), n());
  for (int k = 1; k < gridPoints(); ++k)
    for (int r = 0; r < k; ++r) V(k, r) = 1.0;
  return V;
}

Eigen::MatrixXd Lattice::positions(const Eigen::MatrixXd& increments) const {
  if (increments.rows() != n())
    throw std::invalid_argument("positions: increment count mismatch");
  Eigen::MatrixXd pos(gridPoints(), increments.cols());
  pos.row(0).setZero();
  for (int k = 1; k < gridPoints(); ++k)
    pos.row(k) = pos.row(k - 1) + increments.row(k - 1);
  return pos;
}

double QuadraticForm::operator()(const Eigen::MatrixXd& increments) const {
  if (increments.rows() != matrix.rows())
    throw std::invalid_argument("QuadraticForm: dimension mismatch");
  double total = 0.0;
  for (int c = 0; c < increments.cols(); ++c)
    total += increments.col(c).dot(matrix * increments.col(c));
  return total;
}

QuadraticForm make_form(const Eigen::MatrixXd& m, bool shiftInvariant) {
  QuadraticForm q;
  q.matrix = 0.5 * (m + m.transpose());
  q.shiftInvariant = shiftInvariant;
  return q;
}

QuadraticForm conjugate_to_increments(const Lattice& lat,
                                      const Eigen::MatrixXd& valueForm) {
  if (valueForm.rows() != lat.gridPoints() ||
      valueForm.cols() != lat.gridPoints())
    throw std::invalid_argument("conjugate_to_increments: size mismatch");
  Eigen::MatrixXd V = lat.pathMap();
  Eigen::MatrixXd M = V.transpose() * valueForm * V;
  bool shiftInv =
      (valueForm * Eigen::VectorXd::Ones(valueForm.rows())).norm() <
      1e-10 * (1.0 + valueForm.norm());
  return make_form(M, shiftInv);
}

Eigen::VectorXd LinearFunctional::operator()(
    const Eigen::MatrixXd& increments) const {
  if (increments.rows() != coefficients.size())
    throw std::invalid_argument("LinearFunctional: dimension mismatch");
  return increments.transpose() * coefficients;
}

}  // namespace polaron
