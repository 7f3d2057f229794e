#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polaron/lattice.hpp"

namespace polaron {

class ConvexBody;

// Closed Euclidean ball of given radius centered at the origin.
struct Ball {
  double radius;
};

// Symmetric slab |<normal, x>| <= halfWidth; the normal is unit length
// (normalized at construction).
struct Slab {
  Eigen::VectorXd normal;
  double halfWidth;
};

// Paths over a window of `points` grid values in R^d whose pairwise value
// differences all stay within R:  max_{j,l} ||p_j - p_l|| <= R.
// Ambient vectors are the column-major flattening of the (points x d) value
// matrix.
struct OscillationSet {
  int points;
  int d;
  double R;
};

// Intersection of finitely many bodies over the same ambient space.
struct Intersection {
  std::vector<ConvexBody> parts;
};

// Origin-symmetric convex body with membership, Euclidean distance, and
// projection. Distances/projections for OscillationSet and Intersection use
// Dykstra's alternating-projection scheme and are accurate to `tol`.
class ConvexBody {
 public:
  /* implicit */ ConvexBody(Ball b);
  /* implicit */ ConvexBody(Slab s);
  /* implicit */ ConvexBody(OscillationSet o);
  /* implicit */ ConvexBody(Intersection i);

  bool contains(const Eigen::VectorXd& x) const;
  double distance(const Eigen::VectorXd& x, double tol = 1e-10) const;
  Eigen::VectorXd project(const Eigen::VectorXd& x, double tol = 1e-10) const;

  // Membership of a lattice path given as increments (n x d). Ball and Slab
  // act on the column-major flattening of the increments; OscillationSet
  // acts on the window of grid values starting at value index `windowStart`.
  bool containsPath(const Lattice& lat, const Eigen::MatrixXd& increments,
                    int windowStart = 0) const;

  std::string describe() const;

  const std::variant<Ball, Slab, OscillationSet, Intersection>& node() const {
    return node_;
  }

 private:
  std::variant<Ball, Slab, OscillationSet, Intersection> node_;
};

ConvexBody make_ball(double radius);
ConvexBody make_slab(Eigen::VectorXd normal, double halfWidth);
// Axis-aligned box as an intersection of coordinate slabs.
ConvexBody make_box(const Eigen::VectorXd& halfWidths);
ConvexBody make_oscillation(int points, int d, double R);
ConvexBody make_intersection(std::vector<ConvexBody> parts);

// Column-major flattening used by the path adapters.
Eigen::VectorXd flatten(const Eigen::MatrixXd& m);

}  // namespace polaron
