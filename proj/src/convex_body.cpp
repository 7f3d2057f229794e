#include "polaron/convex_body.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace polaron {

namespace {

bool ball_contains(const Ball& b, const Eigen::VectorXd& x) {
  return x.norm() <= b.radius;
}

Eigen::VectorXd ball_project(const Ball& b, const Eigen::VectorXd& x) {
  double n = x.norm();
  if (n <= b.radius) return x;
  return x * (b.radius / n);
}

bool slab_contains(const Slab& s, const Eigen::VectorXd& x) {
  return std::abs(s.normal.dot(x)) <= s.halfWidth;
}

Eigen::VectorXd slab_project(const Slab& s, const Eigen::VectorXd& x) {
  double t = s.normal.dot(x);
  if (std::abs(t) <= s.halfWidth) return x;
  double shift = t - (t > 0 ? s.halfWidth : -s.halfWidth);
  return x - shift * s.normal;
}

bool osc_contains(const OscillationSet& o, const Eigen::VectorXd& x) {
  Eigen::Map<const Eigen::MatrixXd> p(x.data(), o.points, o.d);
  for (int j = 0; j < o.points; ++j)
    for (int l = j + 1; l < o.points; ++l)
      if ((p.row(j) - p.row(l)).norm() > o.R) return false;
  return true;
}

// Project the pair (row j, row l) onto {||p_j - p_l|| <= R} by moving both
// endpoints symmetrically along their difference.
void pair_project(Eigen::MatrixXd& p, int j, int l, double R) {
  Eigen::RowVectorXd diff = p.row(j) - p.row(l);
  double r = diff.norm();
  if (r <= R) return;
  Eigen::RowVectorXd u = diff / r;
  double half = 0.5 * (r - R);
  p.row(j) -= half * u;
  p.row(l) += half * u;
}

// Dykstra's algorithm over the pairwise oscillation constraints.
Eigen::VectorXd osc_project(const OscillationSet& o, const Eigen::VectorXd& x,
                            double tol) {
  const int nc = o.points * (o.points - 1) / 2;
  Eigen::MatrixXd p = Eigen::Map<const Eigen::MatrixXd>(x.data(), o.points, o.d);
  std::vector<Eigen::MatrixXd> corr(nc,
                                    Eigen::MatrixXd::Zero(o.points, o.d));
  for (int sweep = 0; sweep < 10000; ++sweep) {
    double moved = 0;
    int c = 0;
    for (int j = 0; j < o.points; ++j) {
      for (int l = j + 1; l < o.points; ++l, ++c) {
        Eigen::MatrixXd y = p + corr[c];
        Eigen::MatrixXd before = y;
        pair_project(y, j, l, o.R);
        corr[c] = before - y;  // new correction for this constraint
        moved += (y - p).norm();
        p = y;
      }
    }
    if (moved < tol) break;
  }
  return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
}

}  // namespace

ConvexBody::ConvexBody(Ball b) : node_(std::move(b)) {
  if (!(std::get<Ball>(node_).radius > 0))
    throw std::invalid_argument("Ball: radius must be positive");
}

ConvexBody::ConvexBody(Slab s) : node_(std::move(s)) {
  Slab& slab = std::get<Slab>(node_);
  double n = slab.normal.norm();
  if (!(n > 0) || !(slab.halfWidth > 0))
    throw std::invalid_argument("Slab: need nonzero normal, positive width");
  slab.normal /= n;
}

ConvexBody::ConvexBody(OscillationSet o) : node_(std::move(o)) {
  const OscillationSet& v = std::get<OscillationSet>(node_);
  if (v.points < 2 || v.d < 1 || !(v.R > 0))
    throw std::invalid_argument("OscillationSet: need >= 2 points, R > 0");
}

ConvexBody::ConvexBody(Intersection i) : node_(std::move(i)) {
  if (std::get<Intersection>(node_).parts.empty())
    throw std::invalid_argument("Intersection: needs at least one part");
}

bool ConvexBody::contains(const Eigen::VectorXd& x) const {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) return ball_contains(v, x);
        else if constexpr (std::is_same_v<T, Slab>) return slab_contains(v, x);
        else if constexpr (std::is_same_v<T, OscillationSet>)
          return osc_contains(v, x);
        else {
          for (const auto& part : v.parts)
            if (!part.contains(x)) return false;
          return true;
        }
      },
      node_);
}

Eigen::VectorXd ConvexBody::project(const Eigen::VectorXd& x, double tol) const {
  return std::visit(
      [&](const auto& v) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) return ball_project(v, x);
        else if constexpr (std::is_same_v<T, Slab>) return slab_project(v, x);
        else if constexpr (std::is_same_v<T, OscillationSet>)
          return osc_project(v, x, tol);
        else {
          // Dykstra over the parts; each part's projection may itself be
          // iterative, which only loosens the inner tolerance.
          const auto& parts = v.parts;
          Eigen::VectorXd p = x;
          std::vector<Eigen::VectorXd> corr(
              parts.size(), Eigen::VectorXd::Zero(x.size()));
          for (int sweep = 0; sweep < 10000; ++sweep) {
            double moved = 0;
            for (std::size_t c = 0; c < parts.size(); ++c) {
              Eigen::VectorXd y = parts[c].project(p + corr[c], tol);
              corr[c] = (p + corr[c]) - y;
              moved += (y - p).norm();
              p = y;
            }
            if (moved < tol) break;
          }
          return p;
        }
      },
      node_);
}

double ConvexBody::distance(const Eigen::VectorXd& x, double tol) const {
  if (contains(x)) return 0.0;
  return (x - project(x, tol)).norm();
}

bool ConvexBody::containsPath(const Lattice& lat,
                              const Eigen::MatrixXd& increments,
                              int windowStart) const {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, OscillationSet>) {
          if (windowStart + v.points > lat.gridPoints())
            throw std::invalid_argument("containsPath: window out of range");
          if (v.d != static_cast<int>(increments.cols()))
            throw std::invalid_argument("containsPath: dimension mismatch");
          Eigen::MatrixXd pos = lat.positions(increments);
          Eigen::MatrixXd window = pos.middleRows(windowStart, v.points);
          return osc_contains(v, flatten(window));
        } else if constexpr (std::is_same_v<T, Intersection>) {
          for (const auto& part : v.parts)
            if (!part.containsPath(lat, increments, windowStart)) return false;
          return true;
        } else {
          (void)v;
          return contains(flatten(increments));
        }
      },
      node_);
}

std::string ConvexBody::describe() const {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        char buf[96];
        if constexpr (std::is_same_v<T, Ball>) {
          std::snprintf(buf, sizeof(buf), "ball(r=%g)", v.radius);
          return buf;
        } else if constexpr (std::is_same_v<T, Slab>) {
          std::snprintf(buf, sizeof(buf), "slab(w=%g,dim=%d)", v.halfWidth,
                        static_cast<int>(v.normal.size()));
          return buf;
        } else if constexpr (std::is_same_v<T, OscillationSet>) {
          std::snprintf(buf, sizeof(buf), "osc(p=%d,d=%d,R=%g)", v.points, v.d,
                        v.R);
          return buf;
        } else {
          std::string out = "intersect(";
          for (std::size_t i = 0; i < v.parts.size(); ++i) {
            if (i) out += ",";
            out += v.parts[i].describe();
          }
          return out + ")";
        }
      },
      node_);
}

ConvexBody make_ball(double radius) { return ConvexBody(Ball{radius}); }

ConvexBody make_slab(Eigen::VectorXd normal, double halfWidth) {
  return ConvexBody(Slab{std::move(normal), halfWidth});
}

ConvexBody make_box(const Eigen::VectorXd& halfWidths) {
  std::vector<ConvexBody> parts;
  for (int i = 0; i < halfWidths.size(); ++i) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(halfWidths.size());
    n(i) = 1.0;
    parts.push_back(make_slab(std::move(n), halfWidths(i)));
  }
  return make_intersection(std::move(parts));
}

ConvexBody make_oscillation(int points, int d, double R) {
  return ConvexBody(OscillationSet{points, d, R});
}

ConvexBody make_intersection(std::vector<ConvexBody> parts) {
  return ConvexBody(Intersection{std::move(parts)});
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

}  // namespace polaron
