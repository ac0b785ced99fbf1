#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "radcom/types.hpp"

namespace radcom {

/// Identity of a manifold point. Copies of a point share the id; every
/// retraction produces a fresh one.
using PointId = std::uint64_t;
PointId next_point_id();

/// Element of a tangent space. `base` records the point it is attached to so
/// that mixing vectors from different tangent spaces can be caught.
struct TangentVector {
  Matrix mat;
  PointId base = 0;
};

/// Real part of tr(x^H y).
double inner(const Matrix& x, const Matrix& y);
double inner(const TangentVector& x, const TangentVector& y);

/// Matrix with Frobenius norm sqrt(power): the total-power feasible set.
class SpherePoint {
 public:
  /// Rescales `mat` onto the sphere of the given power.
  static SpherePoint normalized(const Matrix& mat, double power);

  const Matrix& mat() const { return mat_; }
  double power() const { return power_; }
  double radius() const { return std::sqrt(power_); }
  PointId id() const { return id_; }

 private:
  SpherePoint(Matrix mat, double power) : mat_(std::move(mat)), power_(power), id_(next_point_id()) {}
  Matrix mat_;
  double power_;
  PointId id_;
};

/// K x N matrix whose N columns each have norm sqrt(power / N): the
/// per-antenna feasible set.
class ObliquePoint {
 public:
  static ObliquePoint normalized(const Matrix& mat, double power);

  const Matrix& mat() const { return mat_; }
  double power() const { return power_; }
  double col_norm() const { return std::sqrt(power_ / static_cast<double>(mat_.cols())); }
  PointId id() const { return id_; }

 private:
  ObliquePoint(Matrix mat, double power) : mat_(std::move(mat)), power_(power), id_(next_point_id()) {}
  Matrix mat_;
  double power_;
  PointId id_;
};

TangentVector sphere_project(const SpherePoint& p, const Matrix& f);
SpherePoint sphere_retract(const SpherePoint& p, const TangentVector& xi, double step);
TangentVector oblique_project(const ObliquePoint& p, const Matrix& f);
ObliquePoint oblique_retract(const ObliquePoint& p, const TangentVector& xi, double step);

/// Vector transport by orthogonal projection onto the tangent space at p_new.
TangentVector transport(const SpherePoint& p_new, const TangentVector& v);
TangentVector transport(const ObliquePoint& p_new, const TangentVector& v);

/// Tangency residuals, scaled by the norms of the point and the vector.
double sphere_tangency_residual(const SpherePoint& p, const Matrix& v);
double oblique_tangency_residual(const ObliquePoint& p, const Matrix& v);

/// Manifold descriptors consumed by the RCG solver.
struct Sphere {
  using Point = SpherePoint;
  double power;

  Point random_point(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) const;
  Point from_matrix(const Matrix& m) const { return SpherePoint::normalized(m, power); }
  TangentVector project(const Point& p, const Matrix& f) const { return sphere_project(p, f); }
  Point retract(const Point& p, const TangentVector& xi, double step) const {
    return sphere_retract(p, xi, step);
  }
  TangentVector transport(const Point& p_new, const TangentVector& v) const {
    return radcom::transport(p_new, v);
  }
  /// Largest relative violation of the constraint.
  double constraint_violation(const Point& p) const;
  double tangency_residual(const Point& p, const Matrix& v) const {
    return sphere_tangency_residual(p, v);
  }
  /// (N, K) for the flop model; T is N x K.
  std::pair<Eigen::Index, Eigen::Index> flop_dims(const Point& p) const {
    return {p.mat().rows(), p.mat().cols()};
  }
};

struct Oblique {
  using Point = ObliquePoint;
  double power;

  Point random_point(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) const;
  Point from_matrix(const Matrix& m) const { return ObliquePoint::normalized(m, power); }
  TangentVector project(const Point& p, const Matrix& f) const { return oblique_project(p, f); }
  Point retract(const Point& p, const TangentVector& xi, double step) const {
    return oblique_retract(p, xi, step);
  }
  TangentVector transport(const Point& p_new, const TangentVector& v) const {
    return radcom::transport(p_new, v);
  }
  double constraint_violation(const Point& p) const;
  double tangency_residual(const Point& p, const Matrix& v) const {
    return oblique_tangency_residual(p, v);
  }
  /// (N, K) for the flop model; X is K x N.
  std::pair<Eigen::Index, Eigen::Index> flop_dims(const Point& p) const {
    return {p.mat().cols(), p.mat().rows()};
  }
};

}  // namespace radcom
