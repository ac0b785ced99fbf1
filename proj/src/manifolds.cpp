#include "radcom/manifolds.hpp"

#include <atomic>
#include <cassert>

#include "radcom/channel.hpp"

namespace radcom {

namespace {

constexpr double kDegenerateNorm = 1e-14;

void check_power(double power) {
  if (!(power > 0.0)) throw std::invalid_argument("manifold power must be positive");
}

}  // namespace

PointId next_point_id() {
  static std::atomic<PointId> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

double inner(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("inner: shape mismatch");
  // sum conj(x_pq) y_pq = tr(x^H y)
  return (x.array().conjugate() * y.array()).sum().real();
}

double inner(const TangentVector& x, const TangentVector& y) {
  assert(x.base == y.base && "tangent vectors from different tangent spaces");
  return inner(x.mat, y.mat);
}

// ---------------------------------------------------------------- sphere

SpherePoint SpherePoint::normalized(const Matrix& mat, double power) {
  check_power(power);
  const double norm = mat.norm();
  if (norm < kDegenerateNorm) throw NumericError("SpherePoint: cannot normalize a zero matrix");
  return SpherePoint(mat * (std::sqrt(power) / norm), power);
}

TangentVector sphere_project(const SpherePoint& p, const Matrix& f) {
  const Matrix& t = p.mat();
  require_shape("sphere_project", f.rows(), f.cols(), t.rows(), t.cols());
  const double radial = inner(t, f) / p.power();
  return TangentVector{f - radial * t, p.id()};
}

SpherePoint sphere_retract(const SpherePoint& p, const TangentVector& xi, double step) {
  assert(xi.base == p.id() && "retraction direction not tangent at this point");
  require_shape("sphere_retract", xi.mat.rows(), xi.mat.cols(), p.mat().rows(), p.mat().cols());
  if (step == 0.0) return p;
  const Matrix moved = p.mat() + step * xi.mat;
  if (moved.norm() < kDegenerateNorm) throw NumericError("sphere_retract: degenerate step");
  return SpherePoint::normalized(moved, p.power());
}

TangentVector transport(const SpherePoint& p_new, const TangentVector& v) {
  return sphere_project(p_new, v.mat);
}

double sphere_tangency_residual(const SpherePoint& p, const Matrix& v) {
  const double scale = std::max(1e-300, v.norm() * p.mat().norm());
  return std::abs(inner(p.mat(), v)) / scale;
}

SpherePoint Sphere::random_point(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) const {
  return SpherePoint::normalized(complex_gaussian(rows, cols, rng), power);
}

double Sphere::constraint_violation(const Point& p) const {
  return std::abs(p.mat().norm() - std::sqrt(power)) / std::sqrt(power);
}

// --------------------------------------------------------------- oblique

ObliquePoint ObliquePoint::normalized(const Matrix& mat, double power) {
  check_power(power);
  if (mat.cols() == 0) throw DimensionError("ObliquePoint: no columns");
  const double target = std::sqrt(power / static_cast<double>(mat.cols()));
  Matrix out(mat.rows(), mat.cols());
  for (Eigen::Index n = 0; n < mat.cols(); ++n) {
    const double norm = mat.col(n).norm();
    if (norm < kDegenerateNorm) {
      throw NumericError("ObliquePoint: degenerate column " + std::to_string(n));
    }
    out.col(n) = mat.col(n) * (target / norm);
  }
  return ObliquePoint(std::move(out), power);
}

TangentVector oblique_project(const ObliquePoint& p, const Matrix& f) {
  const Matrix& x = p.mat();
  require_shape("oblique_project", f.rows(), f.cols(), x.rows(), x.cols());
  // f - X ddiag[Re(X^H f)] N / P0, column by column.
  const double inv_col_power = static_cast<double>(x.cols()) / p.power();
  Matrix out = f;
  for (Eigen::Index n = 0; n < x.cols(); ++n) {
    const double radial = x.col(n).dot(f.col(n)).real() * inv_col_power;
    out.col(n) -= radial * x.col(n);
  }
  return TangentVector{std::move(out), p.id()};
}

ObliquePoint oblique_retract(const ObliquePoint& p, const TangentVector& xi, double step) {
  assert(xi.base == p.id() && "retraction direction not tangent at this point");
  require_shape("oblique_retract", xi.mat.rows(), xi.mat.cols(), p.mat().rows(), p.mat().cols());
  if (step == 0.0) return p;
  return ObliquePoint::normalized(p.mat() + step * xi.mat, p.power());
}

TangentVector transport(const ObliquePoint& p_new, const TangentVector& v) {
  return oblique_project(p_new, v.mat);
}

double oblique_tangency_residual(const ObliquePoint& p, const Matrix& v) {
  double worst = 0.0;
  const Matrix& x = p.mat();
  for (Eigen::Index n = 0; n < x.cols(); ++n) {
    const double scale = std::max(1e-300, x.col(n).norm() * std::max(v.norm(), 1e-300));
    worst = std::max(worst, std::abs(x.col(n).dot(v.col(n)).real()) / scale);
  }
  return worst;
}

ObliquePoint Oblique::random_point(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) const {
  return ObliquePoint::normalized(complex_gaussian(rows, cols, rng), power);
}

double Oblique::constraint_violation(const Point& p) const {
  const double target = p.col_norm();
  double worst = 0.0;
  for (Eigen::Index n = 0; n < p.mat().cols(); ++n) {
    worst = std::max(worst, std::abs(p.mat().col(n).norm() - target) / target);
  }
  return worst;
}

}  // namespace radcom
