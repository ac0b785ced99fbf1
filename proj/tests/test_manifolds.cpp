#include <gtest/gtest.h>

#include "radcom/manifolds.hpp"
#include "test_util.hpp"

using namespace radcom;
using radcom::testing::random_matrix;

TEST(Inner, Examples) {
  const Matrix x = random_matrix(3, 2, 1);
  const Matrix y = random_matrix(3, 2, 2);
  EXPECT_NEAR(inner(x, x), x.squaredNorm(), 1e-12);
  EXPECT_NEAR(inner(x, Complex(0, 1) * x), 0.0, 1e-12);
  double sum = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) sum += (std::conj(x(i, j)) * y(i, j)).real();
  }
  EXPECT_NEAR(inner(x, y), sum, 1e-12);
  EXPECT_THROW(inner(x, Matrix(2, 3)), DimensionError);
}

TEST(Sphere, ProjectExamples) {
  const auto p = SpherePoint::normalized(random_matrix(3, 2, 5), 2.0);
  EXPECT_NEAR(p.mat().norm(), std::sqrt(2.0), 1e-14);
  EXPECT_LT(sphere_project(p, p.mat()).mat.norm(), 1e-14);
  const Matrix f = random_matrix(3, 2, 6);
  const auto xi = sphere_project(p, f);
  EXPECT_LT(std::abs(inner(p.mat(), xi.mat)), 1e-12);
  EXPECT_LT(sphere_tangency_residual(p, xi.mat), 1e-12);
  EXPECT_LT((sphere_project(p, xi.mat).mat - xi.mat).norm(), 1e-12);
}

TEST(Sphere, ProjectionIsSelfAdjoint) {
  const auto p = SpherePoint::normalized(random_matrix(5, 3, 7), 10.0);
  const Matrix f = random_matrix(5, 3, 8);
  const Matrix g = random_matrix(5, 3, 9);
  EXPECT_NEAR(inner(sphere_project(p, f).mat, g), inner(f, sphere_project(p, g).mat), 1e-11);
}

TEST(Sphere, RetractExamples) {
  const auto p = SpherePoint::normalized(random_matrix(4, 3, 10), 100.0);
  const auto xi = sphere_project(p, random_matrix(4, 3, 11));
  const auto same = sphere_retract(p, xi, 0.0);
  EXPECT_TRUE(same.mat() == p.mat());
  for (double step : {1e-3, 0.5, 10.0, 1e4}) {
    EXPECT_NEAR(sphere_retract(p, xi, step).mat().norm(), 10.0, 1e-12 * 10.0);
  }
  // N = 1, K = 2: hand normalization.
  Matrix t(1, 2);
  t << 1.0, 0.0;
  const auto q = SpherePoint::normalized(t, 1.0);
  Matrix v(1, 2);
  v << 0.0, 1.0;
  const auto r = sphere_retract(q, TangentVector{v, q.id()}, 1.0);
  EXPECT_NEAR(std::abs(r.mat()(0, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r.mat()(0, 1) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Sphere, RetractionIsSecondOrder) {
  const auto p = SpherePoint::normalized(random_matrix(4, 2, 12), 3.0);
  const auto xi = sphere_project(p, random_matrix(4, 2, 13));
  double prev = 0.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double err = (sphere_retract(p, xi, h).mat() - (p.mat() + h * xi.mat)).norm();
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.1);
    prev = err;
  }
}

TEST(Sphere, DegenerateRetractionThrows) {
  const auto p = SpherePoint::normalized(random_matrix(2, 2, 14), 1.0);
  // -p is not tangent, but it exercises the degenerate guard.
  EXPECT_THROW(sphere_retract(p, TangentVector{-p.mat(), p.id()}, 1.0), NumericError);
}

TEST(Sphere, TransportExamples) {
  const Sphere s{5.0};
  std::mt19937_64 rng(1);
  const auto p = s.random_point(4, 3, rng);
  const auto v = s.project(p, random_matrix(4, 3, 15));
  EXPECT_LT((transport(p, v).mat - v.mat).norm(), 1e-12);
  const auto q = s.retract(p, v, 0.3);
  const auto moved = transport(q, v);
  EXPECT_LT(sphere_tangency_residual(q, moved.mat), 1e-12);
  EXPECT_LT((moved.mat - sphere_project(q, v.mat).mat).norm(), 1e-14);
  EXPECT_EQ(moved.base, q.id());
}

TEST(Oblique, ProjectExamples) {
  const auto p = ObliquePoint::normalized(random_matrix(2, 3, 20), 6.0);
  for (int n = 0; n < 3; ++n) EXPECT_NEAR(p.mat().col(n).norm(), std::sqrt(2.0), 1e-14);
  EXPECT_LT(oblique_project(p, p.mat()).mat.norm(), 1e-14);
  const auto xi = oblique_project(p, random_matrix(2, 3, 21));
  const Matrix d = p.mat().adjoint() * xi.mat;
  for (int n = 0; n < 3; ++n) EXPECT_LT(std::abs(d(n, n).real()), 1e-12);
  EXPECT_LT(oblique_tangency_residual(p, xi.mat), 1e-12);
  // Columns already orthogonal to their own column of X stay put.
  Matrix f = xi.mat;
  EXPECT_LT((oblique_project(p, f).mat - f).norm(), 1e-12);
}

TEST(Oblique, RetractExamples) {
  const Oblique m{20.0};
  std::mt19937_64 rng(2);
  const auto p = m.random_point(4, 20, rng);
  const auto xi = m.project(p, random_matrix(4, 20, 22));
  EXPECT_TRUE(oblique_retract(p, xi, 0.0).mat() == p.mat());
  const auto q = oblique_retract(p, xi, 2.0);
  EXPECT_LT(m.constraint_violation(q), 1e-12);
  // N = 2, K = 1 hand normalization.
  Matrix x(1, 2);
  x << 1.0, Complex(0, 1);
  const auto r = ObliquePoint::normalized(x, 2.0);
  Matrix v(1, 2);
  v << Complex(0, 1), 1.0;
  const auto s = oblique_retract(r, TangentVector{v, r.id()}, 1.0);
  EXPECT_LT(std::abs(s.mat()(0, 0) - Complex(1, 1) / std::sqrt(2.0)), 1e-15);
  EXPECT_LT(std::abs(s.mat()(0, 1) - Complex(1, 1) / std::sqrt(2.0)), 1e-15);
}

TEST(Oblique, ProjectionIdempotentAndSelfAdjoint) {
  const auto p = ObliquePoint::normalized(random_matrix(3, 5, 23), 100.0);
  const Matrix f = random_matrix(3, 5, 24);
  const Matrix g = random_matrix(3, 5, 25);
  const auto pf = oblique_project(p, f);
  EXPECT_LT((oblique_project(p, pf.mat).mat - pf.mat).norm(), 1e-12 * pf.mat.norm());
  EXPECT_NEAR(inner(pf.mat, g), inner(f, oblique_project(p, g).mat), 1e-10);
}

TEST(Oblique, TransportMatchesProjection) {
  const Oblique m{4.0};
  std::mt19937_64 rng(3);
  const auto p = m.random_point(3, 4, rng);
  const auto v = m.project(p, random_matrix(3, 4, 26));
  EXPECT_LT((transport(p, v).mat - v.mat).norm(), 1e-12);
  const auto q = m.retract(p, v, 0.7);
  EXPECT_LT((transport(q, v).mat - oblique_project(q, v.mat).mat).norm(), 1e-14);
}

TEST(Manifolds, RandomPointsAreFeasibleAndDeterministic) {
  const Sphere s{100.0};
  const Oblique o{100.0};
  std::mt19937_64 a(9), b(9);
  const auto p1 = s.random_point(20, 4, a);
  const auto p2 = s.random_point(20, 4, b);
  EXPECT_TRUE(p1.mat() == p2.mat());
  EXPECT_LT(s.constraint_violation(p1), 1e-12);
  const auto q = o.random_point(4, 20, a);
  EXPECT_LT(o.constraint_violation(q), 1e-12);
}
