#include <gtest/gtest.h>

#include "radcom/array_model.hpp"
#include "radcom/objectives.hpp"
#include "test_util.hpp"

using namespace radcom;
using radcom::testing::fd_gradient;
using radcom::testing::random_matrix;
using radcom::testing::random_psd;
using radcom::testing::rel_error;

namespace {

ProblemData random_problem(int n, int k, std::uint64_t seed, double rho1 = 1.0, double rho2 = 1.0) {
  ProblemData d;
  d.h = random_matrix(n, k, seed);
  d.r = random_psd(n, n, seed + 1) / static_cast<double>(n);
  d.gamma = RealVector::LinSpaced(k, 2.0, 10.0);
  d.n0 = 1.0;
  d.rho1 = rho1;
  d.rho2 = rho2;
  d.epsilon = 0.1;
  d.validate();
  return d;
}

Matrix quad_form_oracle_b(const Matrix& h, int i) { return h.col(i).conjugate() * h.col(i).transpose(); }

}  // namespace

TEST(Sinr, SingleUserHasNoInterference) {
  const Matrix h = random_matrix(4, 1, 1);
  const Matrix t = random_matrix(4, 1, 2);
  const double want = std::norm((h.transpose() * t)(0, 0)) / 2.0;
  EXPECT_NEAR(sinr_shared(t, h, 2.0, 0), want, 1e-12 * want);
}

TEST(Sinr, ZeroForcedInterference) {
  const Matrix h = random_matrix(4, 3, 3);
  // Columns of T in the null space of the other users' h^T.
  Matrix t(4, 3);
  for (int i = 0; i < 3; ++i) {
    Matrix others(2, 4);
    int r = 0;
    for (int k = 0; k < 3; ++k) {
      if (k != i) others.row(r++) = h.col(k).transpose();
    }
    Eigen::FullPivLU<Matrix> lu(others);
    t.col(i) = lu.kernel().col(0);
  }
  for (int i = 0; i < 3; ++i) {
    const double want = std::norm((h.col(i).transpose() * t.col(i))(0, 0)) / 0.5;
    EXPECT_NEAR(sinr_shared(t, h, 0.5, i), want, 1e-9 * want);
  }
}

TEST(Sinr, MatchesQuadraticFormOracle) {
  const Matrix h = random_matrix(4, 3, 4);
  const Matrix t = random_matrix(4, 3, 5);
  for (int i = 0; i < 3; ++i) {
    const Matrix b = quad_form_oracle_b(h, i);
    const double own = (b * t.col(i) * t.col(i).adjoint()).trace().real();
    double interference = 0;
    for (int k = 0; k < 3; ++k) {
      if (k != i) interference += (b * t.col(k) * t.col(k).adjoint()).trace().real();
    }
    EXPECT_NEAR(sinr_shared(t, h, 1.0, i), own / (interference + 1.0), 1e-10);
  }
}

TEST(Sinr, SeparatedLeakage) {
  const Matrix g = random_matrix(6, 3, 6);
  const Matrix f = random_matrix(5, 3, 7);
  const Matrix w = random_matrix(6, 3, 8);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(sinr_separated(w, g, f, Matrix::Zero(5, 5), 1.0, i), sinr_shared(w, g, 1.0, i), 1e-12);
  }
  const Matrix r1 = random_psd(5, 2, 9);
  for (int i = 0; i < 3; ++i) {
    const Vector fc = f.col(i).conjugate();
    const double leak = (fc.adjoint() * r1 * fc)(0, 0).real();
    const Matrix y = g.transpose() * w;
    const double own = std::norm(y(i, i));
    const double want = own / (y.row(i).squaredNorm() - own + leak + 1.0);
    EXPECT_NEAR(sinr_separated(w, g, f, r1, 1.0, i), want, 1e-12 * want);
  }
  // A radar covariance orthogonal to every conj(f_i) leaks nothing.
  Eigen::FullPivLU<Matrix> lu(f.transpose());
  const Matrix u = lu.kernel();
  const Matrix r_zf = u * u.adjoint();
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(sinr_separated(w, g, f, r_zf, 1.0, i), sinr_shared(w, g, 1.0, i), 1e-8);
  }
}

TEST(Alpha, Examples) {
  const Matrix h = random_matrix(4, 1, 10);
  const Matrix t = random_matrix(4, 1, 11);
  EXPECT_NEAR(alpha(t, h, RealVector::Constant(1, 7.0), 0), std::norm((h.transpose() * t)(0, 0)), 1e-10);
  const Matrix h3 = random_matrix(4, 3, 12);
  EXPECT_EQ(alphas(Matrix::Zero(4, 3), h3, RealVector::Constant(3, 3.0)).norm(), 0.0);
}

TEST(Alpha, SignMatchesSinrGap) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix h = random_matrix(4, 3, 100 + s);
    const Matrix t = random_matrix(4, 3, 200 + s);
    const RealVector gamma = RealVector::Constant(3, 0.5 + static_cast<double>(s % 5));
    const double n0 = 0.3;
    for (int i = 0; i < 3; ++i) {
      const double gap = alpha(t, h, gamma, i) - gamma(i) * n0;
      const double sinr_gap = sinr_shared(t, h, n0, i) - gamma(i);
      EXPECT_EQ(gap > 0, sinr_gap > 0);
      // Identity: alpha - Gamma N0 = (sinr - Gamma)(interference + N0).
      const Matrix y = h.transpose() * t;
      const double interference = y.row(i).squaredNorm() - std::norm(y(i, i));
      EXPECT_NEAR(gap, sinr_gap * (interference + n0), 1e-9 * (1 + std::abs(gap)));
    }
  }
}

TEST(GMatrix, Examples) {
  const Matrix h = random_matrix(5, 3, 13);
  const Matrix t = random_matrix(5, 3, 14);
  RealVector gamma = RealVector::Zero(3);
  const Matrix g0 = g_matrix(t, h, gamma, 1);
  Matrix want = Matrix::Zero(5, 3);
  want.col(1) = quad_form_oracle_b(h, 1) * t.col(1);
  EXPECT_LT((g0 - want).norm(), 1e-12);
  gamma = RealVector::Constant(3, 4.0);
  EXPECT_EQ(g_matrix(Matrix::Zero(5, 3), h, gamma, 0).norm(), 0.0);
}

TEST(GMatrix, IsHalfTheAlphaGradient) {
  const Matrix h = random_matrix(5, 3, 15);
  const Matrix t = random_matrix(5, 3, 16);
  const RealVector gamma = RealVector::LinSpaced(3, 1.0, 5.0);
  for (int i = 0; i < 3; ++i) {
    const Matrix fd = fd_gradient([&](const Matrix& x) { return alpha(x, h, gamma, i); }, t);
    EXPECT_LT(rel_error(2.0 * g_matrix(t, h, gamma, i), fd), 1e-6);
  }
}

TEST(Lse, Examples) {
  EXPECT_DOUBLE_EQ(lse(RealVector::Constant(1, 3.5), 0.1), -3.5);
  EXPECT_NEAR(lse(RealVector::Zero(2), 1.0), std::log(2.0), 1e-15);
  const RealVector big = (RealVector(3) << -1e4, 5e3, 2.0).finished();
  EXPECT_TRUE(std::isfinite(lse(big, 0.1)));
  EXPECT_NEAR(lse(big, 0.1), 1e4, 1e-9);
  const RealVector w = lse_weights(RealVector::Constant(4, 2.0), 0.1);
  EXPECT_LT((w.array() - 0.25).abs().maxCoeff(), 1e-15);
}

TEST(Lse, BoundHolds) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> kdist(1, 10);
  std::normal_distribution<double> adist(0.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = kdist(rng);
    RealVector a(k);
    for (int i = 0; i < k; ++i) a(i) = adist(rng);
    const double l = (-a).maxCoeff();
    const double v = lse(a, 0.1);
    EXPECT_LE(l, v);
    EXPECT_LE(v, l + 0.1 * std::log(static_cast<double>(k)));
  }
}

TEST(F1, Examples) {
  // T T^H = R and every alpha_i = Gamma_i N0.
  ProblemData d = random_problem(4, 1, 20);
  const Matrix t = random_matrix(4, 1, 21);
  d.r = t * t.adjoint();
  d.n0 = 1.0;
  d.gamma = RealVector::Constant(1, std::norm((d.h.transpose() * t)(0, 0)));
  EXPECT_NEAR(f1_cost(t, d), 0.0, 1e-18 + 1e-12 * d.gamma(0) * d.gamma(0));
  EXPECT_LT(f1_grad(t, d).norm(), 1e-9);

  ProblemData fit = random_problem(6, 2, 22, 2.5, 0.0);
  const Matrix t2 = random_matrix(6, 2, 23);
  EXPECT_NEAR(f1_cost(t2, fit), 2.5 * (t2 * t2.adjoint() - fit.r).squaredNorm(), 1e-10);
  EXPECT_NEAR(f2_cost(t2, fit), 2.5 * (t2 * t2.adjoint() - fit.r).squaredNorm(), 1e-10);
}

TEST(F2, EqualAlphasGiveUniformWeights) {
  const RealVector a = RealVector::Constant(5, -3.0);
  const RealVector w = lse_weights(a, 0.1);
  EXPECT_NEAR(w.sum(), 1.0, 1e-15);
  EXPECT_NEAR(w.maxCoeff(), 0.2, 1e-15);
}

TEST(Gradients, MatchFiniteDifferences) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ProblemData d = random_problem(8, 3, 1000 + 10 * s, 1.0, 0.5);
    const Matrix t = random_matrix(8, 3, 2000 + s) * 0.5;
    const Matrix x = t.adjoint();
    EXPECT_LT(rel_error(f1_grad(t, d), fd_gradient([&](const Matrix& m) { return f1_cost(m, d); }, t)), 1e-6);
    EXPECT_LT(rel_error(f2_grad(t, d), fd_gradient([&](const Matrix& m) { return f2_cost(m, d); }, t)), 1e-6);
    EXPECT_LT(rel_error(f3_grad(x, d), fd_gradient([&](const Matrix& m) { return f3_cost(m, d); }, x)), 1e-6);
    EXPECT_LT(rel_error(f4_grad(x, d), fd_gradient([&](const Matrix& m) { return f4_cost(m, d); }, x)), 1e-6);
  }
}

TEST(Objectives, TransposedVariableIdentity) {
  const ProblemData d = random_problem(6, 3, 30);
  const Matrix t = random_matrix(6, 3, 31);
  EXPECT_NEAR(f1_cost(t, d), f3_cost(t.adjoint(), d), 1e-10 * f1_cost(t, d));
  EXPECT_NEAR(f2_cost(t, d), f4_cost(t.adjoint(), d), 1e-10 * std::abs(f2_cost(t, d)));
  EXPECT_LT(rel_error(f3_grad(t.adjoint(), d), f1_grad(t, d).adjoint()), 1e-12);
}

TEST(Objectives, PerUserPhaseInvariance) {
  const ProblemData d = random_problem(6, 3, 32);
  const Matrix t = random_matrix(6, 3, 33);
  Vector phases(3);
  phases << std::polar(1.0, 0.3), std::polar(1.0, -2.0), std::polar(1.0, 1.1);
  const Matrix tp = t * phases.asDiagonal();
  EXPECT_NEAR(f1_cost(tp, d), f1_cost(t, d), 1e-10 * f1_cost(t, d));
  EXPECT_NEAR(f2_cost(tp, d), f2_cost(t, d), 1e-10 * std::abs(f2_cost(t, d)));
}

TEST(Objectives, MakeObjectiveDispatch) {
  const ProblemData d = random_problem(5, 2, 34);
  const Matrix t = random_matrix(5, 2, 35);
  EXPECT_EQ(make_objective(PowerMode::total, Penalty::sum_square, d).cost(t), f1_cost(t, d));
  EXPECT_EQ(make_objective(PowerMode::total, Penalty::max, d).cost(t), f2_cost(t, d));
  EXPECT_EQ(make_objective(PowerMode::per_antenna, Penalty::sum_square, d).cost(t.adjoint()),
            f3_cost(t.adjoint(), d));
  EXPECT_EQ(make_objective(PowerMode::per_antenna, Penalty::max, d).cost(t.adjoint()), f4_cost(t.adjoint(), d));
}

TEST(ProblemData, Validation) {
  ProblemData d = random_problem(4, 2, 36);
  d.epsilon = 0.0;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  d = random_problem(4, 2, 36);
  d.rho1 = d.rho2 = 0.0;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  d = random_problem(4, 2, 36);
  d.r(0, 1) += 1.0;
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

namespace {

SeparatedProblemData random_separated(std::uint64_t seed, double rho1 = 1.0, double rho2 = 1.0) {
  const SteeringGrid grid(21, 14);
  SeparatedProblemData d;
  d.f = random_matrix(6, 3, seed);
  d.g = random_matrix(8, 3, seed + 1);
  d.r1 = random_psd(6, 2, seed + 2);
  d.a1 = grid.subarray(0, 6);
  d.a2 = grid.subarray(6, 8);
  d.gamma = RealVector::LinSpaced(3, 1.0, 4.0);
  d.n0 = 1.0;
  d.rho1 = rho1;
  d.rho2 = rho2;
  d.finalize();
  return d;
}

}  // namespace

TEST(ZfComm, ZeroBeamformer) {
  const auto d = random_separated(40);
  const Matrix w = Matrix::Zero(8, 3);
  EXPECT_EQ(zf_sigma(w, d), 0.0);
  EXPECT_NEAR(zf_comm_cost(w, d), d.gamma.cwiseProduct(d.noise).squaredNorm(), 1e-12);
}

TEST(ZfComm, NoRadarLeavesCommPattern) {
  auto d = random_separated(41, 1.0, 0.0);
  d.r1 = Matrix::Zero(6, 6);
  d.finalize();
  const Matrix w = random_matrix(8, 3, 42);
  const RealVector pattern = (d.a2.adjoint() * w * w.adjoint() * d.a2).diagonal().real();
  EXPECT_NEAR(zf_comm_cost(w, d), pattern.squaredNorm(), 1e-9 * pattern.squaredNorm());
}

TEST(ZfComm, GradientMatchesFiniteDifferences) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto d = random_separated(500 + 10 * s, 0.05, 1.0);
    const Matrix w = random_matrix(8, 3, 600 + s) * 0.5;
    const Matrix fd = fd_gradient([&](const Matrix& m) { return zf_comm_cost(m, d); }, w);
    EXPECT_LT(rel_error(zf_comm_grad(w, d), fd), 1e-6) << "seed " << s;
  }
}
