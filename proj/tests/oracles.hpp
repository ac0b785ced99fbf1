#pragma once

#include <algorithm>
#include <limits>

#include "radcom/array_model.hpp"
#include "test_util.hpp"

namespace radcom::testing {

// Trace-constrained PSD projection by bisection on the eigenvalue shift.
inline Matrix oracle_spectraplex(const Matrix& m, double total) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.adjoint()));
  const RealVector lam = eig.eigenvalues();
  double lo = lam.minCoeff() - total, hi = lam.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((lam.array() - mid).max(0.0).sum() > total ? lo : hi) = mid;
  }
  const RealVector shifted = (lam.array() - 0.5 * (lo + hi)).max(0.0);
  return eig.eigenvectors() * shifted.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

// Best of `starts` projected-gradient runs on the joint (R, alpha) problem.
inline double multistart_oracle(const RealVector& gains, const SteeringGrid& grid, double power, int starts) {
  const Matrix& a = grid.steering();
  const int n = grid.n_antennas();
  double lipschitz = 0;
  for (int m = 0; m < grid.size(); ++m) lipschitz += std::pow(a.col(m).squaredNorm(), 2);
  lipschitz *= 2;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    const Matrix b = random_matrix(n, n, 900 + s);
    Matrix r = oracle_spectraplex(b * b.adjoint(), power);
    double value = 0;
    for (int it = 0; it < 3000; ++it) {
      const RealVector p = (a.adjoint() * r * a).diagonal().real();
      const double alpha = std::max(0.0, gains.dot(p) / gains.squaredNorm());
      const RealVector e = p - alpha * gains;
      value = e.squaredNorm();
      const Matrix grad = 2.0 * a * e.cast<Complex>().asDiagonal() * a.adjoint();
      r = oracle_spectraplex(r - grad / lipschitz, power);
    }
    best = std::min(best, value);
  }
  return best;
}

}  // namespace radcom::testing
