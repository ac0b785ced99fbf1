#pragma once

#include <random>

#include "radcom/channel.hpp"
#include "radcom/types.hpp"

namespace radcom::testing {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return complex_gaussian(rows, cols, rng);
}

inline Matrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
  const Matrix a = random_matrix(n, n, seed);
  return 0.5 * (a + a.adjoint());
}

inline Matrix random_psd(Eigen::Index n, Eigen::Index rank, std::uint64_t seed) {
  const Matrix a = random_matrix(n, rank, seed);
  return a * a.adjoint();
}

/// Central differences on real and imaginary parts; the result is the
/// gradient for the inner product Re tr(X^H Y).
template <class Fn>
Matrix fd_gradient(const Fn& f, const Matrix& x, double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Matrix xp = x, xm = x;
      xp(i, j) += h;
      xm(i, j) -= h;
      const double re = (f(xp) - f(xm)) / (2 * h);
      xp = x;
      xm = x;
      xp(i, j) += Complex(0, h);
      xm(i, j) -= Complex(0, h);
      const double im = (f(xp) - f(xm)) / (2 * h);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

inline double rel_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1e-300, b.norm());
}

}  // namespace radcom::testing
