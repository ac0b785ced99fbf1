#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace radcom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Power in dBm to linear milliwatts.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

enum class PowerMode { total, per_antenna };
enum class Penalty { sum_square, max };

/// Smooth real-valued function of a complex matrix. `grad` returns the
/// Euclidean gradient w.r.t. the real inner product Re tr(X^H Y).
struct Objective {
  std::function<double(const Matrix&)> cost;
  std::function<Matrix(const Matrix&)> grad;
};

/// Raised when two operands disagree in shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a meaningful result
/// (degenerate retraction, eigensolver failure, infeasible design).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_shape(const char* where, Eigen::Index rows, Eigen::Index cols,
                          Eigen::Index want_rows, Eigen::Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    throw DimensionError(std::string(where) + ": expected " + std::to_string(want_rows) + "x" +
                         std::to_string(want_cols) + ", got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

/// Relative Hermitian defect ||M - M^H||_F / max(1, ||M||_F).
inline double hermitian_defect(const Matrix& m) {
  return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

}  // namespace radcom
