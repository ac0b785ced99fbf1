#pragma once

#include <optional>
#include <vector>

#include "radcom/array_model.hpp"
#include "radcom/types.hpp"

namespace radcom {

/// The constraint set admits no PSD point (e.g. zero-forcing against as many
/// users as there are antennas).
class InfeasibleDesign : public NumericError {
 public:
  using NumericError::NumericError;
};

struct DesignOptions {
  int max_iterations = 5000;
  double relative_tolerance = 1e-8;  // on the objective change per iteration
  int max_projection_iterations = 1000;
  double projection_tolerance = 1e-11;  // relative, Dykstra stopping rule
};

/// Radar covariance fitted to an ideal beampattern.
struct CovarianceTarget {
  Matrix r;
  PowerMode power_mode = PowerMode::per_antenna;
  double power = 1.0;
  std::optional<Matrix> zf_channels;  // columns f_i the radar must not reach
  double alpha_scale = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_history;  // one entry per outer iteration
};

/// Nearest PSD matrix in Frobenius norm; the input is Hermitianized first.
Matrix psd_project(const Matrix& m);

/// Nonnegative scale alpha minimizing sum |alpha gain_m - p_m|^2.
double fit_alpha(const Beampattern& pattern, const IdealPattern& ideal);
double fit_alpha(const RealVector& pattern, const RealVector& gains);

/// sum_m |alpha gain_m - a_m^H R a_m|^2.
double design_objective(const Matrix& r, double alpha, const RealVector& gains,
                        const SteeringGrid& grid);

/// Least-squares beampattern matching over PSD covariances with a power
/// constraint (trace, or every diagonal entry equal) and optional
/// zero-forcing against the columns of `zf_channels`.
///
/// Runs accelerated projected gradient on the covariance with alpha
/// re-fitted in closed form at every step; the projection onto the
/// constraint set is exact for the trace constraint and uses Dykstra's
/// alternating projections for the diagonal one.
CovarianceTarget design_covariance(const IdealPattern& ideal, const SteeringGrid& grid,
                                   PowerMode mode, double power,
                                   const std::optional<Matrix>& zf_channels = std::nullopt,
                                   const DesignOptions& options = {});

/// Same, for arbitrary nonnegative gains.
CovarianceTarget design_covariance(const RealVector& gains, const SteeringGrid& grid,
                                   PowerMode mode, double power,
                                   const std::optional<Matrix>& zf_channels = std::nullopt,
                                   const DesignOptions& options = {});

/// Largest tr(f_i^* f_i^T R) over the columns of f.
double max_leakage(const Matrix& r, const Matrix& f);

}  // namespace radcom
