#include "radcom/radar_covariance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace radcom {

namespace {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Euclidean projection of `v` onto {x >= 0, sum x = total}.
RealVector project_simplex(const RealVector& v, double total) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - total) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

/// Constraint set in the reduced coordinates Q, where R = U Q U^H and the
/// columns of U span the zero-forcing subspace (U = I without zero-forcing).
class ConstraintSet {
 public:
  ConstraintSet(Matrix basis, PowerMode mode, double power, const DesignOptions& options)
      : basis_(std::move(basis)), mode_(mode), power_(power), options_(options) {
    const auto n = basis_.rows();
    if (mode_ == PowerMode::per_antenna) {
      target_ = power_ / static_cast<double>(n);
      // u_n = U^H e_n; Gram entries |u_n^H u_m|^2 = |(U U^H)_nm|^2.
      rows_ = basis_.adjoint();
      const Matrix uu = basis_ * basis_.adjoint();
      const RealMatrix gram = uu.cwiseAbs2();
      gram_solver_.compute(gram);
    }
  }

  Eigen::Index reduced_dim() const { return basis_.cols(); }

  /// Projection onto the set; the result is exactly PSD and, in per-antenna
  /// mode, satisfies the diagonal constraint to the Dykstra tolerance.
  Matrix project(const Matrix& q) const {
    if (mode_ == PowerMode::total) return project_spectraplex(q);
    return project_dykstra(q);
  }

  RealVector diag_residual(const Matrix& q) const {
    RealVector res(rows_.cols());
    for (Eigen::Index n = 0; n < rows_.cols(); ++n) {
      res(n) = rows_.col(n).dot(q * rows_.col(n)).real() - target_;
    }
    return res;
  }

  Matrix lift(const Matrix& q) const { return basis_ * q * basis_.adjoint(); }

 private:
  Matrix project_spectraplex(const Matrix& q) const {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(q));
    if (eig.info() != Eigen::Success) throw NumericError("eigensolver failed");
    const RealVector lambda = project_simplex(eig.eigenvalues(), power_);
    const Matrix& v = eig.eigenvectors();
    return hermitian_part(v * lambda.cast<Complex>().asDiagonal() * v.adjoint());
  }

  Matrix project_affine(const Matrix& q) const {
    const RealVector lambda = gram_solver_.solve(diag_residual(q));
    return q - rows_ * lambda.cast<Complex>().asDiagonal() * rows_.adjoint();
  }

  Matrix project_dykstra(const Matrix& start) const {
    const double scale = std::max(start.norm(), power_);
    const double tol = options_.projection_tolerance * scale;
    Matrix x = start;
    Matrix y = start;
    Matrix psd_increment = Matrix::Zero(start.rows(), start.cols());
    for (int it = 0; it < options_.max_projection_iterations; ++it) {
      y = psd_project(x + psd_increment);
      psd_increment = x + psd_increment - y;
      // The affine set needs no correction term: its increments are normal to it.
      const Matrix x_next = project_affine(y);
      const double gap = (x_next - y).norm();
      const double change = (x_next - x).norm();
      x = x_next;
      if (gap <= tol && change <= tol) break;
    }
    const double residual = diag_residual(y).norm() / (target_ * std::sqrt(double(rows_.cols())));
    if (residual > 1e-4) {
      throw InfeasibleDesign("covariance constraints admit no PSD point (residual " +
                             std::to_string(residual) + ")");
    }
    return y;
  }

  Matrix basis_;
  PowerMode mode_;
  double power_;
  DesignOptions options_;
  double target_ = 0.0;
  Matrix rows_;
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> gram_solver_;
};

Matrix zero_forcing_basis(const Matrix& f, Eigen::Index n) {
  require_shape("zero-forcing channels", f.rows(), f.cols(), n, f.cols());
  if (f.cols() == 0) return Matrix::Identity(n, n);
  // R conj(f_i) = 0 for PSD R is equivalent to tr(f_i^* f_i^T R) = 0.
  const Matrix v = f.conjugate();
  Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeFullU);
  const RealVector& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < s.size(); ++j) rank += s(j) > cutoff ? 1 : 0;
  if (rank >= n) {
    throw InfeasibleDesign("zero-forcing against " + std::to_string(f.cols()) +
                           " users leaves no radar subspace on " + std::to_string(n) + " antennas");
  }
  return svd.matrixU().rightCols(n - rank);
}

}  // namespace

Matrix psd_project(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("psd_project: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m));
  if (eig.info() != Eigen::Success) throw NumericError("psd_project: eigensolver failed");
  const RealVector lambda = eig.eigenvalues().cwiseMax(0.0);
  const Matrix& v = eig.eigenvectors();
  return hermitian_part(v * lambda.cast<Complex>().asDiagonal() * v.adjoint());
}

double fit_alpha(const RealVector& pattern, const RealVector& gains) {
  if (pattern.size() != gains.size()) throw DimensionError("fit_alpha: length mismatch");
  const double denom = gains.squaredNorm();
  if (denom <= 0.0) return 0.0;
  return std::max(0.0, gains.dot(pattern) / denom);
}

double fit_alpha(const Beampattern& pattern, const IdealPattern& ideal) {
  return fit_alpha(pattern.values, ideal.gains);
}

double design_objective(const Matrix& r, double alpha, const RealVector& gains,
                        const SteeringGrid& grid) {
  if (gains.size() != grid.size()) throw DimensionError("design_objective: gains length mismatch");
  return (alpha * gains - beampattern(r, grid).values).squaredNorm();
}

CovarianceTarget design_covariance(const IdealPattern& ideal, const SteeringGrid& grid,
                                   PowerMode mode, double power,
                                   const std::optional<Matrix>& zf_channels,
                                   const DesignOptions& options) {
  return design_covariance(ideal.gains, grid, mode, power, zf_channels, options);
}

CovarianceTarget design_covariance(const RealVector& gains, const SteeringGrid& grid,
                                   PowerMode mode, double power,
                                   const std::optional<Matrix>& zf_channels,
                                   const DesignOptions& options) {
  if (gains.size() != grid.size()) throw DimensionError("design_covariance: gains length mismatch");
  if (!(power > 0.0)) throw std::invalid_argument("design_covariance: power must be > 0");
  if ((gains.array() < 0.0).any()) throw std::invalid_argument("design_covariance: negative gains");
  const Eigen::Index n = grid.n_antennas();

  const Matrix basis = zf_channels ? zero_forcing_basis(*zf_channels, n) : Matrix::Identity(n, n);
  const ConstraintSet constraints(basis, mode, power, options);
  const Matrix b = basis.adjoint() * grid.steering();  // reduced steering, d x M

  auto pattern_of = [&b](const Matrix& q) -> RealVector {
    return (b.adjoint() * q).cwiseProduct(b.transpose()).rowwise().sum().real();
  };
  // Objective with alpha eliminated in closed form.
  auto objective_of = [&](const Matrix& q, double* alpha_out) {
    const RealVector p = pattern_of(q);
    const double a = fit_alpha(p, gains);
    if (alpha_out) *alpha_out = a;
    return (a * gains - p).squaredNorm();
  };

  // Lipschitz constant of the gradient: 2 * largest eigenvalue of |B^H B|^2.
  const RealMatrix gram = (b.adjoint() * b).cwiseAbs2();
  Eigen::SelfAdjointEigenSolver<RealMatrix> gram_eig(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * gram_eig.eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;

  const auto d = constraints.reduced_dim();
  Matrix q = constraints.project(Matrix::Identity(d, d) * (power / static_cast<double>(n)));
  double value = objective_of(q, nullptr);

  CovarianceTarget out;
  out.power_mode = mode;
  out.power = power;
  out.zf_channels = zf_channels;
  out.objective_history.push_back(value);

  // Monotone FISTA: momentum on the extrapolated point, but the iterate only
  // moves when the objective does not increase.
  Matrix y = q;
  double t = 1.0;
  constexpr int kWindow = 10;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    double a = 0.0;
    const RealVector p = pattern_of(y);
    a = fit_alpha(p, gains);
    const RealVector e = a * gains - p;
    const Matrix grad = -2.0 * b * e.cast<Complex>().asDiagonal() * b.adjoint();
    const Matrix z = constraints.project(y - step * grad);
    const double z_value = objective_of(z, nullptr);

    const Matrix q_prev = q;
    if (z_value <= value) {
      q = z;
      value = z_value;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = q + (t / t_next) * (z - q) + ((t - 1.0) / t_next) * (q - q_prev);
    t = t_next;
    out.objective_history.push_back(value);

    const auto h = out.objective_history.size();
    if (h > kWindow) {
      const double drop = out.objective_history[h - 1 - kWindow] - value;
      if (drop <= options.relative_tolerance * value) {
        ++it;
        break;
      }
    }
  }

  // Lift and clean up: the diagonal congruence makes the per-antenna constraint
  // exact while keeping R PSD; the leakage it introduces is second order.
  Matrix r = hermitian_part(constraints.lift(q));
  if (mode == PowerMode::per_antenna) {
    const double level = power / static_cast<double>(n);
    const RealVector diag = r.diagonal().real();
    if ((diag.array() <= 0.0).any()) throw InfeasibleDesign("design_covariance: zero diagonal entry");
    const RealVector scale = (level / diag.array()).sqrt();
    r = scale.cast<Complex>().asDiagonal() * r * scale.cast<Complex>().asDiagonal();
    for (Eigen::Index k = 0; k < n; ++k) r(k, k) = Complex(level, 0.0);
  } else {
    r *= power / r.trace().real();
  }
  r = hermitian_part(r);

  out.r = r;
  out.iterations = it;
  const Beampattern final_pattern = beampattern(r, grid);
  out.alpha_scale = fit_alpha(final_pattern.values, gains);
  out.objective = (out.alpha_scale * gains - final_pattern.values).squaredNorm();
  return out;
}

double max_leakage(const Matrix& r, const Matrix& f) {
  require_shape("max_leakage", r.rows(), r.cols(), f.rows(), f.rows());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < f.cols(); ++i) {
    const Vector fc = f.col(i).conjugate();
    worst = std::max(worst, fc.dot(r * fc).real());
  }
  return worst;
}

}  // namespace radcom
