#include "radcom/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace radcom {

namespace {

void check_user(int i, Eigen::Index k) {
  if (i < 0 || i >= k) throw std::out_of_range("user index " + std::to_string(i) + " out of range");
}

// y(i, k) = c_i^T t_k
Matrix cross_gains(const Matrix& t, const Matrix& c) {
  if (t.rows() != c.rows()) throw DimensionError("beamformer rows differ from channel rows");
  return c.transpose() * t;
}

RealVector alphas_from_gains(const Matrix& y, const RealVector& gamma) {
  const Eigen::Index k = y.rows();
  RealVector a(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double own = std::norm(y(i, i));
    const double total = y.row(i).squaredNorm();
    a(i) = (1.0 + gamma(i)) * own - gamma(i) * total;
  }
  return a;
}

// sum_i coeff_i G_i = conj(C) D, row i of D being
// coeff_i ((1 + Gamma_i) y_ii e_i^T - Gamma_i y(i, :)).
Matrix weighted_g_sum(const Matrix& c, const Matrix& y, const RealVector& gamma,
                      const RealVector& coeff) {
  Matrix d = y;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    d.row(i) *= -gamma(i);
    d(i, i) += (1.0 + gamma(i)) * y(i, i);
    d.row(i) *= coeff(i);
  }
  return c.conjugate() * d;
}

struct FitTerm {
  double cost;
  Matrix grad;
};

// ||T T^H - R||_F^2 and its gradient 4 (T T^H - R) T.
FitTerm covariance_fit(const Matrix& t, const Matrix& r, bool want_grad) {
  const Matrix e = t * t.adjoint() - r;
  FitTerm out{e.squaredNorm(), Matrix()};
  if (want_grad) out.grad = 4.0 * e * t;
  return out;
}

void check_shapes(const Matrix& t, const ProblemData& data) {
  require_shape("objective", t.rows(), t.cols(), data.h.rows(), data.h.cols());
}

RealVector offsets(const RealVector& gamma, double n0) { return gamma * n0; }

}  // namespace

void ProblemData::validate() const {
  const auto n = h.rows();
  const auto k = h.cols();
  require_shape("ProblemData: R", r.rows(), r.cols(), n, n);
  if (gamma.size() != k) throw DimensionError("ProblemData: one SINR threshold per user required");
  if (hermitian_defect(r) > 1e-10) throw std::invalid_argument("ProblemData: R is not Hermitian");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(gamma(i) > 0.0)) throw std::invalid_argument("ProblemData: SINR thresholds must be > 0");
  }
  if (!(n0 > 0.0)) throw std::invalid_argument("ProblemData: noise power must be > 0");
  if (rho1 < 0.0 || rho2 < 0.0 || (rho1 == 0.0 && rho2 == 0.0)) {
    throw std::invalid_argument("ProblemData: weights must be >= 0 and not both zero");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("ProblemData: epsilon must be > 0");
}

double sinr_shared(const Matrix& t, const Matrix& h, double n0, int i) {
  check_user(i, h.cols());
  if (t.cols() != h.cols()) throw DimensionError("sinr_shared: one beamformer column per user");
  const Matrix y = cross_gains(t, h);
  const double own = std::norm(y(i, i));
  const double interference = y.row(i).squaredNorm() - own;
  return own / (interference + n0);
}

double sinr_separated(const Matrix& w, const Matrix& g, const Matrix& f, const Matrix& r1,
                      double n0, int i) {
  check_user(i, g.cols());
  if (w.cols() != g.cols() || f.cols() != g.cols()) {
    throw DimensionError("sinr_separated: user counts differ");
  }
  require_shape("sinr_separated: R1", r1.rows(), r1.cols(), f.rows(), f.rows());
  const Matrix y = cross_gains(w, g);
  const double own = std::norm(y(i, i));
  const double interference = y.row(i).squaredNorm() - own;
  const Vector fc = f.col(i).conjugate();
  const double leakage = fc.dot(r1 * fc).real();
  return own / (interference + leakage + n0);
}

double alpha(const Matrix& t, const Matrix& h, const RealVector& gamma, int i) {
  check_user(i, h.cols());
  return alphas(t, h, gamma)(i);
}

RealVector alphas(const Matrix& t, const Matrix& h, const RealVector& gamma) {
  if (gamma.size() != h.cols()) throw DimensionError("alphas: one threshold per user required");
  return alphas_from_gains(cross_gains(t, h), gamma);
}

Matrix g_matrix(const Matrix& t, const Matrix& h, const RealVector& gamma, int i) {
  check_user(i, h.cols());
  RealVector coeff = RealVector::Zero(h.cols());
  coeff(i) = 1.0;
  return weighted_g_sum(h, cross_gains(t, h), gamma, coeff);
}

double lse(const RealVector& alphas, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("lse: epsilon must be > 0");
  if (alphas.size() == 0) throw std::invalid_argument("lse: empty input");
  // Written as max + eps log(s) with 1 <= s <= K so that both bounds
  // survive rounding.
  const double top = (-alphas).maxCoeff();
  const double s = ((-alphas.array() - top) / epsilon).exp().sum();
  return top + epsilon * std::log(s);
}

RealVector lse_weights(const RealVector& alphas, double epsilon) {
  const RealVector z = -alphas / epsilon;
  RealVector w = (z.array() - z.maxCoeff()).exp();
  return w / w.sum();
}

// ------------------------------------------------------------------ f1/f2

double f1_cost(const Matrix& t, const ProblemData& data) {
  check_shapes(t, data);
  const RealVector a = alphas(t, data.h, data.gamma);
  const double penalty = (a - offsets(data.gamma, data.n0)).squaredNorm();
  return data.rho1 * covariance_fit(t, data.r, false).cost + data.rho2 * penalty;
}

Matrix f1_grad(const Matrix& t, const ProblemData& data) {
  check_shapes(t, data);
  const Matrix y = cross_gains(t, data.h);
  const RealVector a = alphas_from_gains(y, data.gamma);
  const RealVector residual = a - offsets(data.gamma, data.n0);
  return data.rho1 * covariance_fit(t, data.r, true).grad +
         4.0 * data.rho2 * weighted_g_sum(data.h, y, data.gamma, residual);
}

double f2_cost(const Matrix& t, const ProblemData& data) {
  check_shapes(t, data);
  const RealVector a = alphas(t, data.h, data.gamma);
  return data.rho1 * covariance_fit(t, data.r, false).cost + data.rho2 * lse(a, data.epsilon);
}

Matrix f2_grad(const Matrix& t, const ProblemData& data) {
  check_shapes(t, data);
  const Matrix y = cross_gains(t, data.h);
  const RealVector a = alphas_from_gains(y, data.gamma);
  const RealVector w = lse_weights(a, data.epsilon);
  return data.rho1 * covariance_fit(t, data.r, true).grad -
         2.0 * data.rho2 * weighted_g_sum(data.h, y, data.gamma, w);
}

// ------------------------------------------------------------------ f3/f4
// With X = T^H the fit term is ||X^H X - R||_F^2 and the gradient w.r.t. X is
// the adjoint of the gradient w.r.t. T.

double f3_cost(const Matrix& x, const ProblemData& data) { return f1_cost(x.adjoint(), data); }
Matrix f3_grad(const Matrix& x, const ProblemData& data) { return f1_grad(x.adjoint(), data).adjoint(); }
double f4_cost(const Matrix& x, const ProblemData& data) { return f2_cost(x.adjoint(), data); }
Matrix f4_grad(const Matrix& x, const ProblemData& data) { return f2_grad(x.adjoint(), data).adjoint(); }

Objective make_objective(PowerMode mode, Penalty penalty, const ProblemData& data) {
  data.validate();
  const bool total = mode == PowerMode::total;
  const bool sum_square = penalty == Penalty::sum_square;
  auto cost = total ? (sum_square ? &f1_cost : &f2_cost) : (sum_square ? &f3_cost : &f4_cost);
  auto grad = total ? (sum_square ? &f1_grad : &f2_grad) : (sum_square ? &f3_grad : &f4_grad);
  return Objective{[data, cost](const Matrix& v) { return cost(v, data); },
                   [data, grad](const Matrix& v) { return grad(v, data); }};
}

// -------------------------------------------------------------- separated

void SeparatedProblemData::finalize() {
  const auto k = g.cols();
  if (f.cols() != k || gamma.size() != k) throw DimensionError("SeparatedProblemData: user counts differ");
  require_shape("SeparatedProblemData: R1", r1.rows(), r1.cols(), f.rows(), f.rows());
  if (a1.rows() != f.rows() || a2.rows() != g.rows() || a1.cols() != a2.cols()) {
    throw DimensionError("SeparatedProblemData: steering partitions do not match the split");
  }
  if (!(n0 > 0.0)) throw std::invalid_argument("SeparatedProblemData: noise power must be > 0");
  radar_pattern = (a1.adjoint() * r1 * a1).diagonal().real();
  noise.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vector fc = f.col(i).conjugate();
    noise(i) = n0 + fc.dot(r1 * fc).real();
  }
}

namespace {

// diag(A2^H W W^H A2)
RealVector comm_pattern(const Matrix& w, const SeparatedProblemData& data) {
  return (w.adjoint() * data.a2).colwise().squaredNorm().transpose();
}

double sigma_for(const RealVector& d, const RealVector& r) {
  const double rr = r.squaredNorm();
  if (rr <= 0.0) return 0.0;
  return std::max(0.0, d.dot(r) / rr);
}

}  // namespace

double zf_sigma(const Matrix& w, const SeparatedProblemData& data) {
  return sigma_for(comm_pattern(w, data), data.radar_pattern);
}

double zf_comm_cost(const Matrix& w, const SeparatedProblemData& data) {
  require_shape("zf_comm_cost", w.rows(), w.cols(), data.g.rows(), data.g.cols());
  const RealVector d = comm_pattern(w, data);
  const RealVector e = d - sigma_for(d, data.radar_pattern) * data.radar_pattern;
  const RealVector a = alphas(w, data.g, data.gamma);
  const RealVector residual = a - data.gamma.cwiseProduct(data.noise);
  return data.rho1 * e.squaredNorm() + data.rho2 * residual.squaredNorm();
}

Matrix zf_comm_grad(const Matrix& w, const SeparatedProblemData& data) {
  require_shape("zf_comm_grad", w.rows(), w.cols(), data.g.rows(), data.g.cols());
  // sigma is the exact inner minimizer, so it is held fixed when differentiating.
  const RealVector d = comm_pattern(w, data);
  const RealVector e = d - sigma_for(d, data.radar_pattern) * data.radar_pattern;
  const Matrix fit = 4.0 * data.rho1 * (data.a2 * e.cast<Complex>().asDiagonal() * (data.a2.adjoint() * w));
  const Matrix y = cross_gains(w, data.g);
  const RealVector residual = alphas_from_gains(y, data.gamma) - data.gamma.cwiseProduct(data.noise);
  return fit + 4.0 * data.rho2 * weighted_g_sum(data.g, y, data.gamma, residual);
}

Objective make_zf_objective(const SeparatedProblemData& data) {
  return Objective{[data](const Matrix& w) { return zf_comm_cost(w, data); },
                   [data](const Matrix& w) { return zf_comm_grad(w, data); }};
}

}  // namespace radcom
