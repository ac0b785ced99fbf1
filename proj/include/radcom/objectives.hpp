#pragma once

#include "radcom/types.hpp"

namespace radcom {

/// Inputs shared by the four weighted beamforming costs.
struct ProblemData {
  Matrix h;           // N x K channel, column i = h_i
  Matrix r;           // N x N radar covariance target
  RealVector gamma;   // K linear SINR thresholds
  double n0 = 1.0;    // noise power, linear
  double rho1 = 1.0;  // radar weight
  double rho2 = 1.0;  // communication weight
  double epsilon = 0.1;

  int n_antennas() const { return static_cast<int>(h.rows()); }
  int n_users() const { return static_cast<int>(h.cols()); }
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

double sinr_shared(const Matrix& t, const Matrix& h, double n0, int i);

/// Separated-deployment SINR, including radar leakage tr(f_i^* f_i^T R1).
double sinr_separated(const Matrix& w, const Matrix& g, const Matrix& f, const Matrix& r1,
                      double n0, int i);

/// (1 + Gamma_i) tr(B_i t_i t_i^H) - Gamma_i tr(B_i T T^H), B_i = h_i^* h_i^T.
double alpha(const Matrix& t, const Matrix& h, const RealVector& gamma, int i);
RealVector alphas(const Matrix& t, const Matrix& h, const RealVector& gamma);

/// B_i ((1 + Gamma_i) t_i e_i^T - Gamma_i T); d alpha_i / d conj(T).
Matrix g_matrix(const Matrix& t, const Matrix& h, const RealVector& gamma, int i);

/// Smoothed max: epsilon log sum exp(-alpha_i / epsilon).
double lse(const RealVector& alphas, double epsilon);

/// exp(-alpha_i/epsilon) normalized to sum one, max-shifted.
RealVector lse_weights(const RealVector& alphas, double epsilon);

// Total power, variable T (N x K).
double f1_cost(const Matrix& t, const ProblemData& data);
Matrix f1_grad(const Matrix& t, const ProblemData& data);
double f2_cost(const Matrix& t, const ProblemData& data);
Matrix f2_grad(const Matrix& t, const ProblemData& data);

// Per-antenna power, variable X = T^H (K x N).
double f3_cost(const Matrix& x, const ProblemData& data);
Matrix f3_grad(const Matrix& x, const ProblemData& data);
double f4_cost(const Matrix& x, const ProblemData& data);
Matrix f4_grad(const Matrix& x, const ProblemData& data);

/// Binds one of f1..f4 to `data`: total power selects f1/f2, per-antenna
/// f3/f4; the penalty selects sum-square or log-sum-exp. `data` is copied.
Objective make_objective(PowerMode mode, Penalty penalty, const ProblemData& data);

/// Separated deployment: communication beamformer W (N_C x K) shaped to
/// follow a zero-forced radar covariance R1 (N_R x N_R).
struct SeparatedProblemData {
  Matrix g;   // N_C x K
  Matrix f;   // N_R x K
  Matrix r1;  // N_R x N_R
  Matrix a1;  // N_R x M
  Matrix a2;  // N_C x M
  RealVector gamma;
  double n0 = 1.0;
  double rho1 = 1.0;
  double rho2 = 1.0;

  // Derived by finalize().
  RealVector radar_pattern;  // diag(A1^H R1 A1)
  RealVector noise;          // N0 + tr(f_i^* f_i^T R1)

  /// Computes the derived fields; call after the inputs are set.
  void finalize();
  int n_users() const { return static_cast<int>(g.cols()); }
};

/// Closed-form nonnegative least-squares scale matching the communication
/// pattern to the radar pattern for this W.
double zf_sigma(const Matrix& w, const SeparatedProblemData& data);
double zf_comm_cost(const Matrix& w, const SeparatedProblemData& data);
Matrix zf_comm_grad(const Matrix& w, const SeparatedProblemData& data);
Objective make_zf_objective(const SeparatedProblemData& data);

}  // namespace radcom
