#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "radcom/manifolds.hpp"
#include "radcom/types.hpp"

namespace radcom {

/// Backtracking parameters: trial steps initial_step * contraction^m.
struct ArmijoConfig {
  double initial_step = 1.0;
  double contraction = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 50;
};

struct SolverConfig {
  double delta = 1e-6;  // stop when the Riemannian gradient norm drops below this
  int max_iterations = 1000;
  ArmijoConfig armijo;
  bool pr_plus = true;          // clamp the Polak-Ribiere coefficient at zero
  bool descent_restart = true;  // fall back to -grad when the CG direction is not a descent direction

  void validate() const;
};

enum class Termination { gradient_converged, max_iterations, line_search_failure };
std::string to_string(Termination t);

struct TraceEntry {
  int iteration;
  double cost;
  double grad_norm;
  double step;
  std::int64_t cumulative_flops;
};

struct SolverReport {
  int iterations = 0;
  double final_cost = 0.0;
  double final_grad_norm = 0.0;
  std::vector<TraceEntry> trace;
  Termination termination = Termination::max_iterations;
  std::int64_t flops_model = 0;
  int restarts = 0;
  // Worst values observed over all iterates.
  double max_constraint_violation = 0.0;
  double max_tangency_residual = 0.0;
};

/// Per-iteration flop model; `total` keeps only the leading terms.
struct FlopBreakdown {
  std::int64_t retraction;
  std::int64_t euclidean_gradient;
  std::int64_t riemannian_gradient;
  std::int64_t transport;
  std::int64_t inner_product;
  std::int64_t total;
};

FlopBreakdown flop_breakdown(std::int64_t n, std::int64_t k);
std::int64_t flops_per_iteration(std::int64_t n, std::int64_t k);

class LineSearchFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

/// inner(grad_new, grad_new - grad_old_transported) / grad_old_norm_sq,
/// optionally clamped at zero.
double pr_beta(const TangentVector& grad_new, const TangentVector& grad_old_transported,
               double grad_old_norm_sq, bool pr_plus = true);

template <class Manifold>
struct ArmijoResult {
  double step;
  typename Manifold::Point point;
  double cost;
  int backtracks;
};

/// Backtracking line search along a retraction curve.
///
/// Returns the first (largest) step h = h0 c^m for which
/// cost(retract(point, direction, h)) <= cost_at_point + c1 h <grad, direction>.
/// Throws std::invalid_argument when `direction` is not a descent direction
/// and LineSearchFailure when all max_backtracks + 1 trial steps fail.
template <class Manifold>
ArmijoResult<Manifold> armijo_search(const std::function<double(const Matrix&)>& cost,
                                     const Manifold& manifold,
                                     const typename Manifold::Point& point, double cost_at_point,
                                     const TangentVector& direction, const TangentVector& grad,
                                     const ArmijoConfig& cfg) {
  const double slope = inner(grad.mat, direction.mat);
  if (!(slope < 0.0)) throw std::invalid_argument("armijo_search: not a descent direction");
  double step = cfg.initial_step;
  for (int m = 0; m <= cfg.max_backtracks; ++m, step *= cfg.contraction) {
    try {
      auto candidate = manifold.retract(point, direction, step);
      const double value = cost(candidate.mat());
      if (value <= cost_at_point + cfg.sufficient_decrease * step * slope) {
        return ArmijoResult<Manifold>{step, std::move(candidate), value, m};
      }
    } catch (const NumericError&) {
      // degenerate retraction: try a shorter step
    }
  }
  throw LineSearchFailure("armijo_search: no acceptable step within " +
                          std::to_string(cfg.max_backtracks) + " backtracks");
}

template <class Manifold>
struct RcgResult {
  typename Manifold::Point point;
  SolverReport report;
};

/// Riemannian conjugate gradient with Armijo steps and Polak-Ribiere
/// directions. Each iteration: line search along the current direction,
/// gradient at the new point, transport of the previous gradient and
/// direction, then the new direction -grad + beta * transported direction.
///
/// A line-search failure ends the run with the last accepted iterate.
template <class Manifold>
RcgResult<Manifold> rcg_minimize(const Objective& objective, const Manifold& manifold,
                                 typename Manifold::Point start, const SolverConfig& cfg) {
  cfg.validate();
  const auto [flop_n, flop_k] = manifold.flop_dims(start);
  const std::int64_t flops_iter = flops_per_iteration(flop_n, flop_k);

  SolverReport report;
  auto point = std::move(start);
  double cost = objective.cost(point.mat());
  TangentVector grad = manifold.project(point, objective.grad(point.mat()));
  double grad_norm_sq = inner(grad.mat, grad.mat);
  TangentVector direction{-grad.mat, point.id()};

  auto observe = [&](const typename Manifold::Point& p, const TangentVector& g) {
    report.max_constraint_violation =
        std::max(report.max_constraint_violation, manifold.constraint_violation(p));
    report.max_tangency_residual =
        std::max(report.max_tangency_residual, manifold.tangency_residual(p, g.mat));
  };
  observe(point, grad);
  report.trace.push_back({0, cost, std::sqrt(grad_norm_sq), 0.0, 0});

  bool line_search_failed = false;
  int iteration = 0;
  while (std::sqrt(grad_norm_sq) >= cfg.delta && iteration < cfg.max_iterations) {
    if (!(inner(grad.mat, direction.mat) < 0.0)) {
      if (!cfg.descent_restart) {
        line_search_failed = true;
        break;
      }
      direction = TangentVector{-grad.mat, point.id()};
      ++report.restarts;
    }
    ArmijoResult<Manifold> accepted{0.0, point, cost, 0};
    try {
      accepted = armijo_search(objective.cost, manifold, point, cost, direction, grad, cfg.armijo);
    } catch (const LineSearchFailure&) {
      line_search_failed = true;
      break;
    }

    auto next = std::move(accepted.point);
    TangentVector next_grad = manifold.project(next, objective.grad(next.mat()));
    const TangentVector grad_moved = manifold.transport(next, grad);
    const TangentVector direction_moved = manifold.transport(next, direction);
    const double beta = pr_beta(next_grad, grad_moved, grad_norm_sq, cfg.pr_plus);

    direction = TangentVector{-next_grad.mat + beta * direction_moved.mat, next.id()};
    point = std::move(next);
    grad = std::move(next_grad);
    grad_norm_sq = inner(grad.mat, grad.mat);
    cost = accepted.cost;
    ++iteration;
    observe(point, grad);
    report.trace.push_back({iteration, cost, std::sqrt(grad_norm_sq), accepted.step,
                            flops_iter * iteration});
  }

  report.iterations = iteration;
  report.final_cost = cost;
  report.final_grad_norm = std::sqrt(grad_norm_sq);
  report.flops_model = flops_iter * iteration;
  if (report.final_grad_norm < cfg.delta) {
    report.termination = Termination::gradient_converged;
  } else if (line_search_failed) {
    report.termination = Termination::line_search_failure;
  } else {
    report.termination = Termination::max_iterations;
  }
  return RcgResult<Manifold>{std::move(point), std::move(report)};
}

/// Columns: iteration, cost, grad_norm, step, cumulative_flops.
void write_trace_csv(std::ostream& os, const SolverReport& report);

}  // namespace radcom
