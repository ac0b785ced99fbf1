#include "radcom/rcg_solver.hpp"

#include <cstdio>
#include <ostream>

namespace radcom {

void SolverConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("SolverConfig: delta must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  if (!(armijo.initial_step > 0.0)) throw std::invalid_argument("SolverConfig: initial step must be > 0");
  if (!(armijo.contraction > 0.0 && armijo.contraction < 1.0)) {
    throw std::invalid_argument("SolverConfig: contraction must lie in (0, 1)");
  }
  if (!(armijo.sufficient_decrease > 0.0 && armijo.sufficient_decrease < 1.0)) {
    throw std::invalid_argument("SolverConfig: sufficient decrease must lie in (0, 1)");
  }
  if (armijo.max_backtracks < 0) throw std::invalid_argument("SolverConfig: max_backtracks must be >= 0");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::gradient_converged:
      return "gradient_converged";
    case Termination::max_iterations:
      return "max_iterations";
    case Termination::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

FlopBreakdown flop_breakdown(std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("flop_breakdown: n and k must be >= 1");
  FlopBreakdown b{};
  b.retraction = 14 * n * k;
  b.euclidean_gradient = 23 * n * n * k + 12 * n * k * k;
  b.riemannian_gradient = 12 * n * k;
  b.transport = 12 * n * k;
  b.inner_product = 8 * n * k;
  // Lower-order NK terms are dropped from the total.
  b.total = b.euclidean_gradient;
  return b;
}

std::int64_t flops_per_iteration(std::int64_t n, std::int64_t k) { return flop_breakdown(n, k).total; }

double pr_beta(const TangentVector& grad_new, const TangentVector& grad_old_transported,
               double grad_old_norm_sq, bool pr_plus) {
  if (!(grad_old_norm_sq > 0.0)) throw std::invalid_argument("pr_beta: previous gradient norm must be > 0");
  const double beta = inner(grad_new.mat, grad_new.mat - grad_old_transported.mat) / grad_old_norm_sq;
  return pr_plus ? std::max(0.0, beta) : beta;
}

void write_trace_csv(std::ostream& os, const SolverReport& report) {
  os << "iteration,cost,grad_norm,step,cumulative_flops\n";
  char buf[160];
  for (const auto& e : report.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%lld\n", e.iteration, e.cost, e.grad_norm,
                  e.step, static_cast<long long>(e.cumulative_flops));
    os << buf;
  }
}

}  // namespace radcom
