#pragma once

#include <vector>

#include "radcom/array_model.hpp"
#include "radcom/types.hpp"

namespace radcom {

struct TradeoffPoint {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double gamma_db = 0.0;
  double avg_sinr_db = 0.0;
  double pslr_db = 0.0;
  double mse = 0.0;
  int trials = 0;
};

/// Fixed-width histogram; bin j covers [origin + j w, origin + (j + 1) w).
struct Histogram {
  double bin_width = 0.5;
  double origin = 0.0;
  std::vector<int> counts;

  double bin_low(std::size_t j) const { return origin + bin_width * static_cast<double>(j); }
  int total() const;
};

/// Bins aligned to multiples of `bin_width`.
Histogram make_histogram(const std::vector<double>& values, double bin_width = 0.5);

struct SinrStats {
  std::vector<double> sinr_db;  // one per user
  double mean_db = 0.0;         // mean of the dB values
  double min_db = 0.0;
  Histogram histogram;
};

/// Per-user SINR of the shared beamformer T (N x K) over channel H.
SinrStats achieved_sinr_stats(const Matrix& t, const Matrix& h, double n0);

/// a1^H R1 a1 + a2^H (sum_k w_k w_k^H) a2 with the radar subarray first.
Beampattern composite_pattern_separated(const Matrix& r1, const Matrix& w, const SteeringGrid& grid);

/// Fraction of values within [center - half_width, center + half_width].
double fraction_within(const std::vector<double>& values, double center, double half_width);

}  // namespace radcom
