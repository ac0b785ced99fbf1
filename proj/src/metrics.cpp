#include "radcom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radcom/objectives.hpp"

namespace radcom {

int Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Histogram make_histogram(const std::vector<double>& values, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("make_histogram: bin width must be > 0");
  Histogram hist;
  hist.bin_width = bin_width;
  if (values.empty()) return hist;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const auto first = static_cast<long long>(std::floor(*lo / bin_width));
  const auto last = static_cast<long long>(std::floor(*hi / bin_width));
  hist.origin = static_cast<double>(first) * bin_width;
  hist.counts.assign(static_cast<std::size_t>(last - first + 1), 0);
  for (double v : values) {
    const auto j = static_cast<long long>(std::floor(v / bin_width)) - first;
    ++hist.counts[static_cast<std::size_t>(j)];
  }
  return hist;
}

SinrStats achieved_sinr_stats(const Matrix& t, const Matrix& h, double n0) {
  SinrStats stats;
  const int k = static_cast<int>(h.cols());
  stats.sinr_db.reserve(k);
  for (int i = 0; i < k; ++i) stats.sinr_db.push_back(linear_to_db(sinr_shared(t, h, n0, i)));
  if (k > 0) {
    stats.mean_db = std::accumulate(stats.sinr_db.begin(), stats.sinr_db.end(), 0.0) / k;
    stats.min_db = *std::min_element(stats.sinr_db.begin(), stats.sinr_db.end());
  }
  stats.histogram = make_histogram(stats.sinr_db);
  return stats;
}

Beampattern composite_pattern_separated(const Matrix& r1, const Matrix& w, const SteeringGrid& grid) {
  const auto n_r = r1.rows();
  const auto n_c = w.rows();
  if (r1.cols() != n_r || n_r + n_c != grid.n_antennas()) {
    throw DimensionError("composite_pattern_separated: N_R + N_C must equal the array size");
  }
  const Matrix a1 = grid.subarray(0, static_cast<int>(n_r));
  const Matrix a2 = grid.subarray(static_cast<int>(n_r), static_cast<int>(n_c));
  Beampattern out;
  out.values = (a1.adjoint() * r1).cwiseProduct(a1.transpose()).rowwise().sum().real();
  if (w.cols() > 0) out.values += (w.adjoint() * a2).colwise().squaredNorm().transpose();
  return out;
}

double fraction_within(const std::vector<double>& values, double center, double half_width) {
  if (values.empty()) return 0.0;
  const auto inside = std::count_if(values.begin(), values.end(), [&](double v) {
    return std::abs(v - center) <= half_width;
  });
  return static_cast<double>(inside) / static_cast<double>(values.size());
}

}  // namespace radcom
