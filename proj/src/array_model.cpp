#include "radcom/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radcom {

namespace {

constexpr double kHalfPi = kPi / 2.0;
// Slack on the angular range so that grids built from degrees survive rounding.
constexpr double kAngleSlack = 1e-12;

void check_angle(double theta) {
  if (!(theta >= -kHalfPi - kAngleSlack && theta <= kHalfPi + kAngleSlack)) {
    throw std::domain_error("steering angle outside [-pi/2, pi/2]: " + std::to_string(theta));
  }
}

}  // namespace

Vector steering_vector(double theta, int n, double delta) {
  if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("steering_vector: spacing must be > 0");
  check_angle(theta);
  const double increment = 2.0 * kPi * delta * std::sin(theta);
  Vector a(n);
  a(0) = Complex(1.0, 0.0);
  for (int k = 1; k < n; ++k) a(k) = std::polar(1.0, increment * k);
  return a;
}

SteeringGrid::SteeringGrid(int n_angles, int n_antennas, double spacing)
    : SteeringGrid(
          [n_angles] {
            if (n_angles < 2) throw std::invalid_argument("SteeringGrid: need at least 2 angles");
            std::vector<double> angles(n_angles);
            for (int m = 0; m < n_angles; ++m) {
              angles[m] = -kHalfPi + kPi * static_cast<double>(m) / (n_angles - 1);
            }
            return angles;
          }(),
          n_antennas, spacing) {}

SteeringGrid::SteeringGrid(std::vector<double> angles, int n_antennas, double spacing)
    : angles_(std::move(angles)), n_antennas_(n_antennas), spacing_(spacing) {
  if (angles_.empty()) throw std::invalid_argument("SteeringGrid: empty angle list");
  for (std::size_t m = 0; m < angles_.size(); ++m) {
    check_angle(angles_[m]);
    if (m > 0 && !(angles_[m] > angles_[m - 1])) {
      throw std::invalid_argument("SteeringGrid: angles must be strictly increasing");
    }
  }
  steering_.resize(n_antennas_, static_cast<Eigen::Index>(angles_.size()));
  for (std::size_t m = 0; m < angles_.size(); ++m) {
    steering_.col(static_cast<Eigen::Index>(m)) = steering_vector(angles_[m], n_antennas_, spacing_);
  }
}

Matrix SteeringGrid::subarray(int first, int count) const {
  if (first < 0 || count < 0 || first + count > n_antennas_) {
    throw DimensionError("SteeringGrid::subarray: rows out of range");
  }
  return steering_.middleRows(first, count);
}

Beampattern beampattern(const Matrix& r, const SteeringGrid& grid) {
  require_shape("beampattern", r.rows(), r.cols(), grid.n_antennas(), grid.n_antennas());
  if (hermitian_defect(r) > 1e-10) {
    throw std::invalid_argument("beampattern: covariance is not Hermitian");
  }
  const Matrix& a = grid.steering();
  const Matrix ra = r * a;
  Beampattern out;
  out.values.resize(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    out.values(m) = a.col(m).dot(ra.col(m)).real();
  }
  return out;
}

IdealPattern ideal_pattern(const std::vector<Beam>& beams, const SteeringGrid& grid) {
  const auto& angles = grid.angles();
  for (const auto& b : beams) {
    if (b.center < angles.front() - kAngleSlack || b.center > angles.back() + kAngleSlack) {
      throw std::domain_error("ideal_pattern: beam center outside the grid");
    }
  }
  IdealPattern ideal;
  ideal.beams = beams;
  ideal.gains = RealVector::Zero(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    for (const auto& b : beams) {
      // Tolerance keeps edge points of degree-aligned grids inside the mask.
      if (std::abs(angles[m] - b.center) <= b.half_width + 1e-9) {
        ideal.gains(m) = 1.0;
        break;
      }
    }
  }
  return ideal;
}

std::vector<bool> mainlobe_mask(const std::vector<Beam>& beams, const SteeringGrid& grid,
                                int guard) {
  const IdealPattern core = ideal_pattern(beams, grid);
  const int m_total = grid.size();
  std::vector<bool> mask(m_total, false);
  for (int m = 0; m < m_total; ++m) {
    if (core.gains(m) == 0.0) continue;
    const int lo = std::max(0, m - guard);
    const int hi = std::min(m_total - 1, m + guard);
    for (int q = lo; q <= hi; ++q) mask[q] = true;
  }
  return mask;
}

double pslr(const Beampattern& pattern, const std::vector<bool>& mainlobe_mask) {
  if (static_cast<int>(mainlobe_mask.size()) != pattern.size()) {
    throw DimensionError("pslr: mask length differs from pattern length");
  }
  double main_peak = -1.0;
  double side_peak = -1.0;
  bool has_main = false;
  bool has_side = false;
  for (int m = 0; m < pattern.size(); ++m) {
    const double v = pattern.values(m);
    if (mainlobe_mask[m]) {
      main_peak = has_main ? std::max(main_peak, v) : v;
      has_main = true;
    } else {
      side_peak = has_side ? std::max(side_peak, v) : v;
      has_side = true;
    }
  }
  if (!has_main || !has_side) throw std::invalid_argument("pslr: empty mainlobe or sidelobe region");
  return 10.0 * std::log10(main_peak / side_peak);
}

double pattern_mse(const Beampattern& p_radar, const Beampattern& p_radcom) {
  if (p_radar.size() != p_radcom.size()) throw DimensionError("pattern_mse: length mismatch");
  if (p_radar.size() == 0) return 0.0;
  return (p_radar.values - p_radcom.values).squaredNorm() / p_radar.size();
}

std::vector<int> local_maxima(const Beampattern& pattern) {
  std::vector<int> peaks;
  const int m_total = pattern.size();
  const auto& v = pattern.values;
  for (int m = 0; m < m_total; ++m) {
    const bool left_ok = (m == 0) || v(m) >= v(m - 1);
    const bool right_ok = (m == m_total - 1) || v(m) >= v(m + 1);
    if (left_ok && right_ok) peaks.push_back(m);
  }
  return peaks;
}

}  // namespace radcom
