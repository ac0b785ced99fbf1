#pragma once

#include <vector>

#include "radcom/types.hpp"

namespace radcom {

/// Uniform linear array response sampled on an angular grid.
///
/// Column m of `steering()` is a(theta_m) with entry k equal to
/// exp(j 2 pi spacing k sin(theta_m)).
class SteeringGrid {
 public:
  /// Uniform grid of `n_angles` points spanning [-pi/2, pi/2].
  SteeringGrid(int n_angles, int n_antennas, double spacing = 0.5);
  /// Arbitrary strictly increasing angles in [-pi/2, pi/2].
  SteeringGrid(std::vector<double> angles, int n_antennas, double spacing = 0.5);

  int size() const { return static_cast<int>(angles_.size()); }
  int n_antennas() const { return n_antennas_; }
  double spacing() const { return spacing_; }
  const std::vector<double>& angles() const { return angles_; }
  /// N x M steering matrix.
  const Matrix& steering() const { return steering_; }

  /// Rows [first, first + count) of the steering matrix, i.e. the response of
  /// a contiguous subarray.
  Matrix subarray(int first, int count) const;

 private:
  std::vector<double> angles_;
  int n_antennas_;
  double spacing_;
  Matrix steering_;
};

struct Beam {
  double center;      // radians
  double half_width;  // radians
};

struct IdealPattern {
  RealVector gains;  // 0/1 mask over the grid
  std::vector<Beam> beams;
};

struct Beampattern {
  RealVector values;  // linear power per grid point
  int size() const { return static_cast<int>(values.size()); }
};

Vector steering_vector(double theta, int n, double delta);

/// a(theta_m)^H R a(theta_m) for every grid angle.
Beampattern beampattern(const Matrix& r, const SteeringGrid& grid);

IdealPattern ideal_pattern(const std::vector<Beam>& beams, const SteeringGrid& grid);

/// Grid points inside any beam's half-width, widened by `guard` points on each
/// side of every contiguous region.
std::vector<bool> mainlobe_mask(const std::vector<Beam>& beams, const SteeringGrid& grid,
                                int guard = 1);

/// Peak-to-sidelobe ratio in dB.
double pslr(const Beampattern& pattern, const std::vector<bool>& mainlobe_mask);

/// Mean squared difference between two patterns.
double pattern_mse(const Beampattern& p_radar, const Beampattern& p_radcom);

/// Indices m where the pattern has a local maximum (ties count, end points
/// compare against their single neighbour).
std::vector<int> local_maxima(const Beampattern& pattern);

}  // namespace radcom
