#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wavinv/array2d.hpp"

namespace wavinv::darcy {

struct SensorObservation {
  int grid_size = 10;
  std::vector<double> readings;  // row-major over the sensor lattice
  double noise_fraction = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Sensor i along each axis sits at (i + 1/2) / n.
double sensor_coordinate(int i, int n);

// Bilinear interpolation of the gauge-fixed (zero-mean) pressure at the n x n
// sensor lattice over [0,1]^2; row index runs along y.
std::vector<double> observe(const GridField2D& pressure, int n);

// Adds i.i.d. N(0, sigma^2) noise with sigma = noise_fraction * sample
// standard deviation of the clean readings.
SensorObservation add_noise(std::span<const double> readings, double noise_fraction, std::uint64_t seed);

}  // namespace wavinv::darcy
