#include "wavinv/darcy/observation.hpp"

#include <cmath>
#include <random>
#include <string>

#include "wavinv/darcy/problem.hpp"
#include "wavinv/error.hpp"

namespace wavinv::darcy {

void SensorObservation::validate() const {
  if (grid_size < 1) throw ParameterError("sensor grid size must be positive");
  if (readings.size() != static_cast<std::size_t>(grid_size) * grid_size)
    throw ShapeError("observation has " + std::to_string(readings.size()) + " readings, grid " +
                     std::to_string(grid_size) + "x" + std::to_string(grid_size) + " needs " +
                     std::to_string(grid_size * grid_size));
  if (!(noise_sigma >= 0.0)) throw ParameterError("noise sigma must be >= 0");
}

double sensor_coordinate(int i, int n) { return (i + 0.5) / n; }

std::vector<double> observe(const GridField2D& pressure, int n) {
  if (n < 2) throw ParameterError("sensor grid size must be >= 2");
  const std::size_t R = pressure.rows(), C = pressure.cols();
  if (R < 2 || C < 2 || pressure.sampling != Sampling::nodal)
    throw ShapeError("observe expects a nodal pressure grid");
  Array2D<double> p = pressure.values;
  remove_mean(p);
  const auto& d = pressure.domain;
  std::vector<double> out;
  out.reserve(std::size_t(n) * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = sensor_coordinate(ix, n), y = sensor_coordinate(iy, n);
      const double gx = (x - d.x0) / (d.x1 - d.x0) * double(C - 1);
      const double gy = (y - d.y0) / (d.y1 - d.y0) * double(R - 1);
      const auto c0 = std::min<std::size_t>(static_cast<std::size_t>(gx), C - 2);
      const auto r0 = std::min<std::size_t>(static_cast<std::size_t>(gy), R - 2);
      const double tx = gx - double(c0), ty = gy - double(r0);
      out.push_back((1 - ty) * ((1 - tx) * p(r0, c0) + tx * p(r0, c0 + 1)) +
                    ty * ((1 - tx) * p(r0 + 1, c0) + tx * p(r0 + 1, c0 + 1)));
    }
  return out;
}

SensorObservation add_noise(std::span<const double> readings, double noise_fraction, std::uint64_t seed) {
  if (!(noise_fraction >= 0.0)) throw ParameterError("noise fraction must be >= 0");
  const auto n = static_cast<int>(std::lround(std::sqrt(double(readings.size()))));
  if (std::size_t(n) * n != readings.size()) throw ShapeError("readings do not form a square sensor grid");
  SensorObservation obs;
  obs.grid_size = n;
  obs.noise_fraction = noise_fraction;
  obs.seed = seed;
  obs.readings.assign(readings.begin(), readings.end());
  double mean = 0.0;
  for (double v : readings) mean += v;
  mean /= double(readings.size());
  double ss = 0.0;
  for (double v : readings) ss += (v - mean) * (v - mean);
  const double sd = readings.size() > 1 ? std::sqrt(ss / double(readings.size() - 1)) : 0.0;
  obs.noise_sigma = noise_fraction * sd;
  if (obs.noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (auto& v : obs.readings) v += obs.noise_sigma * nd(rng);
  }
  return obs;
}

}  // namespace wavinv::darcy
