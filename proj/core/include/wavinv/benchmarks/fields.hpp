#pragma once

#include <cstdint>
#include <functional>

#include "wavinv/array2d.hpp"

namespace wavinv::benchmarks {

// ln k = 2(x + y - 1).
double log_k_linear(double x, double y);

// log_k_linear sampled on the 32x32 reporting grid over [0,1]^2 (x = c/32).
GridField2D field_linear();

// Grid with the given shape over [0,1]^2.
GridField2D make_grid(std::size_t n, Sampling sampling);
// Samples f(x, y) on the grid points of `grid`.
GridField2D sample_field(const GridField2D& grid, const std::function<double(double, double)>& f);

enum class Kernel {
  squared_exponential,  // s^2 exp(-r^2 / (2 l))
  exponential,          // s^2 exp(-r / l)
  wrapped_two_layer,    // warp x' = x + GP(0, s1^2 exp(-sum (dx/l1)^2)) per axis, then exponential on x'
};

struct GPSpec {
  Kernel kernel = Kernel::exponential;
  double strength = 1.0;      // s_g (s_{g,2} for the wrapped kernel)
  double length_scale = 0.3;  // l (l_2)
  double warp_strength = 0.1; // s_{g,1}, wrapped kernel only
  double warp_length = 0.3;   // l_1
  std::function<double(double, double)> mean;  // empty = zero mean
  std::uint64_t seed = 0;

  void validate() const;
};

// Kernel value at distance r for the stationary kernels.
double kernel_value(Kernel kernel, double strength, double length_scale, double r);

// One draw on the points of `grid` by dense Cholesky of the covariance
// matrix. Jitter starts at 1e-10 * s^2 on the diagonal and grows by 10x up to
// 1e-4 * s^2; SpecError if the factorization still fails.
GridField2D gp_sample(const GPSpec& spec, const GridField2D& grid);

// Two-layer draw: each warped coordinate is an independent GP around the
// identity, then the field is drawn with the exponential kernel on warped
// distances. With warp_strength -> 0 it reduces to gp_sample with the
// exponential kernel.
GridField2D wrapped_gp_sample(const GPSpec& spec, const GridField2D& grid);

}  // namespace wavinv::benchmarks
