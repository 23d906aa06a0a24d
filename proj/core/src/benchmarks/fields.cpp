#include "wavinv/benchmarks/fields.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wavinv/error.hpp"
#include "wavinv/smc/rng.hpp"

namespace wavinv::benchmarks {

double log_k_linear(double x, double y) { return 2.0 * (x + y - 1.0); }

GridField2D make_grid(std::size_t n, Sampling sampling) {
  GridField2D g;
  g.values = Array2D<double>(n, n);
  g.domain = {0.0, 1.0, 0.0, 1.0};
  g.sampling = sampling;
  return g;
}

GridField2D sample_field(const GridField2D& grid, const std::function<double(double, double)>& f) {
  GridField2D out = grid;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = f(out.x(c), out.y(r));
  return out;
}

GridField2D field_linear() { return sample_field(make_grid(32, Sampling::periodic), log_k_linear); }

void GPSpec::validate() const {
  if (!(strength > 0.0)) throw ParameterError("GP strength must be > 0");
  if (!(length_scale > 0.0)) throw ParameterError("GP length scale must be > 0");
  if (kernel == Kernel::wrapped_two_layer) {
    if (!(warp_strength >= 0.0)) throw ParameterError("warp strength must be >= 0");
    if (!(warp_length > 0.0)) throw ParameterError("warp length scale must be > 0");
  }
}

double kernel_value(Kernel kernel, double strength, double length_scale, double r) {
  const double s2 = strength * strength;
  switch (kernel) {
    case Kernel::squared_exponential:
      return s2 * std::exp(-r * r / (2.0 * length_scale));
    case Kernel::exponential:
    case Kernel::wrapped_two_layer:
      return s2 * std::exp(-r / length_scale);
  }
  return 0.0;
}

namespace {

struct Point {
  double x, y;
};

std::vector<Point> grid_points(const GridField2D& grid) {
  std::vector<Point> pts;
  pts.reserve(grid.rows() * grid.cols());
  for (std::size_t r = 0; r < grid.rows(); ++r)
    for (std::size_t c = 0; c < grid.cols(); ++c) pts.push_back({grid.x(c), grid.y(r)});
  return pts;
}

// L z for covariance K, with escalating diagonal jitter.
Eigen::VectorXd correlated_draw(Eigen::MatrixXd K, double scale2, std::uint64_t seed, std::uint64_t layer) {
  const Eigen::Index n = K.rows();
  const Eigen::VectorXd diag = K.diagonal();
  for (double jitter = 1e-10; jitter <= 1e-4 * 1.0000001; jitter *= 10.0) {
    K.diagonal() = diag.array() + jitter * scale2;
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) continue;
    auto rng = smc::keyed_rng(seed, smc::Stream::user, layer, 0, 0);
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
    return llt.matrixL() * z;
  }
  throw SpecError("covariance factorization failed after jitter escalation (n = " + std::to_string(n) + ")");
}

GridField2D draw_on(const GridField2D& grid, const std::vector<Point>& pts, Kernel kernel, double s, double l,
                    const GPSpec& spec, std::uint64_t layer) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double r = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      K(i, j) = K(j, i) = kernel_value(kernel, s, l, r);
    }
  const Eigen::VectorXd f = correlated_draw(std::move(K), s * s, spec.seed, layer);
  GridField2D out = grid;
  std::size_t k = 0;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c, ++k)
      out(r, c) = f[Eigen::Index(k)] + (spec.mean ? spec.mean(out.x(c), out.y(r)) : 0.0);
  return out;
}

}  // namespace

GridField2D gp_sample(const GPSpec& spec, const GridField2D& grid) {
  spec.validate();
  if (grid.rows() * grid.cols() > 64 * 64) throw ShapeError("gp_sample supports at most 64x64 points");
  if (spec.kernel == Kernel::wrapped_two_layer) return wrapped_gp_sample(spec, grid);
  return draw_on(grid, grid_points(grid), spec.kernel, spec.strength, spec.length_scale, spec, 0);
}

GridField2D wrapped_gp_sample(const GPSpec& spec, const GridField2D& grid) {
  spec.validate();
  if (grid.rows() * grid.cols() > 64 * 64) throw ShapeError("wrapped_gp_sample supports at most 64x64 points");
  std::vector<Point> pts = grid_points(grid);
  if (spec.warp_strength > 0.0) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    const double s2 = spec.warp_strength * spec.warp_strength;
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double dx = (pts[i].x - pts[j].x) / spec.warp_length;
        const double dy = (pts[i].y - pts[j].y) / spec.warp_length;
        K(i, j) = K(j, i) = s2 * std::exp(-(dx * dx + dy * dy));
      }
    const Eigen::VectorXd wx = correlated_draw(K, s2, spec.seed, 1);
    const Eigen::VectorXd wy = correlated_draw(std::move(K), s2, spec.seed, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts[i].x += wx[i];
      pts[i].y += wy[i];
    }
  }
  return draw_on(grid, pts, Kernel::exponential, spec.strength, spec.length_scale, spec, 0);
}

}  // namespace wavinv::benchmarks
