#pragma once

#include <vector>

#include "wavinv/array2d.hpp"
#include "wavinv/bayes/layout.hpp"
#include "wavinv/bayes/prior.hpp"
#include "wavinv/darcy/problem.hpp"
#include "wavinv/wavelet/quadtree.hpp"

namespace wavinv::bayes {

// Coefficient tree -> ln k on the 64x64 periodic grid -> 33x33 node crop ->
// Darcy pressure with the corner sources -> n x n sensor readings.
class DarcyForwardMap {
 public:
  DarcyForwardMap(darcy::SolverSettings solver, int sensor_grid, int half_width = 2,
                  std::vector<darcy::SourcePoint> sources = darcy::corner_sources());

  std::vector<double> operator()(const wavelet::CoefficientQuadtree& tree) const;
  std::vector<double> operator()(const ParticleState& p, const TreeLayout& layout) const;

  // ln k on the solver's node grid.
  GridField2D log_permeability_nodes(const wavelet::CoefficientQuadtree& tree) const;
  // ln k on the 32x32 reporting grid over [0,1]^2.
  GridField2D log_permeability_field(const wavelet::CoefficientQuadtree& tree) const;

  int sensor_grid() const noexcept { return sensor_grid_; }
  const darcy::SolverSettings& solver_settings() const noexcept { return solver_; }
  int half_width() const noexcept { return half_width_; }

 private:
  GridField2D periodic_field(const wavelet::CoefficientQuadtree& tree) const;

  darcy::SolverSettings solver_;
  int sensor_grid_;
  int half_width_;
  std::vector<darcy::SourcePoint> sources_;
};

// Number of levels of the 64x64 parameter tree.
inline constexpr int kParameterLevels = 5;

}  // namespace wavinv::bayes
