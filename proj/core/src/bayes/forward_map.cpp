#include "wavinv/bayes/forward_map.hpp"

#include <cmath>

#include "wavinv/darcy/multilevel.hpp"
#include "wavinv/darcy/observation.hpp"
#include "wavinv/error.hpp"

namespace wavinv::bayes {

DarcyForwardMap::DarcyForwardMap(darcy::SolverSettings solver, int sensor_grid, int half_width,
                                 std::vector<darcy::SourcePoint> sources)
    : solver_(solver), sensor_grid_(sensor_grid), half_width_(half_width), sources_(std::move(sources)) {
  solver_.validate();
  if (sensor_grid_ < 2) throw ParameterError("sensor grid must be at least 2");
  if (half_width_ < 1) throw ParameterError("half width must be positive");
  if (solver_.finest_level_J != kParameterLevels) throw LevelError("forward map expects a 33x33 solver grid");
}

GridField2D DarcyForwardMap::periodic_field(const wavelet::CoefficientQuadtree& tree) const {
  if (tree.max_level > kParameterLevels) throw LevelError("tree deeper than the parameter grid");
  wavelet::LiftingConfig cfg;
  cfg.half_width = half_width_;
  cfg.boundary = wavelet::Boundary::periodic;
  return wavelet::inverse_transform_2d(wavelet::with_levels(tree, kParameterLevels), cfg);
}

GridField2D DarcyForwardMap::log_permeability_nodes(const wavelet::CoefficientQuadtree& tree) const {
  return wavelet::crop_reconstruction_nodes(periodic_field(tree));
}

GridField2D DarcyForwardMap::log_permeability_field(const wavelet::CoefficientQuadtree& tree) const {
  return wavelet::crop_reconstruction(periodic_field(tree));
}

std::vector<double> DarcyForwardMap::operator()(const wavelet::CoefficientQuadtree& tree) const {
  darcy::DarcyProblem problem;
  problem.log_permeability = log_permeability_nodes(tree);
  problem.sources = sources_;
  const auto pressure = darcy::vcycle_solve(problem, solver_);
  return darcy::observe(pressure, sensor_grid_);
}

std::vector<double> DarcyForwardMap::operator()(const ParticleState& p, const TreeLayout& layout) const {
  return (*this)(layout.to_quadtree(p.values, p.active, p.scale, half_width_));
}

}  // namespace wavinv::bayes
