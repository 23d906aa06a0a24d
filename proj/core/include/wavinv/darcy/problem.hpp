#pragma once

#include <cstddef>
#include <vector>

#include "wavinv/array2d.hpp"

namespace wavinv::darcy {

struct SourcePoint {
  double x = 0.0;
  double y = 0.0;
  double c = 1.0;  // +1 source, -1 sink
};

// -div(k grad p) = sum c_i delta(x - x_i) on [0,1]^2 with no-flux walls.
// log_permeability is sampled on the closed (2^J+1)^2 node grid.
struct DarcyProblem {
  GridField2D log_permeability;
  std::vector<SourcePoint> sources;

  int level() const;  // J of the permeability grid
  void validate() const;
};

// Source at [0,0], sink at [1,1].
std::vector<SourcePoint> corner_sources();

struct SolverSettings {
  int finest_level_J = 5;
  double residual_tolerance = 1e-6;   // delta_eps, max-norm on active nodes
  double refinement_threshold = 0.02; // epsilon
  int max_vcycles = 400;
  int smoother_sweeps = 2;            // red-black Gauss-Seidel sweeps before and after
  int coarsest_level = 2;             // j_min
  int half_width = 2;                 // lifting N for transfers and adaptivity
  int max_outer_iterations = 30;

  void validate() const;
};

// Cell-centred finite-volume discretization of -div(k grad .) on the node
// grid of one level. Boundary nodes own half (edges) or quarter (corners)
// control volumes, which is the mirror-ghost no-flux closure. Face
// permeabilities are harmonic means of the two nodal values.
//   (L p)_n = (1/V_n) sum_faces a_f (p_n - p_nb)
class DarcyOperator {
 public:
  DarcyOperator() = default;
  // `k` holds nodal permeabilities on a (2^level+1)^2 grid.
  DarcyOperator(const Array2D<double>& k, int level);

  int level() const noexcept { return level_; }
  std::size_t n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double volume(std::size_t r, std::size_t c) const noexcept { return vol_[r * n_ + c]; }
  // coupling between (r,c) and (r,c+1)
  double east(std::size_t r, std::size_t c) const noexcept { return ae_[r * (n_ - 1) + c]; }
  // coupling between (r,c) and (r+1,c)
  double north(std::size_t r, std::size_t c) const noexcept { return an_[r * n_ + c]; }

  void apply(const Array2D<double>& p, Array2D<double>& out) const;
  // out = f - L p
  void residual(const Array2D<double>& f, const Array2D<double>& p, Array2D<double>& out) const;
  // Red-black Gauss-Seidel sweeps on L p = f.
  void smooth(const Array2D<double>& f, Array2D<double>& p, int sweeps) const;

 private:
  int level_ = 0;
  std::size_t n_ = 0;
  double h_ = 1.0;
  std::vector<double> vol_, ae_, an_, diag_;
};

// Operator on level `level` <= problem level; coarser permeabilities come
// from the lifted wavelet projection of ln k.
DarcyOperator discretize_operator(const DarcyProblem& problem, int level, int half_width = 2);
// Operators for levels coarsest..finest (index 0 = coarsest) from a single
// pass of the lifting transform; each equals discretize_operator at its level.
std::vector<DarcyOperator> discretize_hierarchy(const DarcyProblem& problem, int coarsest, int finest,
                                                int half_width = 2);

// Nodal source density: each point deposits c_i / V on its nearest node.
Array2D<double> discretize_source(const std::vector<SourcePoint>& sources, int level);

// Subtracts the volume-weighted (trapezoid) mean of a node-grid field.
void remove_mean(Array2D<double>& p);
double weighted_mean(const Array2D<double>& p);

}  // namespace wavinv::darcy
