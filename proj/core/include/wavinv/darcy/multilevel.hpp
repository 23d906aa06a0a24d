#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "wavinv/array2d.hpp"
#include "wavinv/darcy/problem.hpp"

namespace wavinv::darcy {

struct SolveReport {
  int vcycles = 0;
  int outer_iterations = 0;
  double residual = 0.0;        // final max-norm residual on the active nodes
  double compatibility_shift = 0.0;  // lambda, zero when every node is active
  std::size_t active_nodes = 0;
  std::vector<double> residual_history;  // one entry per V-cycle plus the initial residual of each outer pass
};

// Multilevel adaptive wavelet collocation solver.
//
// The iterate lives in the span of the scaling functions plus the wavelets of
// the active node set G. Each V-cycle corrects u with the residual measured on
// G (shifted by its volume-weighted mean so the correction problem is
// compatible) and projects back onto G by zeroing inactive wavelet
// coefficients. The outer loop rebuilds G from the significant wavelet
// coefficients of the iterate (|d| >= eps * max|u|), their same-level
// neighbours and their children, until G stops changing.
//
// Immutable after construction; solve() may be called from several threads.
class MultilevelSolver {
 public:
  MultilevelSolver(const DarcyProblem& problem, const SolverSettings& settings);
  ~MultilevelSolver();
  MultilevelSolver(MultilevelSolver&&) noexcept;
  MultilevelSolver& operator=(MultilevelSolver&&) noexcept;

  GridField2D solve(SolveReport* report = nullptr) const;
  // Same algorithm for a nodal right-hand side on the finest grid in place of
  // the point sources; its volume-weighted mean is removed first.
  GridField2D solve(const Array2D<double>& rhs, SolveReport* report = nullptr) const;

  // One V-cycle on the full finest grid for L v = rhs (rhs must be
  // compatible); updates v in place. Exposed for tests.
  void vcycle(const Array2D<double>& rhs, Array2D<double>& v) const;
  const DarcyOperator& finest_operator() const;
  const Array2D<double>& source() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridField2D vcycle_solve(const DarcyProblem& problem, const SolverSettings& settings, SolveReport* report = nullptr);

// Sparse LU on the system bordered with the zero-mean constraint.
GridField2D direct_solve_oracle(const DarcyProblem& problem, int level);
GridField2D direct_solve_oracle(const DarcyOperator& op, const Array2D<double>& rhs);

}  // namespace wavinv::darcy
