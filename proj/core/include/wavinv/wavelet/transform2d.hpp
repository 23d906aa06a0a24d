#pragma once

#include <cstddef>
#include <vector>

#include "wavinv/array2d.hpp"
#include "wavinv/wavelet/lifting.hpp"

namespace wavinv::wavelet {

// Largest number of lifting levels a line of `n` samples supports.
int max_levels(std::size_t n, Boundary b) noexcept;

// Separable multilevel lifting on a 2D array kept in node (in-place) layout:
// after `levels` forward levels, samples at multiples of 2^levels hold the
// scaling coefficients and every other node holds the detail of the level at
// which it was split off. Level 0 is the finest. Within a level the 1D
// transform runs along rows (x) first, then along columns (y).
class Transform2D {
 public:
  Transform2D(std::size_t rows, std::size_t cols, int levels, const LiftingConfig& cfg);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  int levels() const noexcept { return levels_; }
  const LiftingConfig& config() const noexcept { return cfg_; }

  void forward(Array2D<double>& a) const;
  void inverse(Array2D<double>& a) const;
  void forward_level(Array2D<double>& a, int level) const;
  void inverse_level(Array2D<double>& a, int level) const;

  // Level at which node (r, c) carries a detail, or -1 for a scaling node.
  int node_level(std::size_t r, std::size_t c) const noexcept;

 private:
  void check(const Array2D<double>& a) const;
  std::size_t rows_, cols_;
  int levels_;
  LiftingConfig cfg_;
  std::vector<LevelStencil> row_st_;  // lines along x at each level
  std::vector<LevelStencil> col_st_;  // lines along y at each level
};

}  // namespace wavinv::wavelet
