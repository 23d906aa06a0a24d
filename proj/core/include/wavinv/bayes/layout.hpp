#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wavinv/wavelet/quadtree.hpp"

namespace wavinv::bayes {

// Flat node ordering of a coefficient tree, sorted by prior level so the
// nodes of levels <= s form a prefix. Level 0 nodes are roots (scaling
// coefficients); every other node has a parent one level up.
class TreeLayout {
 public:
  TreeLayout() = default;
  TreeLayout(std::vector<int> level, std::vector<int> parent);

  // 2x2 scaling block then detail levels j = 0..max_scale-1 (prior level
  // j+1), each band-major then row-major. Level-1 details hang off the
  // scaling coefficient at the same (row, col); deeper nodes off (r/2, c/2).
  static TreeLayout quadtree(int max_scale);
  // Node i at level i with parent i-1.
  static TreeLayout chain(int length);

  std::size_t size() const noexcept { return level_.size(); }
  int level(std::size_t i) const { return level_[i]; }
  int parent(std::size_t i) const { return parent_[i]; }
  const std::vector<int>& children(std::size_t i) const { return children_[i]; }
  int max_level() const noexcept { return max_level_; }
  // Number of nodes with level <= scale.
  std::size_t count_up_to(int scale) const;

  bool is_quadtree() const noexcept { return quadtree_scale_ >= 0; }
  wavelet::CoefficientQuadtree to_quadtree(const std::vector<double>& values, const std::vector<std::uint8_t>& active,
                                           int scale, int half_width) const;
  // Inverse of to_quadtree for the nodes of levels <= scale.
  void from_quadtree(const wavelet::CoefficientQuadtree& tree, int scale, std::vector<double>& values,
                     std::vector<std::uint8_t>& active) const;

 private:
  std::vector<int> level_, parent_;
  std::vector<std::vector<int>> children_;
  std::vector<std::size_t> prefix_;  // prefix_[s] = count_up_to(s)
  int max_level_ = -1;
  int quadtree_scale_ = -1;
};

}  // namespace wavinv::bayes
