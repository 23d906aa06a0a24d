#include "wavinv/bayes/layout.hpp"

#include <string>

#include "wavinv/error.hpp"

namespace wavinv::bayes {

TreeLayout::TreeLayout(std::vector<int> level, std::vector<int> parent)
    : level_(std::move(level)), parent_(std::move(parent)) {
  if (level_.size() != parent_.size()) throw ShapeError("level and parent lists differ in length");
  children_.assign(level_.size(), {});
  for (std::size_t i = 0; i < level_.size(); ++i) {
    if (i > 0 && level_[i] < level_[i - 1]) throw ParameterError("layout nodes must be sorted by level");
    if (level_[i] < 0) throw ParameterError("negative node level");
    if (level_[i] == 0) {
      if (parent_[i] != -1) throw ParameterError("level-0 node " + std::to_string(i) + " must be a root");
    } else {
      const int p = parent_[i];
      if (p < 0 || std::size_t(p) >= i || level_[p] != level_[i] - 1)
        throw ParameterError("node " + std::to_string(i) + " needs a parent one level up");
      children_[p].push_back(int(i));
    }
    max_level_ = std::max(max_level_, level_[i]);
  }
  prefix_.assign(max_level_ + 2, 0);
  for (int s = 0; s <= max_level_; ++s) {
    std::size_t c = 0;
    while (c < level_.size() && level_[c] <= s) ++c;
    prefix_[s] = c;
  }
}

std::size_t TreeLayout::count_up_to(int scale) const {
  if (scale < 0) return 0;
  if (scale >= max_level_) return size();
  return prefix_[scale];
}

TreeLayout TreeLayout::quadtree(int max_scale) {
  if (max_scale < 0) throw LevelError("negative quadtree scale");
  std::vector<int> level, parent;
  for (int i = 0; i < 4; ++i) {
    level.push_back(0);
    parent.push_back(-1);
  }
  std::size_t prev_offset = 0;  // start of level j-1 block
  for (int j = 0; j < max_scale; ++j) {
    const std::size_t dim = std::size_t{2} << j;
    const std::size_t offset = level.size();
    for (int b = 0; b < wavelet::kBands; ++b)
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
          level.push_back(j + 1);
          if (j == 0) {
            parent.push_back(int(r * 2 + c));
          } else {
            const std::size_t pdim = dim / 2;
            parent.push_back(int(prev_offset + b * pdim * pdim + (r / 2) * pdim + c / 2));
          }
        }
    prev_offset = offset;
  }
  TreeLayout t(std::move(level), std::move(parent));
  t.quadtree_scale_ = max_scale;
  return t;
}

TreeLayout TreeLayout::chain(int length) {
  if (length < 1) throw ParameterError("chain layout needs at least one node");
  std::vector<int> level(length), parent(length);
  for (int i = 0; i < length; ++i) {
    level[i] = i;
    parent[i] = i - 1;
  }
  return TreeLayout(std::move(level), std::move(parent));
}

wavelet::CoefficientQuadtree TreeLayout::to_quadtree(const std::vector<double>& values,
                                                     const std::vector<std::uint8_t>& active, int scale,
                                                     int half_width) const {
  if (!is_quadtree()) throw ParameterError("layout is not a quadtree");
  if (scale > quadtree_scale_) throw LevelError("scale exceeds the layout depth");
  const std::size_t n = count_up_to(scale);
  if (values.size() < n || active.size() < n) throw ShapeError("particle is shorter than the requested scale");
  auto t = wavelet::make_parameter_tree(scale, half_width);
  std::size_t k = 0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) t.scaling(r, c) = values[k++];
  for (int j = 0; j < scale; ++j)
    for (int b = 0; b < wavelet::kBands; ++b) {
      auto& d = t.details[j][b];
      auto& m = t.mask[j][b];
      for (std::size_t i = 0; i < d.size(); ++i, ++k) {
        m.storage()[i] = active[k] ? 1 : 0;
        d.storage()[i] = active[k] ? values[k] : 0.0;
      }
    }
  return t;
}

void TreeLayout::from_quadtree(const wavelet::CoefficientQuadtree& tree, int scale, std::vector<double>& values,
                               std::vector<std::uint8_t>& active) const {
  if (!is_quadtree()) throw ParameterError("layout is not a quadtree");
  if (scale > tree.max_level || scale > quadtree_scale_) throw LevelError("scale exceeds the tree depth");
  values.assign(count_up_to(scale), 0.0);
  active.assign(values.size(), 0);
  std::size_t k = 0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c, ++k) {
      values[k] = tree.scaling(r, c);
      active[k] = 1;
    }
  for (int j = 0; j < scale; ++j)
    for (int b = 0; b < wavelet::kBands; ++b) {
      const auto& d = tree.details[j][b];
      const auto& m = tree.mask[j][b];
      for (std::size_t i = 0; i < d.size(); ++i, ++k) {
        active[k] = m.storage()[i];
        values[k] = m.storage()[i] ? d.storage()[i] : 0.0;
      }
    }
}

}  // namespace wavinv::bayes
