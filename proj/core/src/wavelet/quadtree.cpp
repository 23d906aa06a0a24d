#include "wavinv/wavelet/quadtree.hpp"

#include <cmath>
#include <string>

#include "wavinv/error.hpp"
#include "wavinv/wavelet/transform2d.hpp"

namespace wavinv::wavelet {

namespace {

std::size_t expand(std::size_t n, int levels, Boundary b) {
  for (int l = 0; l < levels; ++l) n = b == Boundary::periodic ? 2 * n : 2 * n - 1;
  return n;
}

// Number of even / odd samples on a line of the grid at transform level `l`.
std::size_t evens(std::size_t line, Boundary b) { return b == Boundary::periodic ? line / 2 : line / 2 + 1; }
std::size_t odds(std::size_t line) { return line / 2; }

std::size_t line_at(std::size_t n, int level, Boundary b) {
  const std::size_t s = std::size_t{1} << level;
  return b == Boundary::periodic ? n / s : (n - 1) / s + 1;
}

// Shape of band `b` on a grid (rows x cols) at transform level `l`.
std::pair<std::size_t, std::size_t> band_shape(std::size_t rows, std::size_t cols, int l, Band band, Boundary bd) {
  const std::size_t lr = line_at(rows, l, bd), lc = line_at(cols, l, bd);
  switch (band) {
    case Band::horizontal: return {odds(lr), evens(lc, bd)};
    case Band::vertical: return {evens(lr, bd), odds(lc)};
    default: return {odds(lr), odds(lc)};
  }
}

}  // namespace

std::size_t CoefficientQuadtree::grid_rows() const { return expand(scaling.rows(), max_level, boundary); }
std::size_t CoefficientQuadtree::grid_cols() const { return expand(scaling.cols(), max_level, boundary); }

void CoefficientQuadtree::validate() const {
  if (max_level < 0) throw ShapeError("negative max_level");
  if (details.size() != static_cast<std::size_t>(max_level) || mask.size() != details.size())
    throw ShapeError("tree has " + std::to_string(details.size()) + " detail levels, max_level is " +
                     std::to_string(max_level));
  const std::size_t R = grid_rows(), C = grid_cols();
  for (int j = 0; j < max_level; ++j) {
    const int l = max_level - 1 - j;
    for (int b = 0; b < kBands; ++b) {
      const auto [r, c] = band_shape(R, C, l, Band(b), boundary);
      const auto& d = details[j][b];
      const auto& m = mask[j][b];
      if (d.rows() != r || d.cols() != c || m.rows() != r || m.cols() != c)
        throw ShapeError("level " + std::to_string(j) + " band " + std::to_string(b) + " has shape " +
                         std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + ", expected " +
                         std::to_string(r) + "x" + std::to_string(c));
      for (std::size_t i = 0; i < d.size(); ++i)
        if (!m.storage()[i] && d.storage()[i] != 0.0)
          throw InvariantError("masked coefficient at level " + std::to_string(j) + " is nonzero");
    }
  }
}

void CoefficientQuadtree::validate_zero_tree() const {
  for (int j = 1; j < max_level; ++j)
    for (int b = 0; b < kBands; ++b) {
      const auto& m = mask[j][b];
      const auto& pm = mask[j - 1][b];
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          if (m(r, c) && !pm(r / 2, c / 2))
            throw InvariantError("active coefficient (level " + std::to_string(j) + ", band " + std::to_string(b) +
                                 ", " + std::to_string(r) + "," + std::to_string(c) + ") has an inactive parent");
    }
}

CoefficientQuadtree make_parameter_tree(int max_level, int half_width) {
  if (max_level < 0) throw LevelError("negative max_level");
  CoefficientQuadtree t;
  t.max_level = 0;
  t.scaling = Array2D<double>(2, 2, 0.0);
  t.half_width = half_width;
  return with_levels(t, max_level);
}

CoefficientQuadtree with_levels(const CoefficientQuadtree& tree, int max_level) {
  if (max_level < 0) throw LevelError("negative max_level");
  CoefficientQuadtree out = tree;
  if (max_level <= tree.max_level) {
    out.details.resize(max_level);
    out.mask.resize(max_level);
    out.max_level = max_level;
    return out;
  }
  out.max_level = max_level;
  const std::size_t R = out.grid_rows(), C = out.grid_cols();
  for (int j = tree.max_level; j < max_level; ++j) {
    const int l = max_level - 1 - j;
    std::array<Array2D<double>, kBands> d;
    std::array<Array2D<std::uint8_t>, kBands> m;
    for (int b = 0; b < kBands; ++b) {
      const auto [r, c] = band_shape(R, C, l, Band(b), out.boundary);
      d[b] = Array2D<double>(r, c, 0.0);
      m[b] = Array2D<std::uint8_t>(r, c, 0);
    }
    out.details.push_back(std::move(d));
    out.mask.push_back(std::move(m));
  }
  return out;
}

Array2D<double> to_node_layout(const CoefficientQuadtree& tree) {
  tree.validate();
  const std::size_t R = tree.grid_rows(), C = tree.grid_cols();
  const int L = tree.max_level;
  Array2D<double> a(R, C, 0.0);
  const std::size_t top = std::size_t{1} << L;
  for (std::size_t r = 0; r < tree.scaling.rows(); ++r)
    for (std::size_t c = 0; c < tree.scaling.cols(); ++c) a(r * top, c * top) = tree.scaling(r, c);
  for (int j = 0; j < L; ++j) {
    const int l = L - 1 - j;
    const std::size_t s = std::size_t{1} << l;
    const auto& h = tree.details[j][0];
    const auto& v = tree.details[j][1];
    const auto& d = tree.details[j][2];
    for (std::size_t r = 0; r < h.rows(); ++r)
      for (std::size_t c = 0; c < h.cols(); ++c) a((2 * r + 1) * s, 2 * c * s) = h(r, c);
    for (std::size_t r = 0; r < v.rows(); ++r)
      for (std::size_t c = 0; c < v.cols(); ++c) a(2 * r * s, (2 * c + 1) * s) = v(r, c);
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c) a((2 * r + 1) * s, (2 * c + 1) * s) = d(r, c);
  }
  return a;
}

CoefficientQuadtree from_node_layout(const Array2D<double>& a, int levels, Boundary boundary, Rect domain,
                                     int half_width) {
  CoefficientQuadtree t;
  t.boundary = boundary;
  t.domain = domain;
  t.half_width = half_width;
  const std::size_t top = std::size_t{1} << levels;
  const std::size_t sr = line_at(a.rows(), levels, boundary), sc = line_at(a.cols(), levels, boundary);
  t.scaling = Array2D<double>(sr, sc);
  for (std::size_t r = 0; r < sr; ++r)
    for (std::size_t c = 0; c < sc; ++c) t.scaling(r, c) = a(r * top, c * top);
  t.max_level = 0;
  t = with_levels(t, levels);
  for (int j = 0; j < levels; ++j) {
    const int l = levels - 1 - j;
    const std::size_t s = std::size_t{1} << l;
    auto& h = t.details[j][0];
    auto& v = t.details[j][1];
    auto& d = t.details[j][2];
    for (std::size_t r = 0; r < h.rows(); ++r)
      for (std::size_t c = 0; c < h.cols(); ++c) h(r, c) = a((2 * r + 1) * s, 2 * c * s);
    for (std::size_t r = 0; r < v.rows(); ++r)
      for (std::size_t c = 0; c < v.cols(); ++c) v(r, c) = a(2 * r * s, (2 * c + 1) * s);
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c) d(r, c) = a((2 * r + 1) * s, (2 * c + 1) * s);
    for (int b = 0; b < kBands; ++b) t.mask[j][b].fill(1);
  }
  return t;
}

namespace {

void check_sampling(Sampling s, Boundary b) {
  const bool ok = (s == Sampling::periodic) == (b == Boundary::periodic);
  if (!ok) throw ParameterError("periodic boundary needs periodic sampling and reflect needs nodal sampling");
}

}  // namespace

CoefficientQuadtree forward_transform_2d(const GridField2D& field, int levels, const LiftingConfig& cfg) {
  check_sampling(field.sampling, cfg.boundary);
  if (!is_dyadic(field.rows(), field.sampling) || !is_dyadic(field.cols(), field.sampling))
    throw ShapeError("field of " + std::to_string(field.rows()) + "x" + std::to_string(field.cols()) +
                     " samples is not dyadic");
  Transform2D tr(field.rows(), field.cols(), levels, cfg);
  Array2D<double> a = field.values;
  tr.forward(a);
  return from_node_layout(a, levels, cfg.boundary, field.domain, cfg.half_width);
}

GridField2D inverse_transform_2d(const CoefficientQuadtree& tree, const LiftingConfig& cfg) {
  if (tree.boundary != cfg.boundary) throw ParameterError("tree boundary policy differs from the lifting config");
  Array2D<double> a = to_node_layout(tree);
  Transform2D tr(a.rows(), a.cols(), tree.max_level, cfg);
  tr.inverse(a);
  GridField2D f;
  f.values = std::move(a);
  f.domain = tree.domain;
  f.sampling = tree.boundary == Boundary::periodic ? Sampling::periodic : Sampling::nodal;
  return f;
}

namespace {

GridField2D crop(const GridField2D& field, std::size_t n, Sampling out) {
  if (field.rows() != 64 || field.cols() != 64 || field.sampling != Sampling::periodic)
    throw ShapeError("crop expects the 64x64 periodic reconstruction, got " + std::to_string(field.rows()) + "x" +
                     std::to_string(field.cols()));
  GridField2D f;
  f.values = Array2D<double>(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) f.values(r, c) = field.values(r, c);
  const double hx = (field.domain.x1 - field.domain.x0) / 64.0;
  const double hy = (field.domain.y1 - field.domain.y0) / 64.0;
  f.domain = Rect{field.domain.x0, field.domain.x0 + 32 * hx, field.domain.y0, field.domain.y0 + 32 * hy};
  f.sampling = out;
  return f;
}

}  // namespace

GridField2D crop_reconstruction(const GridField2D& field) { return crop(field, 32, Sampling::periodic); }
GridField2D crop_reconstruction_nodes(const GridField2D& field) { return crop(field, 33, Sampling::nodal); }

CoefficientQuadtree threshold_tree(const CoefficientQuadtree& tree, double epsilon, double field_norm) {
  if (!(epsilon > 0.0)) throw ParameterError("threshold epsilon must be positive");
  if (!(field_norm > 0.0)) throw ParameterError("field norm must be positive");
  const double cut = epsilon * field_norm;
  CoefficientQuadtree out = tree;
  for (int j = 0; j < out.max_level; ++j)
    for (int b = 0; b < kBands; ++b) {
      auto& d = out.details[j][b].storage();
      auto& m = out.mask[j][b].storage();
      for (std::size_t i = 0; i < d.size(); ++i) {
        const bool keep = std::abs(d[i]) >= cut;
        m[i] = keep ? 1 : 0;
        if (!keep) d[i] = 0.0;
      }
    }
  return out;
}

std::size_t count_active_bases(const CoefficientQuadtree& tree, int up_to_scale) {
  if (up_to_scale < 0 || up_to_scale > tree.max_level)
    throw LevelError("scale " + std::to_string(up_to_scale) + " outside [0, " + std::to_string(tree.max_level) + "]");
  std::size_t n = tree.scaling.size();
  for (int j = 0; j < up_to_scale; ++j)
    for (int b = 0; b < kBands; ++b)
      for (auto v : tree.mask[j][b].storage()) n += v ? 1 : 0;
  return n;
}

}  // namespace wavinv::wavelet
