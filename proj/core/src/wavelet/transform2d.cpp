#include "wavinv/wavelet/transform2d.hpp"

#include <string>

#include "wavinv/error.hpp"

namespace wavinv::wavelet {

int max_levels(std::size_t n, Boundary b) noexcept {
  int l = 0;
  std::size_t len = n;
  while (valid_line_length(len, b)) {
    ++l;
    len = b == Boundary::periodic ? len / 2 : len / 2 + 1;
  }
  return l;
}

namespace {

std::size_t line_length(std::size_t n, std::size_t stride, Boundary b) {
  return b == Boundary::periodic ? n / stride : (n - 1) / stride + 1;
}

}  // namespace

Transform2D::Transform2D(std::size_t rows, std::size_t cols, int levels, const LiftingConfig& cfg)
    : rows_(rows), cols_(cols), levels_(levels), cfg_(cfg) {
  cfg_.validate();
  if (levels < 0) throw LevelError("negative level count");
  const int lim = std::min(max_levels(rows, cfg.boundary), max_levels(cols, cfg.boundary));
  if (levels > lim)
    throw LevelError("requested " + std::to_string(levels) + " levels but a " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " grid supports at most " + std::to_string(lim));
  for (int l = 0; l < levels; ++l) {
    const std::size_t s = std::size_t{1} << l;
    row_st_.push_back(make_level_stencil(line_length(cols, s, cfg.boundary), cfg_));
    col_st_.push_back(make_level_stencil(line_length(rows, s, cfg.boundary), cfg_));
  }
}

void Transform2D::check(const Array2D<double>& a) const {
  if (a.rows() != rows_ || a.cols() != cols_)
    throw ShapeError("array is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", transform expects " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
}

namespace {

struct Scratch {
  std::vector<double> even, odd, c, d;
  void size_for(const LevelStencil& st) {
    even.resize(st.n_even);
    odd.resize(st.n_odd);
    c.resize(st.n_even);
    d.resize(st.n_odd);
  }
};

// One lifting level along `nlines` lines; line i starts at data + i*line_stride
// and consecutive samples are `step` apart.
void sweep(double* data, const LevelStencil& st, std::size_t nlines, std::size_t line_stride, std::size_t step,
           bool forward, Scratch& sc) {
  sc.size_for(st);
  for (std::size_t line = 0; line < nlines; ++line) {
    double* p = data + line * line_stride;
    for (std::size_t i = 0; i < st.n_even; ++i) sc.even[i] = p[2 * i * step];
    for (std::size_t i = 0; i < st.n_odd; ++i) sc.odd[i] = p[(2 * i + 1) * step];
    if (forward) {
      lift_forward(st, sc.even, sc.odd, sc.c, sc.d);
    } else {
      // here even/odd hold coarse/detail
      lift_inverse(st, sc.even, sc.odd, sc.c, sc.d);
    }
    for (std::size_t i = 0; i < st.n_even; ++i) p[2 * i * step] = sc.c[i];
    for (std::size_t i = 0; i < st.n_odd; ++i) p[(2 * i + 1) * step] = sc.d[i];
  }
}

}  // namespace

void Transform2D::forward_level(Array2D<double>& a, int level) const {
  check(a);
  const std::size_t s = std::size_t{1} << level;
  const auto& rs = row_st_.at(level);
  const auto& cs = col_st_.at(level);
  Scratch sc;
  double* data = a.flat().data();
  // rows at y-multiples of s, samples every s columns
  sweep(data, rs, cs.n, s * cols_, s, true, sc);
  // columns at x-multiples of s, samples every s rows
  sweep(data, cs, rs.n, s, s * cols_, true, sc);
}

void Transform2D::inverse_level(Array2D<double>& a, int level) const {
  check(a);
  const std::size_t s = std::size_t{1} << level;
  const auto& rs = row_st_.at(level);
  const auto& cs = col_st_.at(level);
  Scratch sc;
  double* data = a.flat().data();
  sweep(data, cs, rs.n, s, s * cols_, false, sc);
  sweep(data, rs, cs.n, s * cols_, s, false, sc);
}

void Transform2D::forward(Array2D<double>& a) const {
  for (int l = 0; l < levels_; ++l) forward_level(a, l);
}

void Transform2D::inverse(Array2D<double>& a) const {
  for (int l = levels_ - 1; l >= 0; --l) inverse_level(a, l);
}

int Transform2D::node_level(std::size_t r, std::size_t c) const noexcept {
  for (int l = 0; l < levels_; ++l) {
    const std::size_t s2 = std::size_t{2} << l;
    if (r % s2 != 0 || c % s2 != 0) return l;
  }
  return -1;
}

}  // namespace wavinv::wavelet
