#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "wavinv/error.hpp"

namespace wavinv {

// Dense row-major 2D array. Row index runs along y, column index along x.
template <typename T>
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> flat() noexcept { return data_; }
  std::span<const T> flat() const noexcept { return data_; }
  std::vector<T>& storage() noexcept { return data_; }
  const std::vector<T>& storage() const noexcept { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }
  bool same_shape(const Array2D& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

  friend bool operator==(const Array2D&, const Array2D&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Sampling convention of a field on its rectangle.
//  periodic: n samples at x0 + i*(x1-x0)/n, i < n (right edge excluded)
//  nodal:    n samples at x0 + i*(x1-x0)/(n-1), both edges included
enum class Sampling { periodic, nodal };

// Scalar field sampled on a dyadic grid over a rectangle.
struct GridField2D {
  Array2D<double> values;
  Rect domain;
  Sampling sampling = Sampling::nodal;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  double& operator()(std::size_t r, std::size_t c) { return values(r, c); }
  double operator()(std::size_t r, std::size_t c) const { return values(r, c); }

  double x(std::size_t c) const {
    const double n = sampling == Sampling::periodic ? double(cols()) : double(cols() - 1);
    return domain.x0 + (domain.x1 - domain.x0) * double(c) / n;
  }
  double y(std::size_t r) const {
    const double n = sampling == Sampling::periodic ? double(rows()) : double(rows() - 1);
    return domain.y0 + (domain.y1 - domain.y0) * double(r) / n;
  }
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// True for 2^J (periodic) or 2^J+1 (nodal) sample counts.
inline bool is_dyadic(std::size_t n, Sampling s) {
  return s == Sampling::periodic ? is_power_of_two(n) : (n >= 2 && is_power_of_two(n - 1));
}

inline int log2_exact(std::size_t n) {
  int l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

}  // namespace wavinv
