#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace wavinv::wavelet {

enum class UpdatePolicy { derived_from_predict, explicit_table };

// periodic: 2m samples, indices wrap.
// reflect:  2m+1 samples with both end points kept; stencils near the ends are
//           shifted inward (one-sided Lagrange) so the order is preserved.
enum class Boundary { periodic, reflect };

struct LiftingConfig {
  int half_width = 2;  // N: prediction uses the 2N nearest even samples
  UpdatePolicy update_policy = UpdatePolicy::derived_from_predict;
  // Used when update_policy == explicit_table: weights on d_{n+l}, l = -N..N-1.
  std::vector<double> update_table;
  Boundary boundary = Boundary::periodic;

  void validate() const;
};

// Lagrange weights of the polynomial through `stencil_offsets` evaluated at
// `target`. Throws InvalidStencilError on duplicate or empty stencils.
std::vector<double> predict_weights(std::span<const int> stencil_offsets, double target);

// Compressed row of (index, weight) taps.
struct TapTable {
  std::vector<std::size_t> row_begin;  // size rows+1
  std::vector<std::size_t> index;
  std::vector<double> weight;

  std::size_t rows() const noexcept { return row_begin.empty() ? 0 : row_begin.size() - 1; }
};

// Precomputed predict/update stencils for one level of a line of `n` samples.
struct LevelStencil {
  std::size_t n = 0;
  std::size_t n_even = 0;
  std::size_t n_odd = 0;
  TapTable predict;  // row k (odd sample 2k+1) -> taps into the even samples
  TapTable update;   // row n (even sample 2n)  -> taps into the details
};

// Checks that `n` is a valid line length for the boundary policy.
bool valid_line_length(std::size_t n, Boundary b) noexcept;

LevelStencil make_level_stencil(std::size_t n, const LiftingConfig& cfg);

// One lifting level on split even/odd samples.
void lift_forward(const LevelStencil& st, std::span<const double> even, std::span<const double> odd,
                  std::span<double> coarse, std::span<double> detail);
void lift_inverse(const LevelStencil& st, std::span<const double> coarse, std::span<const double> detail,
                  std::span<double> even, std::span<double> odd);

struct Split1D {
  std::vector<double> coarse;
  std::vector<double> details;
};

Split1D forward_transform_1d(std::span<const double> signal, const LiftingConfig& cfg);
std::vector<double> inverse_transform_1d(std::span<const double> coarse, std::span<const double> details,
                                         const LiftingConfig& cfg);

}  // namespace wavinv::wavelet
