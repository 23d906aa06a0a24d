#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wavinv/array2d.hpp"
#include "wavinv/wavelet/lifting.hpp"

namespace wavinv::wavelet {

// Orientation bands. In node layout, with s = 2^level:
//   horizontal: rows at odd multiples of s, columns at even multiples
//   vertical:   rows at even multiples of s, columns at odd multiples
//   diagonal:   both odd multiples
enum class Band : int { horizontal = 0, vertical = 1, diagonal = 2 };
inline constexpr int kBands = 3;

// Scaling block plus detail bands, coarsest detail level first (j = 0).
// mask(j, band)(i, k) == 1 marks an active (slab) coefficient.
struct CoefficientQuadtree {
  int max_level = 0;
  Array2D<double> scaling;
  std::vector<std::array<Array2D<double>, kBands>> details;
  std::vector<std::array<Array2D<std::uint8_t>, kBands>> mask;
  Rect domain{0.0, 2.0, 0.0, 2.0};
  Boundary boundary = Boundary::periodic;
  int half_width = 2;

  Array2D<double>& band(int j, Band b) { return details.at(j)[static_cast<int>(b)]; }
  const Array2D<double>& band(int j, Band b) const { return details.at(j)[static_cast<int>(b)]; }
  Array2D<std::uint8_t>& band_mask(int j, Band b) { return mask.at(j)[static_cast<int>(b)]; }
  const Array2D<std::uint8_t>& band_mask(int j, Band b) const { return mask.at(j)[static_cast<int>(b)]; }

  // Size of the sample grid the tree describes.
  std::size_t grid_rows() const;
  std::size_t grid_cols() const;

  // Shape checks and the mask-implies-zero invariant. Throws ShapeError or
  // InvariantError.
  void validate() const;
  // Throws InvariantError if an active detail has an inactive parent
  // (periodic quadtrees only).
  void validate_zero_tree() const;

  friend bool operator==(const CoefficientQuadtree&, const CoefficientQuadtree&) = default;
};

// Periodic quadtree over [0,2]^2 with a 2x2 scaling block and max_level
// detail levels; level j holds (2^(j+1))^2 coefficients per band. All zero,
// all details inactive.
CoefficientQuadtree make_parameter_tree(int max_level, int half_width = 2);

// Returns a copy extended (zero, inactive) or truncated to `max_level` levels.
CoefficientQuadtree with_levels(const CoefficientQuadtree& tree, int max_level);

CoefficientQuadtree forward_transform_2d(const GridField2D& field, int levels, const LiftingConfig& cfg);
GridField2D inverse_transform_2d(const CoefficientQuadtree& tree, const LiftingConfig& cfg);

// Packing between a quadtree and an array in node layout.
Array2D<double> to_node_layout(const CoefficientQuadtree& tree);
CoefficientQuadtree from_node_layout(const Array2D<double>& a, int levels, Boundary boundary, Rect domain,
                                     int half_width);

// 64x64 periodic field on [0,2]^2 -> 32x32 field on [0,1]^2 (indices < 32).
GridField2D crop_reconstruction(const GridField2D& field);
// Same input -> the 33x33 closed-grid field on [0,1]^2 (indices <= 32).
GridField2D crop_reconstruction_nodes(const GridField2D& field);

CoefficientQuadtree threshold_tree(const CoefficientQuadtree& tree, double epsilon, double field_norm);

// Scaling coefficients plus active details on levels j < up_to_scale.
std::size_t count_active_bases(const CoefficientQuadtree& tree, int up_to_scale);

}  // namespace wavinv::wavelet
