#pragma once

#include <span>
#include <vector>

#include "wavinv/array2d.hpp"

namespace wavinv::benchmarks {

// sqrt(mean (a - b)^2) over all grid points.
double rmse(const GridField2D& mean_field, const GridField2D& truth_field);

// Smallest value whose cumulative normalized weight reaches q (inverse of the
// weighted empirical CDF). Weights need not be normalized.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q);

// Pointwise weighted mean and quantiles over an ensemble of fields.
struct FieldSummary {
  GridField2D mean, lower, upper;
};
FieldSummary summarize_fields(std::span<const GridField2D> fields, std::span<const double> weights,
                              double lower_q = 0.05, double upper_q = 0.95);

// Values along the diagonal x = y (row == col) of a square field.
std::vector<double> diagonal(const GridField2D& field);

struct DiagonalSlice {
  std::vector<double> position;  // x = y coordinate
  std::vector<double> mean, lower, upper;
};
// Mean and weighted 5% / 95% quantiles along x = y.
DiagonalSlice diagonal_slice_stats(std::span<const GridField2D> fields, std::span<const double> weights);

// Fraction of truth values inside [lower, upper] pointwise.
double band_coverage(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper);

}  // namespace wavinv::benchmarks
