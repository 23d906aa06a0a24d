#include "wavinv/benchmarks/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavinv/error.hpp"

namespace wavinv::benchmarks {

double rmse(const GridField2D& mean_field, const GridField2D& truth_field) {
  if (!mean_field.values.same_shape(truth_field.values)) throw ShapeError("rmse: field shapes differ");
  if (mean_field.values.empty()) throw ShapeError("rmse: empty field");
  const auto a = mean_field.values.flat(), b = truth_field.values.flat();
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / double(a.size()));
}

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q) {
  if (values.size() != weights.size() || values.empty()) throw ShapeError("weighted_quantile: bad sizes");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile level must lie in [0,1]");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DegeneracyError("weighted_quantile: weights sum to zero");
  double cum = 0.0;
  for (std::size_t i : order) {
    cum += weights[i] / total;
    // 1e-12 absorbs rounding in the running sum
    if (cum >= q - 1e-12) return values[i];
  }
  return values[order.back()];
}

FieldSummary summarize_fields(std::span<const GridField2D> fields, std::span<const double> weights, double lower_q,
                              double upper_q) {
  if (fields.empty() || fields.size() != weights.size()) throw ShapeError("summarize_fields: bad ensemble");
  for (const auto& f : fields)
    if (!f.values.same_shape(fields[0].values)) throw ShapeError("summarize_fields: field shapes differ");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DegeneracyError("summarize_fields: weights sum to zero");
  FieldSummary s{fields[0], fields[0], fields[0]};
  std::vector<double> v(fields.size());
  for (std::size_t k = 0; k < fields[0].values.size(); ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      v[i] = fields[i].values.flat()[k];
      m += weights[i] / total * v[i];
    }
    s.mean.values.flat()[k] = m;
    s.lower.values.flat()[k] = weighted_quantile(v, weights, lower_q);
    s.upper.values.flat()[k] = weighted_quantile(v, weights, upper_q);
  }
  return s;
}

std::vector<double> diagonal(const GridField2D& field) {
  if (field.rows() != field.cols()) throw ShapeError("diagonal: field is not square");
  std::vector<double> d(field.rows());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = field(i, i);
  return d;
}

DiagonalSlice diagonal_slice_stats(std::span<const GridField2D> fields, std::span<const double> weights) {
  const FieldSummary s = summarize_fields(fields, weights);
  DiagonalSlice out;
  out.mean = diagonal(s.mean);
  out.lower = diagonal(s.lower);
  out.upper = diagonal(s.upper);
  for (std::size_t i = 0; i < out.mean.size(); ++i) out.position.push_back(s.mean.x(i));
  return out;
}

double band_coverage(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper) {
  if (truth.size() != lower.size() || truth.size() != upper.size() || truth.empty())
    throw ShapeError("band_coverage: sizes differ");
  std::size_t in = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) in += (truth[i] >= lower[i] && truth[i] <= upper[i]);
  return double(in) / double(truth.size());
}

}  // namespace wavinv::benchmarks
