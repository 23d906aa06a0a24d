#include "wavinv/wavelet/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "wavinv/error.hpp"

namespace wavinv::wavelet {

void LiftingConfig::validate() const {
  if (half_width < 1) throw ParameterError("lifting half width N must be >= 1");
  if (update_policy == UpdatePolicy::explicit_table &&
      update_table.size() != static_cast<std::size_t>(2 * half_width)) {
    throw ParameterError("explicit update table needs 2N = " + std::to_string(2 * half_width) + " weights");
  }
}

std::vector<double> predict_weights(std::span<const int> stencil_offsets, double target) {
  if (stencil_offsets.empty()) throw InvalidStencilError("empty stencil");
  for (std::size_t a = 0; a < stencil_offsets.size(); ++a)
    for (std::size_t b = a + 1; b < stencil_offsets.size(); ++b)
      if (stencil_offsets[a] == stencil_offsets[b])
        throw InvalidStencilError("duplicate stencil offset " + std::to_string(stencil_offsets[a]));

  std::vector<double> w(stencil_offsets.size());
  for (std::size_t a = 0; a < w.size(); ++a) {
    double num = 1.0, den = 1.0;
    for (std::size_t b = 0; b < w.size(); ++b) {
      if (a == b) continue;
      num *= target - stencil_offsets[b];
      den *= double(stencil_offsets[a] - stencil_offsets[b]);
    }
    w[a] = num / den;
  }
  return w;
}

bool valid_line_length(std::size_t n, Boundary b) noexcept {
  if (b == Boundary::periodic) return n >= 2 && n % 2 == 0;
  return n >= 3 && n % 2 == 1;
}

namespace {

TapTable pack(const std::vector<std::map<std::size_t, double>>& rows) {
  TapTable t;
  t.row_begin.reserve(rows.size() + 1);
  t.row_begin.push_back(0);
  for (const auto& r : rows) {
    for (const auto& [i, w] : r) {
      t.index.push_back(i);
      t.weight.push_back(w);
    }
    t.row_begin.push_back(t.index.size());
  }
  return t;
}

}  // namespace

LevelStencil make_level_stencil(std::size_t n, const LiftingConfig& cfg) {
  cfg.validate();
  if (!valid_line_length(n, cfg.boundary))
    throw ShapeError("line length " + std::to_string(n) +
                     (cfg.boundary == Boundary::periodic ? " is not even" : " is not odd (>= 3)"));

  LevelStencil st;
  st.n = n;
  const bool periodic = cfg.boundary == Boundary::periodic;
  st.n_odd = n / 2;
  st.n_even = periodic ? n / 2 : n / 2 + 1;
  const long N = cfg.half_width;
  const long m_even = static_cast<long>(st.n_even);

  std::vector<std::map<std::size_t, double>> pred(st.n_odd);
  for (long k = 0; k < static_cast<long>(st.n_odd); ++k) {
    long first = k - N + 1;
    long width = 2 * N;
    if (!periodic) {
      width = std::min<long>(width, m_even);
      first = std::clamp<long>(first, 0, m_even - width);
    }
    std::vector<int> offsets(width);
    for (long l = 0; l < width; ++l) offsets[l] = static_cast<int>(first + l - k);
    const auto w = predict_weights(offsets, 0.5);
    for (long l = 0; l < width; ++l) {
      long idx = k + offsets[l];
      if (periodic) idx = ((idx % m_even) + m_even) % m_even;
      pred[k][static_cast<std::size_t>(idx)] += w[l];
    }
  }
  st.predict = pack(pred);

  std::vector<std::map<std::size_t, double>> upd(st.n_even);
  if (cfg.update_policy == UpdatePolicy::derived_from_predict) {
    // Adjoint of the predict stencil. Each column is rescaled by
    // 2 / (1 + column sum) so every synthesized wavelet has zero sample
    // mean; on periodic lines the column sums are exactly 1.
    std::vector<double> colsum(st.n_even, 0.0);
    for (std::size_t k = 0; k < st.n_odd; ++k)
      for (std::size_t p = st.predict.row_begin[k]; p < st.predict.row_begin[k + 1]; ++p)
        colsum[st.predict.index[p]] += st.predict.weight[p];
    for (std::size_t k = 0; k < st.n_odd; ++k) {
      for (std::size_t p = st.predict.row_begin[k]; p < st.predict.row_begin[k + 1]; ++p) {
        const std::size_t e = st.predict.index[p];
        const double scale = periodic ? 1.0 : 2.0 / (1.0 + colsum[e]);
        if (!std::isfinite(scale) || std::abs(1.0 + colsum[e]) < 1e-12)
          throw InvalidStencilError("degenerate update column at even sample " + std::to_string(e));
        upd[e][k] += scale * st.predict.weight[p];
      }
    }
  } else {
    const long m_odd = static_cast<long>(st.n_odd);
    for (long e = 0; e < m_even; ++e) {
      for (long l = -N; l < N; ++l) {
        long k = e + l;
        if (periodic) {
          k = ((k % m_odd) + m_odd) % m_odd;
        } else if (k < 0 || k >= m_odd) {
          continue;
        }
        const double w = cfg.update_table[static_cast<std::size_t>(l + N)];
        if (w != 0.0) upd[e][static_cast<std::size_t>(k)] += w;
      }
    }
  }
  st.update = pack(upd);
  return st;
}

namespace {

inline double tap_sum(const TapTable& t, std::size_t row, std::span<const double> src) {
  double s = 0.0;
  for (std::size_t p = t.row_begin[row]; p < t.row_begin[row + 1]; ++p) s += t.weight[p] * src[t.index[p]];
  return s;
}

}  // namespace

void lift_forward(const LevelStencil& st, std::span<const double> even, std::span<const double> odd,
                  std::span<double> coarse, std::span<double> detail) {
  for (std::size_t k = 0; k < st.n_odd; ++k) detail[k] = 0.5 * (odd[k] - tap_sum(st.predict, k, even));
  for (std::size_t e = 0; e < st.n_even; ++e) coarse[e] = even[e] + tap_sum(st.update, e, detail);
}

void lift_inverse(const LevelStencil& st, std::span<const double> coarse, std::span<const double> detail,
                  std::span<double> even, std::span<double> odd) {
  for (std::size_t e = 0; e < st.n_even; ++e) even[e] = coarse[e] - tap_sum(st.update, e, detail);
  for (std::size_t k = 0; k < st.n_odd; ++k) odd[k] = 2.0 * detail[k] + tap_sum(st.predict, k, even);
}

Split1D forward_transform_1d(std::span<const double> signal, const LiftingConfig& cfg) {
  const auto st = make_level_stencil(signal.size(), cfg);
  std::vector<double> even(st.n_even), odd(st.n_odd);
  for (std::size_t i = 0; i < st.n_even; ++i) even[i] = signal[2 * i];
  for (std::size_t i = 0; i < st.n_odd; ++i) odd[i] = signal[2 * i + 1];
  Split1D out{std::vector<double>(st.n_even), std::vector<double>(st.n_odd)};
  lift_forward(st, even, odd, out.coarse, out.details);
  return out;
}

std::vector<double> inverse_transform_1d(std::span<const double> coarse, std::span<const double> details,
                                         const LiftingConfig& cfg) {
  const bool periodic = cfg.boundary == Boundary::periodic;
  const std::size_t expected_coarse = periodic ? details.size() : details.size() + 1;
  if (details.empty() || coarse.size() != expected_coarse)
    throw ShapeError("coarse/detail sizes " + std::to_string(coarse.size()) + "/" +
                     std::to_string(details.size()) + " are inconsistent");
  const std::size_t n = coarse.size() + details.size();
  const auto st = make_level_stencil(n, cfg);
  std::vector<double> even(st.n_even), odd(st.n_odd);
  lift_inverse(st, coarse, details, even, odd);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < st.n_even; ++i) out[2 * i] = even[i];
  for (std::size_t i = 0; i < st.n_odd; ++i) out[2 * i + 1] = odd[i];
  return out;
}

}  // namespace wavinv::wavelet
