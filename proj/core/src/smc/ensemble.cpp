#include "wavinv/smc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavinv/error.hpp"

namespace wavinv::smc {

std::vector<double> temper_schedule(int M) {
  if (M < 1) throw ParameterError("need at least one bridging step");
  std::vector<double> g(M + 1);
  for (int t = 0; t <= M; ++t) g[t] = double(t) / double(M);
  return g;
}

double log_sum_exp(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

double log_mean_exp(std::span<const double> x) {
  if (x.empty()) throw ShapeError("empty weight vector");
  return log_sum_exp(x) - std::log(double(x.size()));
}

void normalize(EnsembleState& e) {
  const std::size_t n = e.particles.size();
  if (n == 0) throw ShapeError("empty ensemble");
  std::vector<double> lw(n);
  for (std::size_t i = 0; i < n; ++i) lw[i] = e.particles[i].log_weight;
  const double lse = log_sum_exp(lw);
  if (!std::isfinite(lse)) throw DegeneracyError("all importance weights vanished");
  e.normalized_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.normalized_weights[i] = std::exp(lw[i] - lse);
  e.raw_weight_mean_log = lse - std::log(double(n));
}

void reweight(EnsembleState& e, double next_gamma) {
  const double dg = next_gamma - e.gamma;
  if (dg < 0.0) throw ParameterError("temperature must not decrease");
  if (dg > 0.0) {
    for (auto& p : e.particles) {
      const double inc = p.loglik - p.loglik_coarse;
      p.log_weight += std::isnan(inc) ? -std::numeric_limits<double>::infinity() : dg * inc;
    }
  }
  e.gamma = next_gamma;
  normalize(e);
}

double effective_sample_size(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return 1.0 / s;
}

void resample_multinomial(EnsembleState& e, std::mt19937_64& rng) {
  const std::size_t n = e.particles.size();
  if (e.normalized_weights.size() != n) normalize(e);
  std::discrete_distribution<std::size_t> pick(e.normalized_weights.begin(), e.normalized_weights.end());
  std::vector<ParticleState> next;
  next.reserve(n);
  for (std::size_t i = 0; i < n; ++i) next.push_back(e.particles[pick(rng)]);
  for (auto& p : next) p.log_weight = e.raw_weight_mean_log;
  e.particles = std::move(next);
  std::fill(e.normalized_weights.begin(), e.normalized_weights.end(), 1.0 / double(n));
}

}  // namespace wavinv::smc
