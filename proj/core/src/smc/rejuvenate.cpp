#include "wavinv/smc/rejuvenate.hpp"

#include <cmath>
#include <limits>

#include "wavinv/error.hpp"

namespace wavinv::smc {

namespace {

bool uses_coarse(const ParticleState& p, const TemperedTarget& t) { return t.bridge && p.scale > 0; }

double coarse_loglik(const ParticleState& p, const TemperedTarget& t) {
  ParticleState c;
  const std::size_t n = t.layout->count_up_to(p.scale - 1);
  c.values.assign(p.values.begin(), p.values.begin() + n);
  c.active.assign(p.active.begin(), p.active.begin() + n);
  c.scale = p.scale - 1;
  return t.log_likelihood(c);
}

double tempered(const ParticleState& p, const TemperedTarget& t, double log_prior) {
  double v = log_prior;
  if (t.gamma > 0.0) v += t.gamma * p.loglik;
  if (uses_coarse(p, t) && t.gamma < 1.0) v += (1.0 - t.gamma) * p.loglik_coarse;
  return v;
}

bool accept(double log_ratio, std::mt19937_64& rng) {
  if (std::isnan(log_ratio)) return false;
  if (log_ratio >= 0.0) return true;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return std::log(unif(rng)) < log_ratio;
}

std::size_t pick_candidate(const ParticleState& p, const bayes::TreeLayout& layout, std::size_t k) {
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (layout.level(i) == 0) continue;
    if (!p.active[layout.parent(i)]) continue;
    if (k == 0) return i;
    --k;
  }
  throw InvariantError("toggle candidate index out of range");
}

}  // namespace

void adapt_step(RWAdaptState& rw) {
  if (rw.proposed == 0) throw ParameterError("no proposals recorded");
  const double a = rw.acceptance();
  if (a > 0.30)
    rw.sigma *= 2.0;
  else if (a < 0.15)
    rw.sigma *= 0.5;
  rw.accepted = 0;
  rw.proposed = 0;
}

MoveCounts& MoveCounts::operator+=(const MoveCounts& o) {
  value_accepted += o.value_accepted;
  value_proposed += o.value_proposed;
  indicator_accepted += o.indicator_accepted;
  indicator_proposed += o.indicator_proposed;
  likelihood_calls += o.likelihood_calls;
  return *this;
}

std::size_t refresh_likelihoods(ParticleState& p, const TemperedTarget& t) {
  p.loglik = t.log_likelihood(p);
  if (uses_coarse(p, t)) {
    p.loglik_coarse = coarse_loglik(p, t);
    return 2;
  }
  p.loglik_coarse = 0.0;
  return 1;
}

std::size_t count_toggle_candidates(const ParticleState& p, const bayes::TreeLayout& layout) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.values.size(); ++i)
    if (layout.level(i) > 0 && p.active[layout.parent(i)]) ++k;
  return k;
}

MoveCounts value_move(ParticleState& p, const TemperedTarget& t, double sigma, std::mt19937_64& rng,
                      std::span<const double> scale) {
  MoveCounts mc;
  mc.value_proposed = 1;
  if (!(sigma > 0.0)) {
    // Degenerate proposal: w' = w, ratio 1.
    mc.value_accepted = 1;
    return mc;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  ParticleState q = p;
  for (std::size_t i = 0; i < q.values.size(); ++i)
    if (q.active[i]) q.values[i] += sigma * (scale.empty() ? 1.0 : scale[i]) * normal(rng);
  const double lp_old = bayes::log_prior(p, *t.prior, *t.layout);
  const double lp_new = bayes::log_prior(q, *t.prior, *t.layout);
  mc.likelihood_calls = refresh_likelihoods(q, t);
  if (accept(tempered(q, t, lp_new) - tempered(p, t, lp_old), rng)) {
    q.log_weight = p.log_weight;
    p = std::move(q);
    mc.value_accepted = 1;
  }
  return mc;
}

MoveCounts indicator_move(ParticleState& p, const TemperedTarget& t, std::mt19937_64& rng) {
  MoveCounts mc;
  const auto& layout = *t.layout;
  const std::size_t k_old = count_toggle_candidates(p, layout);
  if (k_old == 0) return mc;
  mc.indicator_proposed = 1;
  std::uniform_int_distribution<std::size_t> uniform(0, k_old - 1);
  const std::size_t node = pick_candidate(p, layout, uniform(rng));

  ParticleState q = p;
  double log_q_ratio = 0.0;  // log q(reverse) - log q(forward), without the 1/K factors
  if (p.active[node]) {
    log_q_ratio = bayes::log_active_subtree_density(p, node, *t.prior, layout);
    bayes::deactivate_subtree(q, node, layout);
  } else {
    log_q_ratio = -bayes::sample_active_subtree(q, node, rng, *t.prior, layout);
  }
  const std::size_t k_new = count_toggle_candidates(q, layout);
  log_q_ratio += std::log(double(k_old)) - std::log(double(k_new));

  const double lp_old = bayes::log_prior(p, *t.prior, layout);
  const double lp_new = bayes::log_prior(q, *t.prior, layout);
  q.loglik = t.log_likelihood(q);
  mc.likelihood_calls = 1;
  if (uses_coarse(q, t)) {
    if (layout.level(node) < q.scale) {
      q.loglik_coarse = coarse_loglik(q, t);
      ++mc.likelihood_calls;
    } else {
      q.loglik_coarse = p.loglik_coarse;  // coarse levels untouched
    }
  }
  if (accept(tempered(q, t, lp_new) - tempered(p, t, lp_old) + log_q_ratio, rng)) {
    q.log_weight = p.log_weight;
    p = std::move(q);
    mc.indicator_accepted = 1;
  }
  return mc;
}

MoveCounts rejuvenate(ParticleState& p, const TemperedTarget& t, double sigma, std::mt19937_64& rng,
                      std::span<const double> scale) {
  MoveCounts mc = value_move(p, t, sigma, rng, scale);
  mc += indicator_move(p, t, rng);
  return mc;
}

}  // namespace wavinv::smc
