#include "wavinv/smc/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "wavinv/error.hpp"
#include "wavinv/smc/parallel.hpp"
#include "wavinv/smc/rng.hpp"

namespace wavinv::smc {

namespace {

// Re-raises a library error with the particle id prepended, keeping its kind.
template <class F>
auto tagged(std::size_t particle, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "particle " + std::to_string(particle) + ": " + e.what());
  }
}

// Largest next temperature in (gamma, 1] whose reweighting keeps the ESS at
// or above target * N.
double adaptive_next_gamma(const EnsembleState& e, double target) {
  const std::size_t n = e.size();
  auto ess_at = [&](double g) {
    const double dg = g - e.gamma;
    std::vector<double> lw(n);
    for (std::size_t i = 0; i < n; ++i)
      lw[i] = e.particles[i].log_weight + dg * (e.particles[i].loglik - e.particles[i].loglik_coarse);
    const double lse = log_sum_exp(lw);
    double s = 0.0;
    for (double v : lw) s += std::exp(2.0 * (v - lse));
    return 1.0 / s;
  };
  if (ess_at(1.0) >= target * double(n)) return 1.0;
  double lo = e.gamma, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ess_at(mid) >= target * double(n) ? lo : hi) = mid;
  }
  return std::max(lo, e.gamma + 1e-12);
}

}  // namespace

void SmcSettings::validate() const {
  if (particles < 1) throw ParameterError("particle count must be positive");
  if (densities < 1) throw ParameterError("need at least one bridging step");
  if (!(ess_fraction > 0.0 && ess_fraction <= 1.0)) throw ParameterError("ESS fraction must lie in (0,1]");
  if (!(initial_sigma > 0.0)) throw ParameterError("initial step must be positive");
  if (!(adaptive_ess_target > 0.0 && adaptive_ess_target < 1.0))
    throw ParameterError("adaptive ESS target must lie in (0,1)");
  if (workers < 1) throw ParameterError("worker count must be positive");
}

void BayesFactorLedger::push(double lz) {
  log_bf.push_back(log_z.empty() ? std::numeric_limits<double>::quiet_NaN() : lz - log_z.back());
  log_z.push_back(lz);
}

int BayesFactorLedger::best() const {
  if (log_z.empty()) return -1;
  return int(std::max_element(log_z.begin(), log_z.end()) - log_z.begin());
}

std::vector<double> ensemble_node_scale(const EnsembleState& e, const bayes::TreeLayout& layout,
                                        const bayes::PriorHyperparams& prior) {
  const std::size_t m = e.particles.front().values.size();
  std::vector<double> w1(m, 0.0), s1(m, 0.0), s2(m, 0.0), cnt(m, 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& p = e.particles[i];
    const double w = e.normalized_weights[i];
    for (std::size_t k = 0; k < m; ++k) {
      if (!p.active[k]) continue;
      w1[k] += w;
      s1[k] += w * p.values[k];
      cnt[k] += 1.0;
    }
  }
  for (std::size_t k = 0; k < m; ++k) s1[k] = w1[k] > 0.0 ? s1[k] / w1[k] : 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& p = e.particles[i];
    const double w = e.normalized_weights[i];
    for (std::size_t k = 0; k < m; ++k)
      if (p.active[k]) s2[k] += w * (p.values[k] - s1[k]) * (p.values[k] - s1[k]);
  }
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double sd = w1[k] > 0.0 ? std::sqrt(s2[k] / w1[k]) : 0.0;
    out[k] = (cnt[k] >= 2.0 && sd > 0.0) ? sd : bayes::slab_std(layout.level(k), prior);
  }
  return out;
}

ScaleRunRecord run_scale(int s, const ScaleRunRecord* previous, const SmcModel& model, const SmcSettings& settings) {
  settings.validate();
  model.prior.validate();
  if (s < 0 || s > model.layout.max_level()) throw LevelError("scale outside the layout");
  if (s > 0 && (!previous || previous->scale != s - 1))
    throw ParameterError("scale " + std::to_string(s) + " needs the record of scale " + std::to_string(s - 1));
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t n = std::size_t(settings.particles);
  ScaleRunRecord rec;
  rec.scale = s;
  EnsembleState& e = rec.ensemble;
  e.particles.resize(n);

  TemperedTarget target;
  target.layout = &model.layout;
  target.prior = &model.prior;
  target.log_likelihood = model.log_likelihood;
  target.bridge = true;

  std::vector<std::size_t> calls(n, 0);
  if (s == 0 && !previous) {
    parallel_for(n, settings.workers, [&](std::size_t i) {
      auto rng = keyed_rng(settings.seed, Stream::prior, 0, 0, i);
      auto& p = e.particles[i];
      p = bayes::sample_prior(rng, 0, model.prior, model.layout);
      p.log_weight = 0.0;
      calls[i] = tagged(i, [&] { return refresh_likelihoods(p, target); });
    });
  } else {
    if (previous->ensemble.size() != n) throw ParameterError("particle count changed between scales");
    parallel_for(n, settings.workers, [&](std::size_t i) {
      auto rng = keyed_rng(settings.seed, Stream::extend, std::uint64_t(s), 0, i);
      auto& p = e.particles[i];
      p = previous->ensemble.particles[i];
      const double coarse = p.loglik;
      bayes::extend_particle(p, s, rng, model.prior, model.layout);
      p.loglik = tagged(i, [&] { return model.log_likelihood(p); });
      p.loglik_coarse = coarse;  // the carried levels are exactly the previous particle
      calls[i] = 1;
    });
  }
  normalize(e);
  rec.initial_log_weight_mean = e.raw_weight_mean_log;

  const auto schedule = temper_schedule(settings.densities);
  RWAdaptState rw;
  rw.sigma = settings.initial_sigma;
  std::vector<MoveCounts> counts(n);
  for (int t = 1;; ++t) {
    double next;
    if (settings.schedule == Schedule::linear) {
      if (t > settings.densities) break;
      next = schedule[t];
    } else {
      if (e.gamma >= 1.0) break;
      next = adaptive_next_gamma(e, settings.adaptive_ess_target);
    }
    try {
      reweight(e, next);
    } catch (const DegeneracyError& err) {
      throw DegeneracyError("scale " + std::to_string(s) + ", step " + std::to_string(t) + ": " + err.what());
    }
    e.t = t;
    const double ess = effective_sample_size(e.normalized_weights);
    rec.gamma_trace.push_back(next);
    rec.ess_trace.push_back(ess);
    const bool forced = std::find(settings.forced_resample_steps.begin(), settings.forced_resample_steps.end(), t) !=
                        settings.forced_resample_steps.end();
    if (ess < settings.ess_fraction * double(n) || forced) {
      auto rng = keyed_rng(settings.seed, Stream::resample, std::uint64_t(s), std::uint64_t(t), 0);
      resample_multinomial(e, rng);
      rec.resample_steps.push_back(t);
    }

    target.gamma = next;
    const double sigma = rw.sigma;
    std::vector<double> node_scale;
    if (settings.proposal == Proposal::ensemble_scaled) node_scale = ensemble_node_scale(e, model.layout, model.prior);
    parallel_for(n, settings.workers, [&](std::size_t i) {
      auto rng = keyed_rng(settings.seed, Stream::move, std::uint64_t(s), std::uint64_t(t), i);
      counts[i] = tagged(i, [&] { return rejuvenate(e.particles[i], target, sigma, rng, node_scale); });
    });
    MoveCounts total;
    for (const auto& c : counts) total += c;
    for (std::size_t i = 0; i < n; ++i) calls[i] += counts[i].likelihood_calls;
    rw.accepted += total.value_accepted;
    rw.proposed += total.value_proposed;
    rec.sigma_trace.push_back(sigma);
    rec.acceptance_trace.push_back(rw.acceptance());
    rec.indicator_acceptance_trace.push_back(
        total.indicator_proposed ? double(total.indicator_accepted) / double(total.indicator_proposed) : 0.0);
    adapt_step(rw);
  }
  normalize(e);
  rec.log_z = log_normalizing_ratio(e);
  if (previous) rec.log_bf = rec.log_z - previous->log_z;
  for (auto c : calls) rec.likelihood_calls += c;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

AdaptiveRun run_adaptive(int max_scale, const SmcModel& model, const SmcSettings& settings,
                         const std::function<void(const ScaleRunRecord&)>& on_scale) {
  if (max_scale < 0) throw LevelError("negative maximum scale");
  if (max_scale > model.layout.max_level()) throw LevelError("maximum scale exceeds the layout depth");
  AdaptiveRun run;
  bool stopped = false;
  for (int s = 0; s <= max_scale; ++s) {
    const ScaleRunRecord* prev = run.records.empty() ? nullptr : &run.records.back();
    auto rec = run_scale(s, prev, model, settings);
    run.ledger.push(rec.log_z);
    if (on_scale) on_scale(rec);
    run.records.push_back(std::move(rec));
    if (!stopped) run.stop_scale = s;
    if (!stopped && s > 0 && run.ledger.log_bf.back() <= settings.stop_threshold) {
      stopped = true;
      if (!settings.continue_after_stop) break;
    }
  }
  const auto begin = run.ledger.log_z.begin();
  run.selected_scale = int(std::max_element(begin, begin + run.stop_scale + 1) - begin);
  return run;
}

}  // namespace wavinv::smc
