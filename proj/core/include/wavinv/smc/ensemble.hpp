#pragma once

#include <random>
#include <span>
#include <vector>

#include "wavinv/bayes/prior.hpp"

namespace wavinv::smc {

using bayes::ParticleState;

// Unnormalized log weights live in particles[i].log_weight.
struct EnsembleState {
  std::vector<ParticleState> particles;
  std::vector<double> normalized_weights;
  double raw_weight_mean_log = 0.0;  // log of the mean unnormalized weight
  int t = 0;
  double gamma = 0.0;

  std::size_t size() const noexcept { return particles.size(); }
};

// gamma_t = t / M, t = 0..M.
std::vector<double> temper_schedule(int M);

double log_sum_exp(std::span<const double> x);
double log_mean_exp(std::span<const double> x);

// Recomputes normalized_weights and raw_weight_mean_log from the particles'
// log weights. Throws DegeneracyError if every weight is zero.
void normalize(EnsembleState& e);

// Multiplies weight i by exp((next_gamma - gamma) * (loglik_i - loglik_coarse_i)).
void reweight(EnsembleState& e, double next_gamma);

double effective_sample_size(std::span<const double> normalized_weights);

// N i.i.d. categorical draws; every unnormalized weight is reset to the
// pre-resampling mean, so raw_weight_mean_log is unchanged.
void resample_multinomial(EnsembleState& e, std::mt19937_64& rng);

inline double log_normalizing_ratio(const EnsembleState& e) { return e.raw_weight_mean_log; }

}  // namespace wavinv::smc
