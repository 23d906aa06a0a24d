#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <span>

#include "wavinv/bayes/layout.hpp"
#include "wavinv/bayes/prior.hpp"

namespace wavinv::smc {

using bayes::ParticleState;

struct RWAdaptState {
  double sigma = 0.1;
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  double acceptance() const { return proposed ? double(accepted) / double(proposed) : 0.0; }
};

// Doubles sigma above 30% acceptance, halves it below 15%, then resets the
// counters. Throws ParameterError if nothing was proposed.
void adapt_step(RWAdaptState& rw);

// Log-likelihood of a particle at its own scale. Must be safe to call
// concurrently.
using LogLikelihoodFn = std::function<double(const ParticleState&)>;

// pi_t(w) = gamma * l_s(w) + (1 - gamma) * l_{s-1}(w) + log prior_s(w),
// where l_{s-1} sees only the nodes of levels < s. With bridge off (or at
// scale 0) the coarse term is dropped.
struct TemperedTarget {
  const bayes::TreeLayout* layout = nullptr;
  const bayes::PriorHyperparams* prior = nullptr;
  LogLikelihoodFn log_likelihood;
  double gamma = 0.0;
  bool bridge = true;
};

struct MoveCounts {
  std::size_t value_accepted = 0;
  std::size_t value_proposed = 0;
  std::size_t indicator_accepted = 0;
  std::size_t indicator_proposed = 0;
  std::size_t likelihood_calls = 0;

  MoveCounts& operator+=(const MoveCounts& o);
};

// Fills p.loglik and p.loglik_coarse for the current state.
std::size_t refresh_likelihoods(ParticleState& p, const TemperedTarget& target);

// One value move (joint Gaussian step on the active coefficients) followed
// by one indicator move (birth or death of a subtree at a node whose parent
// is active). Requires p's cached likelihoods to be current.
// `scale`, when non-empty, multiplies sigma per node (one entry per node of
// the particle); empty means the isotropic step sigma * I.
MoveCounts rejuvenate(ParticleState& p, const TemperedTarget& target, double sigma, std::mt19937_64& rng,
                      std::span<const double> scale = {});

MoveCounts value_move(ParticleState& p, const TemperedTarget& target, double sigma, std::mt19937_64& rng,
                      std::span<const double> scale = {});
MoveCounts indicator_move(ParticleState& p, const TemperedTarget& target, std::mt19937_64& rng);

// Nodes of levels 1..p.scale whose parent is active.
std::size_t count_toggle_candidates(const ParticleState& p, const bayes::TreeLayout& layout);

}  // namespace wavinv::smc
