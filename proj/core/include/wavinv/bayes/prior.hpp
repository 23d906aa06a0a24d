#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wavinv/bayes/layout.hpp"

namespace wavinv::bayes {

struct PriorHyperparams {
  double gamma_root = 0.85;     // mixing factor at s = 1
  double gamma_default = 0.5;   // mixing factor at s > 1
  double variance_alpha_inv = 0.7;
  double scaling_factor_r = 0.5;
  double likelihood_a0 = 0.001;
  double likelihood_b0 = 0.001;

  void validate() const;
};

// One spike-and-slab configuration over the nodes of levels <= scale of a
// layout. Inactive values are exactly zero. The two cached log-likelihoods
// belong to the sampler: loglik at `scale`, loglik_coarse at scale - 1.
struct ParticleState {
  std::vector<double> values;
  std::vector<std::uint8_t> active;
  int scale = 0;
  double log_weight = 0.0;
  double loglik = 0.0;
  double loglik_coarse = 0.0;
};

double slab_std(int s, const PriorHyperparams& hp);
double slab_probability(int s, bool parent_active, const PriorHyperparams& hp);

ParticleState sample_prior(std::mt19937_64& rng, int scale, const PriorHyperparams& hp, const TreeLayout& layout);

// Appends levels (old scale, new_scale] to p, sampled from the prior given
// the carried coarse levels.
void extend_particle(ParticleState& p, int new_scale, std::mt19937_64& rng, const PriorHyperparams& hp,
                     const TreeLayout& layout);

// Draws node i and all its descendants (within p.scale) from the prior
// conditional on i being active. Returns the log density of the draw.
double sample_active_subtree(ParticleState& p, std::size_t i, std::mt19937_64& rng, const PriorHyperparams& hp,
                             const TreeLayout& layout);
// Same density for an existing configuration.
double log_active_subtree_density(const ParticleState& p, std::size_t i, const PriorHyperparams& hp,
                                  const TreeLayout& layout);
// Deactivates node i and every descendant, zeroing values.
void deactivate_subtree(ParticleState& p, std::size_t i, const TreeLayout& layout);

// Throws InvariantError on a nonzero spike, an inactive root, or an active
// node under an inactive parent. ShapeError on size mismatch.
void check_particle(const ParticleState& p, const TreeLayout& layout);

double log_prior(const ParticleState& p, const PriorHyperparams& hp, const TreeLayout& layout);

}  // namespace wavinv::bayes
