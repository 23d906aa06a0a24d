#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wavinv/bayes/layout.hpp"
#include "wavinv/bayes/prior.hpp"
#include "wavinv/darcy/observation.hpp"

namespace wavinv::bayes {

// Predicted sensor readings for a particle.
using ForwardFn = std::function<std::vector<double>(const ParticleState&)>;

// Normal-Gamma marginal likelihood up to a constant:
//   -(a0 + n/2) ln(b0 + |r|^2 / 2)
double log_likelihood_from_residual(double squared_residual, std::size_t n_data, const PriorHyperparams& hp);

double log_likelihood(std::span<const double> data, std::span<const double> predicted, const PriorHyperparams& hp);

double log_likelihood(const ParticleState& p, const darcy::SensorObservation& obs, const ForwardFn& forward,
                      const PriorHyperparams& hp);

// gamma * log_likelihood + log_prior
double log_tempered_target(const ParticleState& p, const darcy::SensorObservation& obs, double gamma,
                           const PriorHyperparams& hp, const TreeLayout& layout, const ForwardFn& forward);

}  // namespace wavinv::bayes
