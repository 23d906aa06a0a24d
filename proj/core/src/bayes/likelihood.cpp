#include "wavinv/bayes/likelihood.hpp"

#include <cmath>
#include <string>

#include "wavinv/error.hpp"

namespace wavinv::bayes {

double log_likelihood_from_residual(double squared_residual, std::size_t n_data, const PriorHyperparams& hp) {
  if (!(squared_residual >= 0.0)) throw DomainError("squared residual must be non-negative");
  return -(hp.likelihood_a0 + 0.5 * double(n_data)) * std::log(hp.likelihood_b0 + 0.5 * squared_residual);
}

double log_likelihood(std::span<const double> data, std::span<const double> predicted, const PriorHyperparams& hp) {
  if (data.size() != predicted.size())
    throw ShapeError("forward map returned " + std::to_string(predicted.size()) + " readings, expected " +
                     std::to_string(data.size()));
  double ss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data[i] - predicted[i];
    ss += r * r;
  }
  return log_likelihood_from_residual(ss, data.size(), hp);
}

double log_likelihood(const ParticleState& p, const darcy::SensorObservation& obs, const ForwardFn& forward,
                      const PriorHyperparams& hp) {
  const auto predicted = forward(p);
  return log_likelihood(obs.readings, predicted, hp);
}

double log_tempered_target(const ParticleState& p, const darcy::SensorObservation& obs, double gamma,
                           const PriorHyperparams& hp, const TreeLayout& layout, const ForwardFn& forward) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("temperature must lie in [0,1]");
  const double lp = log_prior(p, hp, layout);
  if (gamma == 0.0) return lp;
  return gamma * log_likelihood(p, obs, forward, hp) + lp;
}

}  // namespace wavinv::bayes
