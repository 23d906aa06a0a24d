#include "wavinv/bayes/prior.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavinv/error.hpp"

namespace wavinv::bayes {

namespace {

double log_normal0(double v, double sd) {
  return -0.5 * std::log(2.0 * std::numbers::pi * sd * sd) - 0.5 * (v / sd) * (v / sd);
}

bool parent_active(const ParticleState& p, std::size_t i, const TreeLayout& layout) {
  const int q = layout.parent(i);
  return q < 0 || p.active[q];
}

}  // namespace

void PriorHyperparams::validate() const {
  auto in_unit = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw ParameterError(std::string(name) + " must lie in (0,1]");
  };
  in_unit(gamma_root, "gamma_root");
  in_unit(gamma_default, "gamma_default");
  in_unit(scaling_factor_r, "scaling_factor_r");
  if (!(variance_alpha_inv > 0.0) || !std::isfinite(variance_alpha_inv))
    throw ParameterError("variance_alpha_inv must be positive");
  if (!(likelihood_a0 > 0.0) || !(likelihood_b0 > 0.0)) throw ParameterError("a0 and b0 must be positive");
}

double slab_std(int s, const PriorHyperparams& hp) {
  if (s < 0) throw LevelError("negative prior level");
  return std::sqrt(std::pow(hp.scaling_factor_r, s) * hp.variance_alpha_inv);
}

double slab_probability(int s, bool parent_is_active, const PriorHyperparams& hp) {
  if (s < 0) throw LevelError("negative prior level");
  if (s == 0) return 1.0;
  if (!parent_is_active) return 0.0;
  if (s == 1) return hp.gamma_root;
  return std::pow(hp.gamma_default, s);
}

ParticleState sample_prior(std::mt19937_64& rng, int scale, const PriorHyperparams& hp, const TreeLayout& layout) {
  if (scale < 0) throw LevelError("negative scale");
  if (scale > layout.max_level()) throw LevelError("scale exceeds the layout depth");
  ParticleState p;
  p.scale = -1;
  extend_particle(p, scale, rng, hp, layout);
  return p;
}

void extend_particle(ParticleState& p, int new_scale, std::mt19937_64& rng, const PriorHyperparams& hp,
                     const TreeLayout& layout) {
  if (new_scale < p.scale) throw LevelError("cannot extend to a coarser scale");
  if (new_scale > layout.max_level()) throw LevelError("scale exceeds the layout depth");
  const std::size_t begin = layout.count_up_to(p.scale);
  const std::size_t end = layout.count_up_to(new_scale);
  p.values.resize(end, 0.0);
  p.active.resize(end, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Nodes are sorted by level, so parents are settled before children.
  for (std::size_t i = begin; i < end; ++i) {
    const int s = layout.level(i);
    const double prob = slab_probability(s, parent_active(p, i, layout), hp);
    const bool on = prob >= 1.0 || (prob > 0.0 && unif(rng) < prob);
    p.active[i] = on ? 1 : 0;
    p.values[i] = on ? slab_std(s, hp) * normal(rng) : 0.0;
  }
  p.scale = new_scale;
}

double sample_active_subtree(ParticleState& p, std::size_t i, std::mt19937_64& rng, const PriorHyperparams& hp,
                             const TreeLayout& layout) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = p.values.size();
  double logq = 0.0;
  std::vector<std::size_t> stack{i};
  bool root = true;
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    const int s = layout.level(k);
    bool on = true;
    if (!root) {
      const double prob = slab_probability(s, true, hp);
      on = unif(rng) < prob;
      logq += std::log(on ? prob : 1.0 - prob);
    }
    root = false;
    p.active[k] = on ? 1 : 0;
    if (!on) {
      p.values[k] = 0.0;
      continue;
    }
    const double sd = slab_std(s, hp);
    p.values[k] = sd * normal(rng);
    logq += log_normal0(p.values[k], sd);
    for (int c : layout.children(k))
      if (std::size_t(c) < n) stack.push_back(std::size_t(c));
  }
  return logq;
}

double log_active_subtree_density(const ParticleState& p, std::size_t i, const PriorHyperparams& hp,
                                  const TreeLayout& layout) {
  const std::size_t n = p.values.size();
  double logq = 0.0;
  std::vector<std::size_t> stack{i};
  bool root = true;
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    const int s = layout.level(k);
    const bool on = p.active[k] != 0;
    if (!root) {
      const double prob = slab_probability(s, true, hp);
      logq += std::log(on ? prob : 1.0 - prob);
    } else if (!on) {
      throw InvariantError("subtree root is inactive");
    }
    root = false;
    if (!on) continue;
    logq += log_normal0(p.values[k], slab_std(s, hp));
    for (int c : layout.children(k))
      if (std::size_t(c) < n) stack.push_back(std::size_t(c));
  }
  return logq;
}

void deactivate_subtree(ParticleState& p, std::size_t i, const TreeLayout& layout) {
  const std::size_t n = p.values.size();
  std::vector<std::size_t> stack{i};
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    if (!p.active[k]) continue;
    p.active[k] = 0;
    p.values[k] = 0.0;
    for (int c : layout.children(k))
      if (std::size_t(c) < n) stack.push_back(std::size_t(c));
  }
}

void check_particle(const ParticleState& p, const TreeLayout& layout) {
  const std::size_t n = layout.count_up_to(p.scale);
  if (p.values.size() != n || p.active.size() != n)
    throw ShapeError("particle holds " + std::to_string(p.values.size()) + " values, scale " +
                     std::to_string(p.scale) + " needs " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.active[i]) {
      if (layout.level(i) == 0) throw InvariantError("scaling node " + std::to_string(i) + " is inactive");
      if (p.values[i] != 0.0) throw InvariantError("spike node " + std::to_string(i) + " has a nonzero value");
    } else if (!parent_active(p, i, layout)) {
      throw InvariantError("active node " + std::to_string(i) + " has an inactive parent");
    }
  }
}

double log_prior(const ParticleState& p, const PriorHyperparams& hp, const TreeLayout& layout) {
  check_particle(p, layout);
  double lp = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (!parent_active(p, i, layout)) continue;  // forced spike, mass 1
    const int s = layout.level(i);
    const double prob = slab_probability(s, true, hp);
    if (p.active[i]) {
      if (prob < 1.0) lp += std::log(prob);
      lp += log_normal0(p.values[i], slab_std(s, hp));
    } else {
      lp += std::log1p(-prob);
    }
  }
  return lp;
}

}  // namespace wavinv::bayes
