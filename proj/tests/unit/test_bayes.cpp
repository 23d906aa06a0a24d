#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "normal_gamma_oracle.hpp"
#include "wavinv/bayes/forward_map.hpp"
#include "wavinv/bayes/layout.hpp"
#include "wavinv/bayes/likelihood.hpp"
#include "wavinv/bayes/prior.hpp"
#include "wavinv/darcy/multilevel.hpp"
#include "wavinv/darcy/observation.hpp"
#include "wavinv/error.hpp"

using namespace wavinv;
using namespace wavinv::bayes;

namespace {

double log_normal0(double v, double var) { return -0.5 * std::log(2 * std::numbers::pi * var) - 0.5 * v * v / var; }

}  // namespace

TEST(Prior, SlabStd) {
  PriorHyperparams hp;
  EXPECT_NEAR(slab_std(0, hp), std::sqrt(0.7), 1e-15);
  EXPECT_NEAR(slab_std(2, hp), 0.41833001326703776, 1e-12);
  hp.scaling_factor_r = 1.0;
  EXPECT_DOUBLE_EQ(slab_std(4, hp), slab_std(0, hp));
}

TEST(Prior, SlabProbability) {
  PriorHyperparams hp;
  EXPECT_EQ(slab_probability(0, false, hp), 1.0);
  EXPECT_EQ(slab_probability(1, true, hp), 0.85);
  EXPECT_EQ(slab_probability(2, true, hp), 0.25);
  EXPECT_EQ(slab_probability(3, true, hp), 0.125);
  EXPECT_EQ(slab_probability(3, false, hp), 0.0);
}

TEST(Prior, HyperparamsValidated) {
  PriorHyperparams hp;
  hp.likelihood_a0 = 0.0;
  EXPECT_THROW(hp.validate(), ParameterError);
  hp = {};
  hp.gamma_root = 1.5;
  EXPECT_THROW(hp.validate(), ParameterError);
}

TEST(Layout, QuadtreeCounts) {
  const auto L = TreeLayout::quadtree(5);
  for (int s = 0; s <= 5; ++s) EXPECT_EQ(L.count_up_to(s), std::size_t{1} << (2 * (s + 1)));
  EXPECT_EQ(L.max_level(), 5);
  for (std::size_t i = 4; i < L.size(); ++i) {
    const int p = L.parent(i);
    ASSERT_GE(p, 0);
    EXPECT_EQ(L.level(p), L.level(i) - 1);
  }
  // every detail node below level 1 has 4 children
  for (std::size_t i = 0; i < L.count_up_to(4); ++i) EXPECT_EQ(L.children(i).size(), L.level(i) == 0 ? 3u : 4u);
}

TEST(Layout, QuadtreeRoundTrip) {
  const auto L = TreeLayout::quadtree(3);
  std::mt19937_64 g(1);
  PriorHyperparams hp;
  const auto p = sample_prior(g, 3, hp, L);
  const auto tree = L.to_quadtree(p.values, p.active, 3, 2);
  EXPECT_NO_THROW(tree.validate());
  EXPECT_NO_THROW(tree.validate_zero_tree());
  std::vector<double> v;
  std::vector<std::uint8_t> a;
  L.from_quadtree(tree, 3, v, a);
  EXPECT_EQ(v, p.values);
  EXPECT_EQ(a, p.active);
}

TEST(Layout, ParentMatchesQuadtreeGeometry) {
  // node (j, b, r, c) hangs off (j-1, b, r/2, c/2)
  const auto L = TreeLayout::quadtree(3);
  const std::size_t off2 = L.count_up_to(1), off1 = L.count_up_to(0);
  const std::size_t dim2 = 4, dim1 = 2;
  const std::size_t b = 2, r = 3, c = 1;
  const std::size_t node = off2 + b * dim2 * dim2 + r * dim2 + c;
  EXPECT_EQ(std::size_t(L.parent(node)), off1 + b * dim1 * dim1 + (r / 2) * dim1 + c / 2);
}

TEST(Layout, RejectsUnsortedOrOrphans) {
  EXPECT_THROW(TreeLayout({0, 2}, {-1, 0}), ParameterError);
  EXPECT_THROW(TreeLayout({1, 0}, {0, -1}), ParameterError);
  const auto chain = TreeLayout::chain(3);
  EXPECT_EQ(chain.parent(2), 1);
  EXPECT_FALSE(chain.is_quadtree());
}

TEST(Prior, ScaleZeroDrawHasOnlyScaling) {
  const auto L = TreeLayout::quadtree(5);
  std::mt19937_64 g(2);
  const auto p = sample_prior(g, 0, PriorHyperparams{}, L);
  EXPECT_EQ(p.values.size(), 4u);
  EXPECT_TRUE(std::all_of(p.active.begin(), p.active.end(), [](auto a) { return a == 1; }));
}

TEST(Prior, ActiveFractionsMatchSlabProbability) {
  const auto L = TreeLayout::quadtree(3);
  PriorHyperparams hp;
  std::mt19937_64 g(3);
  std::vector<double> on(4, 0.0), eligible(4, 0.0);
  for (int draw = 0; draw < 10000; ++draw) {
    const auto p = sample_prior(g, 3, hp, L);
    ASSERT_NO_THROW(check_particle(p, L));
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const int q = L.parent(i);
      if (q >= 0 && !p.active[q]) {
        ASSERT_EQ(p.active[i], 0);  // zero-tree closure
        continue;
      }
      eligible[L.level(i)] += 1;
      on[L.level(i)] += p.active[i];
    }
  }
  for (int s = 0; s <= 3; ++s) {
    const double prob = slab_probability(s, true, hp);
    const double se = std::sqrt(prob * (1 - prob) / eligible[s]);
    EXPECT_NEAR(on[s] / eligible[s], prob, 3 * se + 1e-12) << "level " << s;
  }
}

TEST(Prior, LogPriorClosedForm) {
  const auto L = TreeLayout::quadtree(2);
  PriorHyperparams hp;
  ParticleState p;
  p.scale = 0;
  p.values.assign(4, 0.0);
  p.active.assign(4, 1);
  EXPECT_NEAR(log_prior(p, hp, L), 4 * (-0.5 * std::log(2 * std::numbers::pi * 0.7)), 1e-12);
}

TEST(Prior, SpikeFlipDensityRatio) {
  const auto L = TreeLayout::quadtree(2);
  PriorHyperparams hp;
  ParticleState p;
  p.scale = 2;
  p.values.assign(L.count_up_to(2), 0.0);
  p.active.assign(L.count_up_to(2), 0);
  std::fill(p.active.begin(), p.active.begin() + 16, 1);
  const std::size_t node = 16 + 5;  // a level-2 node; its parent is active
  p.active[node] = 1;
  const double before = log_prior(p, hp, L);
  p.active[node] = 0;
  const double after = log_prior(p, hp, L);
  const double prob = 0.25, var = 0.25 * 0.7;
  EXPECT_NEAR(after - before, std::log((1 - prob) / (prob * std::exp(log_normal0(0.0, var)))), 1e-12);
}

TEST(Prior, InvariantViolationsRejected) {
  const auto L = TreeLayout::chain(3);
  PriorHyperparams hp;
  ParticleState p;
  p.scale = 2;
  p.values = {0.1, 0.0, 0.3};
  p.active = {1, 0, 1};
  EXPECT_THROW(log_prior(p, hp, L), InvariantError);
  p.active = {1, 0, 0};
  EXPECT_THROW(log_prior(p, hp, L), InvariantError);  // spike with nonzero value
  p.values = {0.1, 0.0, 0.0};
  EXPECT_NO_THROW(log_prior(p, hp, L));
  p.values.pop_back();
  EXPECT_THROW(log_prior(p, hp, L), ShapeError);
}

TEST(Prior, SubtreeDensityMatchesSampler) {
  // the density returned while sampling equals the density recomputed later
  const auto L = TreeLayout::quadtree(3);
  PriorHyperparams hp;
  std::mt19937_64 g(5);
  auto p = sample_prior(g, 3, hp, L);
  const std::size_t node = 4;  // level-1 node
  deactivate_subtree(p, node, L);
  EXPECT_NO_THROW(check_particle(p, L));
  const double lq = sample_active_subtree(p, node, g, hp, L);
  EXPECT_NO_THROW(check_particle(p, L));
  EXPECT_NEAR(lq, log_active_subtree_density(p, node, hp, L), 1e-12);
}

TEST(Prior, SubtreeDensityIsPriorRatio) {
  // log prior(with subtree) - log prior(node off) = log p - log(1-p) + log q(subtree)
  const auto L = TreeLayout::quadtree(3);
  PriorHyperparams hp;
  std::mt19937_64 g(6);
  for (int rep = 0; rep < 20; ++rep) {
    auto p = sample_prior(g, 3, hp, L);
    const std::size_t node = 4 + std::size_t(rep % 12);
    deactivate_subtree(p, node, L);
    const double off = log_prior(p, hp, L);
    const double lq = sample_active_subtree(p, node, g, hp, L);
    const double on = log_prior(p, hp, L);
    EXPECT_NEAR(on - off, std::log(0.85) - std::log(0.15) + lq, 1e-10);
  }
}

TEST(Likelihood, ZeroResidual) {
  PriorHyperparams hp;
  const std::vector<double> d{1, 2, 3, 4};
  EXPECT_NEAR(log_likelihood(d, d, hp), -(0.001 + 2.0) * std::log(0.001), 1e-12);
}

TEST(Likelihood, DecreasesWithResidual) {
  PriorHyperparams hp;
  const std::vector<double> d{1, 2, 3, 4};
  std::vector<double> f1{1.1, 2, 3, 4}, f2{1.2, 2, 3, 4};
  EXPECT_GT(log_likelihood(d, f1, hp), log_likelihood(d, f2, hp));
  EXPECT_THROW(log_likelihood(d, std::vector<double>{1, 2}, hp), ShapeError);
}

TEST(Likelihood, PermutationInvariant) {
  PriorHyperparams hp;
  std::vector<double> d{0.3, -1, 2, 5, 0.1}, f{0.2, -0.5, 2.5, 4, 0.0};
  const double a = log_likelihood(d, f, hp);
  std::vector<int> idx{3, 1, 4, 0, 2};
  std::vector<double> dp, fp;
  for (int i : idx) {
    dp.push_back(d[i]);
    fp.push_back(f[i]);
  }
  EXPECT_NEAR(a, log_likelihood(dp, fp, hp), 1e-12);
}

TEST(Likelihood, MatchesNormalGammaQuadrature) {
  // two-coefficient toy: F(w) = A w
  PriorHyperparams hp;
  const std::vector<double> d{0.4, -0.2, 1.1};
  auto forward = [](double w0, double w1) { return std::vector<double>{w0 + w1, w0 - 2 * w1, 0.5 * w0}; };
  auto ss = [&](const std::vector<double>& f) {
    double s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += (d[i] - f[i]) * (d[i] - f[i]);
    return s;
  };
  const auto fa = forward(0.3, -0.1), fb = forward(1.2, 0.7);
  const double lib = log_likelihood(d, fa, hp) - log_likelihood(d, fb, hp);
  const double quad = oracle::log_normal_gamma_evidence(ss(fa), 3, hp.likelihood_a0, hp.likelihood_b0) -
                      oracle::log_normal_gamma_evidence(ss(fb), 3, hp.likelihood_a0, hp.likelihood_b0);
  EXPECT_NEAR(lib, quad, 1e-6);
}

TEST(Likelihood, TemperedTargetEndpointsAndTelescoping) {
  const auto L = TreeLayout::chain(2);
  PriorHyperparams hp;
  darcy::SensorObservation obs;
  obs.grid_size = 2;
  obs.readings = {0.1, 0.2, 0.3, 0.4};
  ForwardFn fwd = [](const ParticleState& p) {
    return std::vector<double>{p.values[0], p.values[0], p.values[1], 0.0};
  };
  ParticleState p;
  p.scale = 1;
  p.values = {0.2, 0.3};
  p.active = {1, 1};
  const double lp = log_prior(p, hp, L), ll = log_likelihood(p, obs, fwd, hp);
  EXPECT_DOUBLE_EQ(log_tempered_target(p, obs, 0.0, hp, L, fwd), lp);
  EXPECT_NEAR(log_tempered_target(p, obs, 1.0, hp, L, fwd), lp + ll, 1e-12);
  const double t1 = log_tempered_target(p, obs, 0.2, hp, L, fwd), t2 = log_tempered_target(p, obs, 0.7, hp, L, fwd);
  EXPECT_NEAR(t2 - t1, 0.5 * ll, 1e-10);
  EXPECT_NEAR(log_tempered_target(p, obs, 0.5, hp, L, fwd),
              0.5 * (log_tempered_target(p, obs, 0.0, hp, L, fwd) + log_tempered_target(p, obs, 1.0, hp, L, fwd)),
              1e-10);
  EXPECT_THROW(log_tempered_target(p, obs, 1.5, hp, L, fwd), ParameterError);
}

TEST(ForwardMap, ConstantScalingGivesScaledPressure) {
  // ln k = c everywhere -> k = e^c, pressure scales by e^-c
  darcy::SolverSettings ss;
  ss.residual_tolerance = 1e-9;
  ss.refinement_threshold = 1e-10;
  DarcyForwardMap fm(ss, 10);
  const auto L = TreeLayout::quadtree(5);
  ParticleState p;
  p.scale = 1;
  p.values.assign(L.count_up_to(1), 0.0);
  p.active.assign(L.count_up_to(1), 0);
  std::fill(p.active.begin(), p.active.begin() + 4, 1);
  const auto base = fm(p, L);
  std::fill(p.values.begin(), p.values.begin() + 4, 0.6);
  const auto lnk = fm.log_permeability_nodes(L.to_quadtree(p.values, p.active, 1, 2));
  for (double v : lnk.values.storage()) ASSERT_NEAR(v, 0.6, 1e-12);
  const auto scaled = fm(p, L);
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(scaled[i], base[i] * std::exp(-0.6), 1e-7);
}

TEST(ForwardMap, AgreesWithDirectSolve) {
  darcy::SolverSettings ss;
  ss.residual_tolerance = 1e-9;
  ss.refinement_threshold = 1e-10;
  DarcyForwardMap fm(ss, 10);
  const auto L = TreeLayout::quadtree(5);
  std::mt19937_64 g(9);
  const auto p = sample_prior(g, 3, PriorHyperparams{}, L);
  const auto tree = L.to_quadtree(p.values, p.active, 3, 2);
  darcy::DarcyProblem prob;
  prob.log_permeability = fm.log_permeability_nodes(tree);
  prob.sources = darcy::corner_sources();
  const auto expect = darcy::observe(darcy::direct_solve_oracle(prob, 5), 10);
  const auto got = fm(tree);
  ASSERT_EQ(got.size(), 100u);
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-7);
  // the reporting field is the leading 32x32 block of the node field
  const auto f32 = fm.log_permeability_field(tree);
  EXPECT_EQ(f32.values.rows(), 32u);
  EXPECT_DOUBLE_EQ(f32.values(5, 7), prob.log_permeability.values(5, 7));
}
