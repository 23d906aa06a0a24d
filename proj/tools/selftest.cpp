#include "selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "normal_gamma_oracle.hpp"
#include "wavinv/bayes/likelihood.hpp"
#include "wavinv/darcy/multilevel.hpp"
#include "wavinv/smc/sampler.hpp"
#include "wavinv/wavelet/lifting.hpp"
#include "wavinv/wavelet/transform2d.hpp"

namespace wavinv::cli {

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

SelftestResult lifting_roundtrip(std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int N = 1; N <= 3; ++N)
    for (auto b : {wavelet::Boundary::periodic, wavelet::Boundary::reflect}) {
      wavelet::LiftingConfig cfg;
      cfg.half_width = N;
      cfg.boundary = b;
      std::vector<double> x(b == wavelet::Boundary::periodic ? 32 : 33);
      for (double& v : x) v = nd(g);
      const auto sp = wavelet::forward_transform_1d(x, cfg);
      const auto y = wavelet::inverse_transform_1d(sp.coarse, sp.details, cfg);
      double num_ = 0, den = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        num_ = std::max(num_, std::abs(x[i] - y[i]));
        den = std::max(den, std::abs(x[i]));
      }
      worst = std::max(worst, num_ / den);
    }
  return {"lifting_roundtrip", worst <= 1e-12, "max relative error " + num(worst)};
}

SelftestResult annihilation() {
  double worst = 0.0;
  for (int N = 1; N <= 3; ++N) {
    wavelet::LiftingConfig cfg;
    cfg.half_width = N;
    cfg.boundary = wavelet::Boundary::reflect;
    std::vector<double> x(33);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = double(i) / 32.0;
      x[i] = 1.0 - 2.0 * t + std::pow(t, 2 * N - 1);
    }
    for (double d : wavelet::forward_transform_1d(x, cfg).details) worst = std::max(worst, std::abs(d));
  }
  return {"polynomial_annihilation", worst <= 1e-12, "max |detail| " + num(worst)};
}

SelftestResult solver_vs_direct(std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  const double a = nd(g), b = nd(g), c = nd(g);
  darcy::DarcyProblem pb;
  pb.log_permeability.values = Array2D<double>(33, 33);
  for (std::size_t r = 0; r < 33; ++r)
    for (std::size_t k = 0; k < 33; ++k) {
      const double x = double(k) / 32, y = double(r) / 32;
      pb.log_permeability(r, k) = 0.8 * a * std::sin(3 * x + b) * std::cos(2 * y) + 0.6 * c * x * y;
    }
  pb.sources = darcy::corner_sources();
  darcy::SolverSettings s;
  s.residual_tolerance = 1e-10;
  s.refinement_threshold = 1e-12;
  const auto p = darcy::vcycle_solve(pb, s);
  const auto o = darcy::direct_solve_oracle(pb, 5);
  double diff = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i)
    diff = std::max(diff, std::abs(p.values.storage()[i] - o.values.storage()[i]));
  return {"vcycle_vs_direct", diff <= 1e-6, "max-norm difference " + num(diff)};
}

SelftestResult likelihood_quadrature() {
  bayes::PriorHyperparams hp;
  double worst = 0.0;
  const double base = bayes::log_likelihood_from_residual(1.0, 20, hp);
  const double base_o = oracle::log_normal_gamma_evidence(1.0, 20, hp.likelihood_a0, hp.likelihood_b0);
  for (double ss : {0.01, 0.3, 4.0, 25.0}) {
    const double d = bayes::log_likelihood_from_residual(ss, 20, hp) - base;
    const double o = oracle::log_normal_gamma_evidence(ss, 20, hp.likelihood_a0, hp.likelihood_b0) - base_o;
    worst = std::max(worst, std::abs(d - o));
  }
  return {"likelihood_vs_quadrature", worst <= 1e-6, "max log-difference error " + num(worst)};
}

SelftestResult smc_chain(std::uint64_t seed) {
  const auto L = bayes::TreeLayout::chain(3);
  bayes::PriorHyperparams hp;
  Eigen::MatrixXd A(4, 3);
  A << 1.0, 0.5, 0.2, 0.8, -0.4, 0.3, 0.3, 0.9, -0.5, -0.6, 0.2, 0.7;
  Eigen::VectorXd d(4);
  d << 0.7, 0.35, 0.1, -0.45;
  const std::vector<double> dv(d.data(), d.data() + 4);
  smc::SmcModel model{L, hp, [&](const bayes::ParticleState& p) {
                        std::vector<double> f(4, 0.0);
                        for (std::size_t j = 0; j < p.values.size(); ++j)
                          for (int i = 0; i < 4; ++i) f[i] += A(i, int(j)) * p.values[j];
                        return bayes::log_likelihood(dv, f, hp);
                      }};
  smc::SmcSettings st;
  st.particles = 300;
  st.densities = 60;
  st.seed = seed;
  const auto run = smc::run_adaptive(2, model, st);
  std::vector<double> p(3), var(3);
  for (int i = 0; i < 3; ++i) {
    p[i] = bayes::slab_probability(i, true, hp);
    var[i] = std::pow(bayes::slab_std(i, hp), 2);
  }
  double worst = 0.0;
  for (const auto& rec : run.records) {
    const auto o = oracle::chain_posterior(A, d, p, var, rec.scale + 1, hp.likelihood_a0, hp.likelihood_b0);
    worst = std::max(worst, std::abs(rec.log_z - o.log_z));
  }
  return {"smc_chain_log_z", worst <= 0.15, "max |ln Z - exact| " + num(worst)};
}

}  // namespace

std::vector<SelftestResult> run_selftests(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<SelftestResult> out;
  out.push_back(lifting_roundtrip(g));
  out.push_back(annihilation());
  out.push_back(solver_vs_direct(g));
  out.push_back(likelihood_quadrature());
  out.push_back(smc_chain(seed));
  return out;
}

}  // namespace wavinv::cli
