// Acceptance driver. `wavinv_acceptance [k ...]` runs criteria k (all when
// none are given) and prints one PASS / FAIL / SKIP line per criterion.
// Exit status: 0 all pass, 77 everything requested was skipped, 1 otherwise.
// With WAVINV_ACCEPT_LOG set, the lines are also appended to that file.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "normal_gamma_oracle.hpp"
#include "wavinv/bayes/layout.hpp"
#include "wavinv/bayes/likelihood.hpp"
#include "wavinv/bayes/prior.hpp"
#include "wavinv/benchmarks/run.hpp"
#include "wavinv/darcy/multilevel.hpp"
#include "wavinv/smc/rejuvenate.hpp"
#include "wavinv/smc/sampler.hpp"
#include "wavinv/wavelet/lifting.hpp"
#include "wavinv/wavelet/transform2d.hpp"

using namespace wavinv;

namespace {

constexpr double kPi = std::numbers::pi;

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

Verdict verdict(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

// ---------------------------------------------------------------- 1

double rel_max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(a[i]));
  }
  return num / den;
}

// Repeated 1D lifting on the coarse part; details of all levels, finest first.
std::vector<std::vector<double>> forward_levels_1d(std::vector<double> x, int levels, const wavelet::LiftingConfig& cfg) {
  std::vector<std::vector<double>> out;
  for (int l = 0; l < levels; ++l) {
    auto sp = wavelet::forward_transform_1d(x, cfg);
    out.push_back(std::move(sp.details));
    x = std::move(sp.coarse);
  }
  out.push_back(std::move(x));
  return out;
}

std::vector<double> inverse_levels_1d(const std::vector<std::vector<double>>& parts, const wavelet::LiftingConfig& cfg) {
  std::vector<double> x = parts.back();
  for (int l = int(parts.size()) - 2; l >= 0; --l) x = wavelet::inverse_transform_1d(x, parts[l], cfg);
  return x;
}

// Levels of a line of 2^k + 1 nodes whose coarse input still holds 2N even
// samples, so the one-sided stencils keep full order.
int full_order_levels(int k, int N) {
  int l = 0;
  while (l < k && (1 << (k - l - 1)) + 1 >= 2 * N) ++l;
  return l;
}

// Random polynomial of total degree `deg` in (x, y).
struct Poly2 {
  std::vector<std::pair<int, int>> powers;
  std::vector<double> coef;

  Poly2(int deg, std::mt19937_64& g) {
    std::normal_distribution<double> nd;
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j) {
        powers.emplace_back(i, j);
        coef.push_back(nd(g));
      }
  }
  double operator()(double x, double y) const {
    double s = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * std::pow(x, powers[k].first) * std::pow(y, powers[k].second);
    return s;
  }
};

Outcome criterion1() {
  Clock clock;
  std::mt19937_64 g(20241);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> coin(0, 1);
  const int inputs = 200;
  double worst_identity = 0.0, worst_annihilation = 0.0;
  int tested_1d = 0, tested_2d = 0;
  for (int t = 0; t < inputs; ++t) {
    wavelet::LiftingConfig cfg;
    cfg.half_width = 1 + t % 3;
    cfg.boundary = coin(g) ? wavelet::Boundary::periodic : wavelet::Boundary::reflect;
    const int extra = cfg.boundary == wavelet::Boundary::reflect ? 1 : 0;
    if (t % 2 == 0) {
      const int k = std::uniform_int_distribution<int>(3, 10)(g);
      const std::size_t n = (std::size_t{1} << k) + extra;
      std::vector<double> x(n);
      for (double& v : x) v = nd(g) * std::exp(nd(g));
      const int levels = std::uniform_int_distribution<int>(1, wavelet::max_levels(n, cfg.boundary))(g);
      worst_identity = std::max(worst_identity, rel_max_diff(x, inverse_levels_1d(forward_levels_1d(x, levels, cfg), cfg)));
      ++tested_1d;
    } else {
      const int kr = std::uniform_int_distribution<int>(3, 7)(g);
      const int kc = std::uniform_int_distribution<int>(3, 7)(g);
      const std::size_t rows = (std::size_t{1} << kr) + extra, cols = (std::size_t{1} << kc) + extra;
      const int top = std::min(wavelet::max_levels(rows, cfg.boundary), wavelet::max_levels(cols, cfg.boundary));
      const int levels = std::uniform_int_distribution<int>(1, top)(g);
      wavelet::Transform2D tr(rows, cols, levels, cfg);
      Array2D<double> a(rows, cols);
      for (double& v : a.storage()) v = nd(g);
      const std::vector<double> before = a.storage();
      tr.forward(a);
      tr.inverse(a);
      worst_identity = std::max(worst_identity, rel_max_diff(before, a.storage()));
      ++tested_2d;
    }
  }
  // Polynomials of degree <= 2N-1 have no details on the end-point grid.
  for (int N = 1; N <= 3; ++N) {
    wavelet::LiftingConfig cfg;
    cfg.half_width = N;
    cfg.boundary = wavelet::Boundary::reflect;
    for (int deg = 0; deg <= 2 * N - 1; ++deg)
      for (int rep = 0; rep < 4; ++rep) {
        std::vector<double> c(deg + 1);
        for (double& v : c) v = nd(g);
        std::vector<double> x(65);
        double scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double s = double(i) / 64.0;
          for (int p = deg; p >= 0; --p) x[i] = x[i] * s + c[p];
          scale = std::max(scale, std::abs(x[i]));
        }
        const auto parts = forward_levels_1d(x, full_order_levels(6, N), cfg);
        for (std::size_t l = 0; l + 1 < parts.size(); ++l)
          for (double d : parts[l]) worst_annihilation = std::max(worst_annihilation, std::abs(d) / scale);

        const Poly2 poly(deg, g);
        wavelet::Transform2D tr(33, 33, full_order_levels(5, N), cfg);
        Array2D<double> a(33, 33);
        scale = 0.0;
        for (std::size_t r = 0; r < 33; ++r)
          for (std::size_t k = 0; k < 33; ++k) {
            a(r, k) = poly(double(k) / 32.0, double(r) / 32.0);
            scale = std::max(scale, std::abs(a(r, k)));
          }
        tr.forward(a);
        for (std::size_t r = 0; r < 33; ++r)
          for (std::size_t k = 0; k < 33; ++k)
            if (tr.node_level(r, k) >= 0) worst_annihilation = std::max(worst_annihilation, std::abs(a(r, k)) / scale);
      }
  }
  const double secs = clock.seconds();
  const bool ok = worst_identity <= 1e-12 && worst_annihilation <= 1e-12 && secs < 10.0;
  return {verdict(ok), std::to_string(tested_1d) + " 1D + " + std::to_string(tested_2d) +
                           " 2D inputs, identity rel err " + fmt(worst_identity) + " (<= 1e-12), max |detail| / max|f| " +
                           fmt(worst_annihilation) + " (<= 1e-12), " + fmt(secs) + " s (< 10 s)"};
}

// ---------------------------------------------------------------- 2

darcy::DarcyProblem random_darcy(int J, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> freq(0, 3);
  struct Mode {
    int kx, ky;
    double a, phase;
  };
  std::vector<Mode> modes(6);
  for (auto& m : modes) m = {freq(g), freq(g), 0.5 * nd(g), 2 * kPi * std::uniform_real_distribution<double>(0, 1)(g)};
  const std::size_t n = (std::size_t{1} << J) + 1;
  darcy::DarcyProblem pb;
  pb.log_permeability.values = Array2D<double>(n, n);
  pb.log_permeability.sampling = Sampling::nodal;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double x = double(c) / double(n - 1), y = double(r) / double(n - 1);
      double v = 0.0;
      for (const auto& m : modes) v += m.a * std::cos(kPi * (m.kx * x + m.ky * y) + m.phase);
      pb.log_permeability(r, c) = v;
    }
  pb.sources = darcy::corner_sources();
  return pb;
}

// 1e-10 sits below the round-off floor of the high-contrast 65^2 fields
// (the direct solution itself leaves ~5e-10).
darcy::SolverSettings tight_solver(int J) {
  darcy::SolverSettings s;
  s.finest_level_J = J;
  s.residual_tolerance = 1e-8;
  s.refinement_threshold = 1e-12;
  return s;
}

double zero_mean_max_diff(const Array2D<double>& a, const Array2D<double>& b) {
  const double ma = mean_of(a.storage()), mb = mean_of(b.storage());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs((a.storage()[i] - ma) - (b.storage()[i] - mb)));
  return m;
}

// k = exp(0.5 cos(pi x) cos(pi y)), p = cos(pi x) cos(pi y): no-flux on the walls.
double mk(double x, double y) { return std::exp(0.5 * std::cos(kPi * x) * std::cos(kPi * y)); }
double mp(double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); }
double mf(double x, double y) {
  const double k = mk(x, y);
  const double kx = -0.5 * kPi * std::sin(kPi * x) * std::cos(kPi * y) * k;
  const double ky = -0.5 * kPi * std::cos(kPi * x) * std::sin(kPi * y) * k;
  const double px = -kPi * std::sin(kPi * x) * std::cos(kPi * y);
  const double py = -kPi * std::cos(kPi * x) * std::sin(kPi * y);
  return -(kx * px + ky * py - 2 * kPi * kPi * k * mp(x, y));
}

Array2D<double> sample_nodes(int J, const std::function<double(double, double)>& fn) {
  const std::size_t n = (std::size_t{1} << J) + 1;
  Array2D<double> a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = fn(double(c) / double(n - 1), double(r) / double(n - 1));
  return a;
}

Outcome criterion2() {
  Clock clock;
  std::mt19937_64 g(7702);
  double worst = 0.0;
  int fields = 0;
  for (int J : {5, 6})
    for (int i = 0; i < 20; ++i) {
      const auto pb = random_darcy(J, g);
      const auto p = darcy::vcycle_solve(pb, tight_solver(J));
      const auto o = darcy::direct_solve_oracle(pb, J);
      worst = std::max(worst, zero_mean_max_diff(p.values, o.values));
      ++fields;
    }
  std::vector<double> errors, orders;
  for (int J = 3; J <= 7; ++J) {
    darcy::DarcyProblem pb;
    pb.log_permeability.values = sample_nodes(J, [](double x, double y) { return std::log(mk(x, y)); });
    pb.log_permeability.sampling = Sampling::nodal;
    const darcy::MultilevelSolver solver(pb, tight_solver(J));
    const auto p = solver.solve(sample_nodes(J, mf));
    errors.push_back(zero_mean_max_diff(p.values, sample_nodes(J, mp)));
    if (errors.size() > 1) orders.push_back(std::log2(errors[errors.size() - 2] / errors.back()));
  }
  bool orders_ok = true;
  std::string order_text;
  for (double o : orders) {
    orders_ok = orders_ok && std::abs(o - 2.0) <= 0.2;
    order_text += (order_text.empty() ? "" : ",") + fmt(o, 4);
  }
  const double secs = clock.seconds();
  const bool ok = worst <= 1e-6 && orders_ok && secs < 120.0;
  return {verdict(ok), std::to_string(fields) + " fields at 33^2/65^2, max |vcycle - direct| " + fmt(worst) +
                           " (<= 1e-6), manufactured orders J=3..7 [" + order_text + "] (2.0 +- 0.2), " + fmt(secs) +
                           " s (< 120 s)"};
}

// ---------------------------------------------------------------- 3

Outcome criterion3() {
  bayes::PriorHyperparams hp;
  const std::size_t n = 16;
  std::vector<double> phi0(n), phi1(n), data(n);
  std::mt19937_64 g(33);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / double(n - 1);
    phi0[i] = 1.0;
    phi1[i] = std::sin(2 * kPi * t);
    data[i] = 0.4 + 0.9 * phi1[i] + 0.05 * nd(g);
  }
  auto forward = [&](double w0, double w1) {
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = w0 * phi0[i] + w1 * phi1[i];
    return f;
  };
  auto ss = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (data[i] - f[i]) * (data[i] - f[i]);
    return s;
  };
  const auto f_ref = forward(0.0, 0.0);
  const double lib_ref = bayes::log_likelihood(data, f_ref, hp);
  const double quad_ref = oracle::log_normal_gamma_evidence(ss(f_ref), n, hp.likelihood_a0, hp.likelihood_b0);
  double worst = 0.0;
  int pairs = 0;
  for (double w0 = -1.0; w0 <= 1.5; w0 += 0.25)
    for (double w1 = -0.5; w1 <= 2.0; w1 += 0.25) {
      const auto f = forward(w0, w1);
      const double lib = bayes::log_likelihood(data, f, hp) - lib_ref;
      const double quad = oracle::log_normal_gamma_evidence(ss(f), n, hp.likelihood_a0, hp.likelihood_b0) - quad_ref;
      worst = std::max(worst, std::abs(lib - quad));
      ++pairs;
    }
  return {verdict(worst <= 1e-6),
          std::to_string(pairs) + " coefficient pairs, max |closed form - quadrature| of log differences " +
              fmt(worst) + " (<= 1e-6)"};
}

// ---------------------------------------------------------------- 4, 10

struct ChainToy {
  bayes::TreeLayout layout = bayes::TreeLayout::chain(3);
  bayes::PriorHyperparams hp;
  Eigen::MatrixXd A{4, 3};
  Eigen::VectorXd d{4};
  std::vector<double> dv;

  ChainToy() {
    A << 1.0, 0.5, 0.2, 0.8, -0.4, 0.3, 0.3, 0.9, -0.5, -0.6, 0.2, 0.7;
    d << 0.7, 0.35, 0.1, -0.45;
    dv.assign(d.data(), d.data() + 4);
  }

  smc::SmcModel model() const {
    return {layout, hp, [this](const bayes::ParticleState& p) {
              std::vector<double> f(4, 0.0);
              for (std::size_t j = 0; j < p.values.size(); ++j)
                for (int i = 0; i < 4; ++i) f[i] += A(i, int(j)) * p.values[j];
              return bayes::log_likelihood(dv, f, hp);
            }};
  }

  oracle::ChainPosterior exact(int scale) const {
    std::vector<double> p(3), var(3);
    for (int i = 0; i < 3; ++i) {
      p[i] = bayes::slab_probability(i, true, hp);
      var[i] = std::pow(bayes::slab_std(i, hp), 2);
    }
    return oracle::chain_posterior(A, d, p, var, scale + 1, hp.likelihood_a0, hp.likelihood_b0);
  }
};

struct ToyReplicates {
  // [scale][replicate]
  std::vector<std::vector<double>> log_z;
  // [scale][node][replicate]
  std::vector<std::vector<std::vector<double>>> mean;
  std::size_t resamples = 0;
};

ToyReplicates run_toy(const ChainToy& toy, smc::SmcSettings st, int replicates, std::uint64_t first_seed) {
  ToyReplicates out;
  out.log_z.assign(3, {});
  out.mean.assign(3, std::vector<std::vector<double>>(3));
  st.continue_after_stop = true;
  const auto model = toy.model();
  for (int r = 0; r < replicates; ++r) {
    st.seed = first_seed + std::uint64_t(r);
    const auto run = smc::run_adaptive(2, model, st);
    for (const auto& rec : run.records) {
      out.log_z[rec.scale].push_back(rec.log_z);
      out.resamples += rec.resample_steps.size();
      for (int j = 0; j < 3; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < rec.ensemble.size(); ++i)
          if (std::size_t(j) < rec.ensemble.particles[i].values.size())
            m += rec.ensemble.normalized_weights[i] * rec.ensemble.particles[i].values[j];
        out.mean[rec.scale][j].push_back(m);
      }
    }
  }
  return out;
}

Outcome criterion4() {
  Clock clock;
  const ChainToy toy;
  smc::SmcSettings st;
  st.particles = 1000;
  st.densities = 200;
  const int R = 10;
  const auto reps = run_toy(toy, st, R, 4001);
  double worst_z = 0.0, worst_t = 0.0;
  for (int s = 0; s <= 2; ++s) {
    const auto o = toy.exact(s);
    for (double z : reps.log_z[s]) worst_z = std::max(worst_z, std::abs(z - o.log_z));
    for (int j = 0; j <= s; ++j) {
      // standard error of the replicate average
      const double se = sd_of(reps.mean[s][j]) / std::sqrt(double(R));
      worst_t = std::max(worst_t, std::abs(mean_of(reps.mean[s][j]) - o.mean(j)) / se);
    }
  }
  const double secs = clock.seconds();
  const bool ok = worst_t <= 3.0 && worst_z <= 0.05 && secs < 300.0;
  return {verdict(ok), std::to_string(R) + " runs of N=1000 M=200 at scales 0..2, worst |mean - exact| / MC SE " +
                           fmt(worst_t) + " (<= 3), worst per-run |ln Z - exact| " + fmt(worst_z) + " (<= 0.05), " +
                           fmt(secs) + " s (< 300 s)"};
}

Outcome criterion10() {
  Clock clock;
  const ChainToy toy;
  smc::SmcSettings st;
  st.particles = 1000;
  st.densities = 200;
  // lower than the default so the injected events are not swamped by
  // ESS-triggered ones
  st.ess_fraction = 0.5;
  const int R = 20;
  const auto plain = run_toy(toy, st, R, 10001);
  st.forced_resample_steps = {1, 2, 13, 50, 77, 120, 199};
  const auto forced = run_toy(toy, st, R, 20001);
  double worst = 0.0;
  std::string text;
  for (int s = 0; s <= 2; ++s) {
    const double diff = mean_of(forced.log_z[s]) - mean_of(plain.log_z[s]);
    const double se = std::sqrt((std::pow(sd_of(forced.log_z[s]), 2) + std::pow(sd_of(plain.log_z[s]), 2)) / double(R));
    worst = std::max(worst, std::abs(diff) / se);
    text += (text.empty() ? "" : ", ") + std::string("S") + std::to_string(s) + " " + fmt(diff) + "/" + fmt(se);
  }
  return {verdict(worst < 2.0), "ln Z shift / SE with 7 forced resamplings (" + text + "), worst " + fmt(worst) +
                                    " (< 2); resampling events " + std::to_string(plain.resamples) + " -> " +
                                    std::to_string(forced.resamples) + ", " + fmt(clock.seconds()) + " s"};
}

// ---------------------------------------------------------------- 5

Outcome criterion5() {
  const bayes::PriorHyperparams hp;
  const auto layout = bayes::TreeLayout::quadtree(3);
  std::mt19937_64 g(55);
  const int draws = 10000;
  std::vector<double> on(4, 0.0), eligible(4, 0.0);
  std::size_t orphans = 0;
  for (int k = 0; k < draws; ++k) {
    const auto p = bayes::sample_prior(g, 3, hp, layout);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const int s = layout.level(i);
      const bool parent_on = s == 0 || p.active[layout.parent(i)];
      if (!parent_on) {
        orphans += p.active[i];
        continue;
      }
      eligible[s] += 1;
      on[s] += p.active[i];
    }
  }
  double worst = 0.0;
  std::string text;
  for (int s = 0; s <= 3; ++s) {
    const double want = bayes::slab_probability(s, true, hp);
    const double got = on[s] / eligible[s];
    const double se = std::sqrt(want * (1 - want) / eligible[s]);
    const double z = se > 0 ? std::abs(got - want) / se : (got == want ? 0.0 : INFINITY);
    worst = std::max(worst, z);
    text += (text.empty() ? "" : ", ") + std::string("s") + std::to_string(s) + " " + fmt(got, 4) + " vs " +
            fmt(want, 4);
  }
  return {verdict(worst <= 3.0 && orphans == 0),
          std::to_string(draws) + " draws, active fraction given active parent (" + text + "), worst |z| " +
              fmt(worst) + " (<= 3), active nodes under inactive parents " + std::to_string(orphans)};
}

// ---------------------------------------------------------------- 6

Outcome criterion6() {
  const int dim = 10, chains = 1000, entry_rounds = 50, later_rounds = 200;
  const bayes::TreeLayout layout(std::vector<int>(dim, 0), std::vector<int>(dim, -1));
  const bayes::PriorHyperparams hp;
  const double v0 = std::pow(bayes::slab_std(0, hp), 2);
  // likelihood chosen so that likelihood x level-0 slab prior = N(0, I)
  smc::TemperedTarget target;
  target.layout = &layout;
  target.prior = &hp;
  target.gamma = 1.0;
  target.bridge = false;
  target.log_likelihood = [v0](const bayes::ParticleState& p) {
    double s = 0.0;
    for (double v : p.values) s += v * v;
    return -0.5 * s * (1.0 - 1.0 / v0);
  };
  std::mt19937_64 g(66);
  std::normal_distribution<double> nd;
  std::vector<bayes::ParticleState> x(chains);
  for (auto& p : x) {
    p.values.resize(dim);
    for (double& v : p.values) v = nd(g);
    p.active.assign(dim, 1);
    smc::refresh_likelihoods(p, target);
  }
  smc::RWAdaptState rw;  // default starting step
  int entered = -1, in_band_later = 0;
  double second_moment = 0.0;
  for (int round = 0; round < entry_rounds + later_rounds; ++round) {
    for (auto& p : x) {
      const auto c = smc::value_move(p, target, rw.sigma, g);
      rw.accepted += c.value_accepted;
      rw.proposed += c.value_proposed;
    }
    const double acc = rw.acceptance();
    const bool in_band = acc >= 0.15 && acc <= 0.30;
    if (entered < 0 && in_band && round < entry_rounds) entered = round;
    if (round >= entry_rounds) in_band_later += in_band;
    smc::adapt_step(rw);
  }
  for (const auto& p : x)
    for (double v : p.values) second_moment += v * v;
  second_moment /= double(chains * dim);
  const double frac = double(in_band_later) / later_rounds;
  return {verdict(entered >= 0 && frac >= 0.8),
          "first in-band round " + std::to_string(entered) + " (< 50), in band for " + fmt(100 * frac) + "% of the next " +
              std::to_string(later_rounds) + " rounds (>= 80%), final sigma " + fmt(rw.sigma) +
              ", E[x^2] " + fmt(second_moment) + " (target 1)"};
}

// ---------------------------------------------------------------- 7, 8, 9

benchmarks::BenchmarkReport run_desk(benchmarks::BenchmarkId id, int particles) {
  benchmarks::BenchmarkSettings bs;
  bs.id = id;
  bs.seed = 1;
  bs.inference.smc.particles = particles;
  bs.inference.smc.densities = particles;
  bs.inference.max_scale = 5;
  const auto name = benchmarks::to_string(id);
  return benchmarks::run_benchmark(bs, [&](const benchmarks::ScaleSummary& s) {
    std::printf("  %s S=%d lnZ=%.3f lnBF=%.3f count=%zu %.1fs\n", name.c_str(), s.scale, s.log_z, s.log_bf,
                s.basis_count, s.seconds);
    std::fflush(stdout);
  });
}

std::string per_scale(const benchmarks::BenchmarkReport& r) {
  std::string t;
  for (std::size_t s = 0; s < r.inference.scales.size(); ++s)
    t += (s ? " " : "") + fmt(r.inference.scales[s].log_z, 5);
  return t;
}

Outcome criterion7() {
  const auto r = run_desk(benchmarks::BenchmarkId::I, 128);
  const int sel = r.inference.selected_scale;
  const std::size_t count5 = r.basis_counts.at(5);
  const bool ok = sel >= 3 && sel <= 5 && r.rmse <= 0.30 && count5 <= 800 && r.seconds < 1800.0;
  return {verdict(ok), "selected scale " + std::to_string(sel) + " (in {3,4,5}), stop scale " +
                           std::to_string(r.inference.stop_scale) + ", RMSE " + fmt(r.rmse) +
                           " (<= 0.30), basis count at S=5 " + std::to_string(count5) + " (<= 800), ln Z [" +
                           per_scale(r) + "], " + fmt(r.seconds) + " s (< 1800 s)"};
}

Outcome criterion8() {
  const char* gate = std::getenv("ACCEPT_FULL");
  if (!gate || std::string(gate) != "1") return {Verdict::skip, "full-budget run (N=M=740); set ACCEPT_FULL=1"};
  const auto r = run_desk(benchmarks::BenchmarkId::I, 740);
  const std::vector<double> want{4, 16, 64, 184, 332, 356};
  bool counts_ok = true;
  std::string text;
  for (int s = 0; s <= 5; ++s) {
    const double c = double(r.basis_counts.at(s));
    counts_ok = counts_ok && std::abs(c - want[s]) <= 0.25 * want[s];
    text += (s ? "," : "") + std::to_string(r.basis_counts.at(s));
  }
  const bool rmse_ok = std::abs(r.rmse - 0.143) <= 0.5 * 0.143;
  return {verdict(rmse_ok && counts_ok), "RMSE " + fmt(r.rmse) + " (0.143 +- 50%), basis counts [" + text +
                                             "] (4,16,64,184,332,356 +- 25%), selected scale " +
                                             std::to_string(r.inference.selected_scale) + ", " + fmt(r.seconds) + " s"};
}

Outcome criterion9() {
  bool ok = true;
  std::string text;
  for (auto id : {benchmarks::BenchmarkId::II, benchmarks::BenchmarkId::III, benchmarks::BenchmarkId::IV}) {
    const auto r = run_desk(id, 128);
    const int sel = r.inference.selected_scale;
    // ln Z_s - ln Z_0 rises strictly from scale 0 up to the selected scale
    bool rising = true;
    for (int s = 1; s <= sel; ++s) rising = rising && r.inference.scales[s].log_bf > 0.0;
    const bool this_ok = r.diagonal_coverage >= 0.8 && rising;
    ok = ok && this_ok;
    text += (text.empty() ? "" : "; ") + benchmarks::to_string(id) + (this_ok ? " ok" : " not ok") +
            ": coverage " + fmt(r.diagonal_coverage) + " (>= 0.8), selected " + std::to_string(sel) +
            ", rising " + (rising ? "yes" : "no") + ", RMSE " + fmt(r.rmse) + ", ln Z [" + per_scale(r) + "]";
  }
  return {verdict(ok), text};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> table{
      {"transform_correctness", criterion1},   {"solver_correctness", criterion2},
      {"likelihood_marginalization", criterion3}, {"smc_posterior_oracle", criterion4},
      {"prior_statistics", criterion5},        {"step_adaptation", criterion6},
      {"benchmark_I_desk", criterion7},        {"benchmark_I_full", criterion8},
      {"benchmarks_II_IV_desk", criterion9},   {"evidence_resampling_invariance", criterion10},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > int(criteria().size())) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    which.push_back(k);
  }
  if (which.empty())
    for (int k = 1; k <= int(criteria().size()); ++k) which.push_back(k);
  int passed = 0, failed = 0, skipped = 0;
  for (int k : which) {
    const auto& c = criteria()[k - 1];
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
    std::printf("criterion %d %s: %s | %s\n", k, c.name, tag, o.detail.c_str());
    std::fflush(stdout);
    if (const char* log = std::getenv("WAVINV_ACCEPT_LOG"))
      if (std::FILE* f = std::fopen(log, "a")) {
        std::fprintf(f, "criterion %d %s: %s | %s\n", k, c.name, tag, o.detail.c_str());
        std::fclose(f);
      }
    (o.verdict == Verdict::pass ? passed : o.verdict == Verdict::skip ? skipped : failed) += 1;
  }
  if (failed) return 1;
  return passed == 0 && skipped > 0 ? 77 : 0;
}
