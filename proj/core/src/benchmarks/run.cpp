#include "wavinv/benchmarks/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wavinv/bayes/forward_map.hpp"
#include "wavinv/bayes/likelihood.hpp"
#include "wavinv/darcy/multilevel.hpp"
#include "wavinv/error.hpp"
#include "wavinv/smc/parallel.hpp"
#include "wavinv/smc/rng.hpp"

namespace wavinv::benchmarks {

std::string to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::I: return "I";
    case BenchmarkId::II: return "II";
    case BenchmarkId::III: return "III";
    case BenchmarkId::III_5x5: return "III-5x5";
    case BenchmarkId::III_5pct: return "III-5pct";
    case BenchmarkId::IV: return "IV";
  }
  return "?";
}

BenchmarkId parse_benchmark_id(const std::string& s) {
  for (auto id : {BenchmarkId::I, BenchmarkId::II, BenchmarkId::III, BenchmarkId::III_5x5, BenchmarkId::III_5pct,
                  BenchmarkId::IV})
    if (s == to_string(id)) return id;
  throw ParameterError("unknown benchmark id '" + s + "' (expected I, II, III, III-5x5, III-5pct or IV)");
}

darcy::SolverSettings inference_solver_defaults() {
  darcy::SolverSettings s;
  s.refinement_threshold = 1e-8;
  s.residual_tolerance = 1e-3;
  return s;
}

void InferenceSettings::validate() const {
  smc.validate();
  prior.validate();
  solver.validate();
  if (max_scale < 0 || max_scale > bayes::kParameterLevels)
    throw ParameterError("max scale must lie in [0, " + std::to_string(bayes::kParameterLevels) + "]");
  if (!(count_threshold >= 0.0)) throw ParameterError("basis count threshold must be >= 0");
}

namespace {

constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

ScaleSummary summarize(const smc::ScaleRunRecord& rec, const bayes::TreeLayout& layout,
                       const bayes::DarcyForwardMap& fm, double count_threshold, int workers) {
  const auto& e = rec.ensemble;
  const std::size_t n = layout.count_up_to(rec.scale);
  ScaleSummary s;
  s.scale = rec.scale;
  s.log_z = rec.log_z;
  s.log_bf = rec.log_bf;
  s.final_acceptance = rec.acceptance_trace.empty() ? 0.0 : rec.acceptance_trace.back();
  s.gamma_trace = rec.gamma_trace;
  s.ess_trace = rec.ess_trace;
  s.acceptance_trace = rec.acceptance_trace;
  s.indicator_acceptance_trace = rec.indicator_acceptance_trace;
  s.sigma_trace = rec.sigma_trace;
  s.resample_steps = rec.resample_steps;
  s.resample_count = rec.resample_steps.size();
  s.likelihood_calls = rec.likelihood_calls;
  s.seconds = rec.seconds;

  s.mean_coefficients.assign(n, 0.0);
  double active = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double w = e.normalized_weights[i];
    for (std::size_t k = 0; k < n; ++k) {
      s.mean_coefficients[k] += w * e.particles[i].values[k];
      active += w * e.particles[i].active[k];
    }
  }
  s.mean_active = active;

  std::vector<GridField2D> fields(e.size());
  smc::parallel_for(e.size(), workers, [&](std::size_t i) {
    const auto& p = e.particles[i];
    fields[i] = fm.log_permeability_field(layout.to_quadtree(p.values, p.active, rec.scale, fm.half_width()));
  });
  s.field = summarize_fields(fields, e.normalized_weights);
  s.diagonal = diagonal_slice_stats(fields, e.normalized_weights);

  double norm = 0.0;
  for (double v : s.field.mean.values.storage()) norm = std::max(norm, std::abs(v));
  const double cut = count_threshold * norm;
  for (std::size_t k = 0; k < n; ++k)
    if (layout.level(k) == 0 || std::abs(s.mean_coefficients[k]) > cut) ++s.basis_count;
  return s;
}

}  // namespace

InferenceResult run_inference(const darcy::SensorObservation& obs, const InferenceSettings& settings,
                              const std::function<void(const ScaleSummary&)>& on_scale) {
  settings.validate();
  obs.validate();
  bayes::DarcyForwardMap fm(settings.solver, obs.grid_size);
  smc::SmcModel model;
  model.layout = bayes::TreeLayout::quadtree(bayes::kParameterLevels);
  model.prior = settings.prior;
  model.log_likelihood = [&](const bayes::ParticleState& p) {
    return bayes::log_likelihood(obs.readings, fm(p, model.layout), settings.prior);
  };
  InferenceResult out;
  const auto run = smc::run_adaptive(settings.max_scale, model, settings.smc, [&](const smc::ScaleRunRecord& rec) {
    out.scales.push_back(summarize(rec, model.layout, fm, settings.count_threshold, settings.smc.workers));
    if (on_scale) on_scale(out.scales.back());
  });
  out.stop_scale = run.stop_scale;
  out.selected_scale = run.selected_scale;
  return out;
}

int BenchmarkSettings::resolved_sensor_grid() const {
  if (sensor_grid) return *sensor_grid;
  return id == BenchmarkId::III_5x5 ? 5 : 10;
}

double BenchmarkSettings::resolved_noise_fraction() const {
  if (noise_fraction) return *noise_fraction;
  return id == BenchmarkId::III_5pct ? 0.05 : 0.01;
}

void BenchmarkSettings::validate() const {
  inference.validate();
  if (resolved_sensor_grid() < 2) throw ParameterError("sensor grid must be >= 2");
  if (!(resolved_noise_fraction() > 0.0)) throw ParameterError("noise fraction must be > 0");
  GPSpec g;
  g.kernel = Kernel::wrapped_two_layer;
  g.strength = gp_strength;
  g.length_scale = gp_length;
  g.warp_strength = warp_strength;
  g.warp_length = warp_length;
  g.validate();
}

BenchmarkData make_benchmark_data(const BenchmarkSettings& settings) {
  settings.validate();
  BenchmarkData d;
  const GridField2D nodes = make_grid(33, Sampling::nodal);
  GPSpec g;
  g.strength = settings.gp_strength;
  g.length_scale = settings.gp_length;
  g.warp_strength = settings.warp_strength;
  g.warp_length = settings.warp_length;
  g.seed = smc::stream_key(settings.seed, smc::Stream::user, kTruthStream, 0, 0);
  switch (settings.id) {
    case BenchmarkId::I:
      d.truth_nodes = sample_field(nodes, log_k_linear);
      break;
    case BenchmarkId::II:
      g.kernel = Kernel::squared_exponential;
      d.truth_nodes = gp_sample(g, nodes);
      break;
    case BenchmarkId::III:
    case BenchmarkId::III_5x5:
    case BenchmarkId::III_5pct:
      g.kernel = Kernel::exponential;
      d.truth_nodes = gp_sample(g, nodes);
      break;
    case BenchmarkId::IV:
      g.kernel = Kernel::wrapped_two_layer;
      d.truth_nodes = wrapped_gp_sample(g, nodes);
      break;
  }
  d.truth = make_grid(32, Sampling::periodic);
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t c = 0; c < 32; ++c) d.truth(r, c) = d.truth_nodes(r, c);

  darcy::DarcyProblem problem;
  problem.log_permeability = d.truth_nodes;
  problem.sources = darcy::corner_sources();
  const GridField2D pressure = darcy::direct_solve_oracle(problem, problem.level());
  d.clean_readings = darcy::observe(pressure, settings.resolved_sensor_grid());
  d.observation = darcy::add_noise(d.clean_readings, settings.resolved_noise_fraction(),
                                   smc::stream_key(settings.seed, smc::Stream::user, kNoiseStream, 0, 0));
  return d;
}

BenchmarkReport run_benchmark(const BenchmarkSettings& settings,
                              const std::function<void(const ScaleSummary&)>& on_scale) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchmarkReport rep;
  rep.id = settings.id;
  rep.seed = settings.seed;
  rep.sensor_grid = settings.resolved_sensor_grid();
  rep.noise_fraction = settings.resolved_noise_fraction();
  rep.data = make_benchmark_data(settings);

  InferenceSettings inf = settings.inference;
  inf.smc.seed = settings.seed;
  inf.smc.continue_after_stop = true;
  rep.inference = run_inference(rep.data.observation, inf, on_scale);

  for (const auto& s : rep.inference.scales) {
    rep.basis_counts.push_back(s.basis_count);
    rep.rmse_per_scale.push_back(rmse(s.field.mean, rep.data.truth));
  }
  const auto& sel = rep.inference.scales.at(std::size_t(rep.inference.selected_scale));
  rep.rmse = rep.rmse_per_scale.at(std::size_t(rep.inference.selected_scale));
  rep.diagonal_coverage = band_coverage(diagonal(rep.data.truth), sel.diagonal.lower, sel.diagonal.upper);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace wavinv::benchmarks
