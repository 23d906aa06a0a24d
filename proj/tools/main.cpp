#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "config.hpp"
#include "selftest.hpp"
#include "wavinv/benchmarks/run.hpp"
#include "wavinv/darcy/multilevel.hpp"
#include "wavinv/darcy/observation.hpp"
#include "wavinv/error.hpp"
#include "wavinv/io/csv.hpp"
#include "wavinv/io/json.hpp"
#include "wavinv/smc/rng.hpp"
#include "wavinv/wavelet/transform2d.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavinv;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> particles, densities, scales, sensor_grid, workers, levels;
  std::optional<double> noise;
};

// Flags override config-file values and go through the same validation.
cli::ExperimentConfig resolve(const Flags& f) {
  cli::ExperimentConfig cfg = f.config.empty() ? cli::ExperimentConfig{} : cli::parse_config(f.config);
  if (f.seed) cli::set_config_value(cfg, "run.seed", std::to_string(*f.seed));
  if (f.out) cli::set_config_value(cfg, "run.out", *f.out);
  if (f.particles) cli::set_config_value(cfg, "smc.particles", std::to_string(*f.particles));
  if (f.densities) cli::set_config_value(cfg, "smc.densities", std::to_string(*f.densities));
  if (f.scales) cli::set_config_value(cfg, "smc.max_scale", std::to_string(*f.scales));
  if (f.sensor_grid) cli::set_config_value(cfg, "observation.sensor_grid", std::to_string(*f.sensor_grid));
  if (f.workers) cli::set_config_value(cfg, "smc.workers", std::to_string(*f.workers));
  if (f.levels) cli::set_config_value(cfg, "transform.levels", std::to_string(*f.levels));
  if (f.noise) {
    std::ostringstream s;
    s.precision(17);
    s << *f.noise;
    cli::set_config_value(cfg, "observation.noise", s.str());
  }
  return cfg;
}

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class Run {
 public:
  Run(std::string command, const cli::ExperimentConfig& cfg, std::string input)
      : command_(std::move(command)), cfg_(cfg), input_(std::move(input)), dir_(cfg.out) {
    fs::create_directories(dir_);
    write_manifest("running");
  }

  fs::path path(const std::string& name) {
    outputs_.push_back(name);
    return dir_ / name;
  }
  void write_json(const std::string& name, const json& j) {
    std::ofstream f(path(name));
    if (!f) throw IoError("cannot write " + (dir_ / name).string());
    f << j.dump(1) << '\n';
  }
  void finish() { write_manifest("ok"); }
  void fail(const Error& e) {
    extra_["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    write_manifest("error");
  }
  json& extra() { return extra_; }

 private:
  void write_manifest(const std::string& status) {
    json cfg = json::object();
    for (const auto& [k, v] : cfg_.to_flat()) cfg[k] = v;
    json m = {{"tool", "wavinv"},
              {"version", kVersion},
              {"command", command_},
              {"input", input_},
              {"status", status},
              {"config", cfg},
              {"seeds",
               {{"run.seed", cfg_.seed},
                {"truth_stream", smc::stream_key(cfg_.seed, smc::Stream::user, 1, 0, 0)},
                {"noise_stream", smc::stream_key(cfg_.seed, smc::Stream::user, 2, 0, 0)}}},
              {"outputs", outputs_}};
    for (const auto& [k, v] : extra_.items()) m[k] = v;
    std::ofstream f(dir_ / "manifest.json");
    f << m.dump(1) << '\n';
  }

  std::string command_;
  cli::ExperimentConfig cfg_;
  std::string input_;
  fs::path dir_;
  std::vector<std::string> outputs_;
  json extra_ = json::object();
};

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void cmd_transform(const cli::ExperimentConfig& cfg, const std::string& input, bool inverse) {
  Run run("transform", cfg, input);
  try {
    wavelet::LiftingConfig lc;
    lc.half_width = cfg.transform_half_width;
    if (!inverse) {
      const GridField2D f = io::read_field_csv(input);
      lc.boundary = f.sampling == Sampling::periodic ? wavelet::Boundary::periodic : wavelet::Boundary::reflect;
      const std::size_t n = std::min(f.rows(), f.cols());
      const int max_levels = log2_exact(f.sampling == Sampling::periodic ? n : n - 1) - 1;
      const int levels = cfg.transform_levels > 0 ? cfg.transform_levels : std::max(max_levels, 0);
      const auto tree = wavelet::forward_transform_2d(f, levels, lc);
      std::ofstream(run.path("tree.json")) << io::quadtree_to_json(tree) << '\n';
    } else {
      const auto tree = io::quadtree_from_json(read_text(input));
      lc.boundary = tree.boundary;
      lc.half_width = tree.half_width;
      io::write_field_csv(run.path("field.csv").string(), wavelet::inverse_transform_2d(tree, lc));
    }
  } catch (const Error& e) {
    run.fail(e);
    throw;
  }
  run.finish();
}

void cmd_solve(const cli::ExperimentConfig& cfg, const std::string& input, bool linear_k) {
  Run run("solve", cfg, input);
  try {
    darcy::DarcyProblem problem;
    problem.log_permeability = io::read_field_csv(input);
    if (linear_k)
      for (double& v : problem.log_permeability.values.storage()) {
        if (!(v > 0.0)) throw DomainError("permeability values must be positive");
        v = std::log(v);
      }
    problem.sources = darcy::corner_sources();
    darcy::SolverSettings s = cfg.solver;
    s.finest_level_J = problem.level();
    darcy::SolveReport rep;
    const GridField2D p = darcy::vcycle_solve(problem, s, &rep);
    io::write_field_csv(run.path("pressure.csv").string(), p);
    const int n = cfg.sensor_grid.value_or(10);
    const auto clean = darcy::observe(p, n);
    const auto obs = darcy::add_noise(clean, cfg.noise.value_or(0.0),
                                      smc::stream_key(cfg.seed, smc::Stream::user, 2, 0, 0));
    io::write_observation_csv(run.path("observations.csv").string(), obs);
    run.write_json("solve_report.json", {{"vcycles", rep.vcycles},
                                         {"outer_iterations", rep.outer_iterations},
                                         {"residual", rep.residual},
                                         {"active_nodes", rep.active_nodes},
                                         {"compatibility_shift", rep.compatibility_shift}});
  } catch (const Error& e) {
    run.fail(e);
    throw;
  }
  run.finish();
}

json scale_json(const benchmarks::ScaleSummary& s) {
  return {{"scale", s.scale},
          {"log_z", s.log_z},
          {"log_bf", nan_to_null(s.log_bf)},
          {"basis_count", s.basis_count},
          {"mean_active", s.mean_active},
          {"final_acceptance", s.final_acceptance},
          {"resample_count", s.resample_count},
          {"likelihood_calls", s.likelihood_calls},
          {"traces",
           {{"gamma", s.gamma_trace},
            {"ess", s.ess_trace},
            {"acceptance", s.acceptance_trace},
            {"indicator_acceptance", s.indicator_acceptance_trace},
            {"sigma", s.sigma_trace},
            {"resample_steps", s.resample_steps}}},
          {"diagonal",
           {{"position", s.diagonal.position},
            {"mean", s.diagonal.mean},
            {"lower", s.diagonal.lower},
            {"upper", s.diagonal.upper}}}};
}

void write_scale_fields(Run& run, const benchmarks::ScaleSummary& s) {
  const std::string tag = "_S" + std::to_string(s.scale) + ".csv";
  io::write_field_csv(run.path("mean" + tag).string(), s.field.mean);
  io::write_field_csv(run.path("q05" + tag).string(), s.field.lower);
  io::write_field_csv(run.path("q95" + tag).string(), s.field.upper);
}

void progress(const benchmarks::ScaleSummary& s) {
  std::cerr << "scale " << s.scale << ": ln Z = " << s.log_z << ", ln BF = " << s.log_bf
            << ", bases = " << s.basis_count << " (" << s.seconds << " s)\n";
}

void cmd_infer(const cli::ExperimentConfig& cfg, const std::string& input) {
  Run run("infer", cfg, input);
  try {
    const auto obs = io::read_observation_csv(input);
    json timing = json::array();
    const auto res = benchmarks::run_inference(obs, cfg.inference_settings(), [&](const benchmarks::ScaleSummary& s) {
      progress(s);
      timing.push_back({{"scale", s.scale}, {"seconds", s.seconds}});
    });
    json scales = json::array();
    for (const auto& s : res.scales) {
      write_scale_fields(run, s);
      scales.push_back(scale_json(s));
    }
    run.write_json("report.json",
                   {{"selected_scale", res.selected_scale}, {"stop_scale", res.stop_scale}, {"scales", scales}});
    run.write_json("timing.json", timing);
  } catch (const Error& e) {
    run.fail(e);
    throw;
  }
  run.finish();
}

void cmd_benchmark(const cli::ExperimentConfig& cfg) {
  Run run("benchmark", cfg, benchmarks::to_string(cfg.benchmark));
  try {
    const auto settings = cfg.benchmark_settings();
    const auto rep = benchmarks::run_benchmark(settings, progress);
    io::write_field_csv(run.path("truth.csv").string(), rep.data.truth);
    io::write_observation_csv(run.path("observations.csv").string(), rep.data.observation);
    json scales = json::array();
    json timing = json::array();
    for (std::size_t k = 0; k < rep.inference.scales.size(); ++k) {
      const auto& s = rep.inference.scales[k];
      write_scale_fields(run, s);
      json j = scale_json(s);
      j["rmse"] = rep.rmse_per_scale[k];
      scales.push_back(std::move(j));
      timing.push_back({{"scale", s.scale}, {"seconds", s.seconds}});
    }
    run.write_json("report.json", {{"benchmark", benchmarks::to_string(rep.id)},
                                   {"seed", rep.seed},
                                   {"sensor_grid", rep.sensor_grid},
                                   {"noise_fraction", rep.noise_fraction},
                                   {"noise_sigma", rep.data.observation.noise_sigma},
                                   {"selected_scale", rep.inference.selected_scale},
                                   {"stop_scale", rep.inference.stop_scale},
                                   {"rmse", rep.rmse},
                                   {"basis_counts", rep.basis_counts},
                                   {"diagonal_coverage", rep.diagonal_coverage},
                                   {"truth_diagonal", benchmarks::diagonal(rep.data.truth)},
                                   {"scales", scales}});
    timing.push_back({{"total", rep.seconds}});
    run.write_json("timing.json", timing);
  } catch (const Error& e) {
    run.fail(e);
    throw;
  }
  run.finish();
}

int cmd_selftest(const cli::ExperimentConfig& cfg) {
  Run run("selftest", cfg, "");
  const auto results = cli::run_selftests(cfg.seed);
  json lines = json::array();
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    lines.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    ok = ok && r.passed;
  }
  run.write_json("selftest.json", lines);
  run.finish();
  return ok ? 0 : 1;
}

void print_error(const std::string& kind, const std::string& message, const std::string& key = {}) {
  json e = {{"kind", kind}, {"message", message}};
  if (!key.empty()) e["key"] = key;
  std::cerr << json{{"error", e}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale Bayesian inference of log-permeability from pressure sensors"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "flat key = value config, or a manifest.json")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "top-level seed");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--particles", flags.particles, "particles N");
    sub->add_option("--densities", flags.densities, "bridging densities M per scale");
    sub->add_option("--scales", flags.scales, "largest scale S");
    sub->add_option("--sensor-grid", flags.sensor_grid, "sensors per axis");
    sub->add_option("--noise", flags.noise, "noise sd as a fraction of the reading sd");
    sub->add_option("--workers", flags.workers, "rejuvenation threads");
  };

  std::string input, bench_id;
  bool inverse = false, linear_k = false;
  auto* transform = app.add_subcommand("transform", "field CSV -> quadtree JSON, or back with --inverse");
  add_common(transform);
  transform->add_option("input", input, "field CSV (or quadtree JSON with --inverse)")->required();
  transform->add_flag("--inverse", inverse, "quadtree JSON -> field CSV");
  transform->add_option("--levels", flags.levels, "transform levels (default: maximum)");

  auto* solve = app.add_subcommand("solve", "log-permeability CSV -> pressure CSV and sensor readings");
  add_common(solve);
  solve->add_option("input", input, "nodal (2^J+1)^2 field CSV of ln k")->required();
  solve->add_flag("--linear-k", linear_k, "input holds k rather than ln k");

  auto* infer = app.add_subcommand("infer", "observations CSV -> per-scale posterior summaries");
  add_common(infer);
  infer->add_option("input", input, "observation CSV")->required();

  auto* bench = app.add_subcommand("benchmark", "run a synthetic benchmark end to end");
  add_common(bench);
  bench->add_option("id", bench_id, "I, II, III, III-5x5, III-5pct or IV (default: benchmark.id)");

  auto* self = app.add_subcommand("selftest", "quick oracle checks");
  add_common(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    cli::ExperimentConfig cfg = resolve(flags);
    if (*bench && !bench_id.empty()) cli::set_config_value(cfg, "benchmark.id", bench_id);
    if (*transform) cmd_transform(cfg, input, inverse);
    else if (*solve) cmd_solve(cfg, input, linear_k);
    else if (*infer) cmd_infer(cfg, input);
    else if (*bench) cmd_benchmark(cfg);
    else if (*self) return cmd_selftest(cfg);
    return 0;
  } catch (const ConfigError& e) {
    print_error(e.kind(), e.what(), e.key());
    return 2;
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
