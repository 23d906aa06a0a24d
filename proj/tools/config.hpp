#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavinv/bayes/prior.hpp"
#include "wavinv/benchmarks/run.hpp"
#include "wavinv/darcy/problem.hpp"
#include "wavinv/smc/sampler.hpp"

namespace wavinv::cli {

// Every tunable of a run. Defaults are the published parameter table; keys
// not in that table are marked in config_keys().
struct ExperimentConfig {
  bayes::PriorHyperparams prior;
  smc::SmcSettings smc;
  int max_scale = 5;
  darcy::SolverSettings solver;  // standalone `solve`
  darcy::SolverSettings inference_solver = benchmarks::inference_solver_defaults();
  double count_threshold = 0.0;

  benchmarks::BenchmarkId benchmark = benchmarks::BenchmarkId::I;
  double gp_strength = 1.0;
  double gp_length = 0.3;
  double warp_strength = 0.1;
  double warp_length = 0.3;
  std::optional<int> sensor_grid;  // unset: 10 (5 for III-5x5)
  std::optional<double> noise;     // unset: 0.01 (0.05 for III-5pct)

  int transform_levels = 0;  // 0: as many as the input allows
  int transform_half_width = 2;

  std::uint64_t seed = 1;
  std::string out = "wavinv_out";

  // Resolved key -> value text, in config_keys() order; unset optionals are
  // written as "default".
  std::vector<std::pair<std::string, std::string>> to_flat() const;

  benchmarks::InferenceSettings inference_settings() const;
  benchmarks::BenchmarkSettings benchmark_settings() const;
  // Cross-key checks; throws ConfigError.
  void validate() const;
};

struct ConfigKey {
  std::string key;
  std::string help;
  bool non_paper = false;  // not part of the published parameter table
};
const std::vector<ConfigKey>& config_keys();

// Sets one key from its text form. Throws ConfigError naming the key for
// unknown keys, unparsable values and violated constraints.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Flat text: one `key = value` per line, `#` starts a comment, blank lines
// ignored, a key may appear once.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
// A path ending in .json is read as a run manifest (its "config" object);
// anything else as flat text.
ExperimentConfig parse_config(const std::string& path);

}  // namespace wavinv::cli
