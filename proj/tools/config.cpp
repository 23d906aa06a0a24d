#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <set>
#include <sstream>

#include "wavinv/error.hpp"

namespace wavinv::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key, "cannot parse '" + v + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(parse_number<int>(key, tok));
  }
  return out;
}

std::string int_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct Entry {
  ConfigKey info;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define WAVINV_DOUBLE(KEY, FIELD, HELP, NONPAPER)                                                   \
  Entry {                                                                                           \
    {KEY, HELP, NONPAPER}, [](ExperimentConfig& c, const std::string& v) {                          \
      c.FIELD = parse_number<double>(KEY, v);                                                       \
    },                                                                                              \
        [](const ExperimentConfig& c) { return fmt(c.FIELD); }                                      \
  }
#define WAVINV_INT(KEY, FIELD, HELP, NONPAPER)                                                      \
  Entry {                                                                                           \
    {KEY, HELP, NONPAPER}, [](ExperimentConfig& c, const std::string& v) {                          \
      c.FIELD = parse_number<int>(KEY, v);                                                          \
    },                                                                                              \
        [](const ExperimentConfig& c) { return std::to_string(c.FIELD); }                           \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      WAVINV_DOUBLE("likelihood.a0", prior.likelihood_a0, "Gamma prior shape on the noise precision", false),
      WAVINV_DOUBLE("likelihood.b0", prior.likelihood_b0, "Gamma prior rate on the noise precision", false),
      WAVINV_DOUBLE("prior.gamma_root", prior.gamma_root, "mixing factor at scale 1", false),
      WAVINV_DOUBLE("prior.gamma_default", prior.gamma_default, "mixing factor base for scales > 1", false),
      WAVINV_DOUBLE("prior.variance_alpha_inv", prior.variance_alpha_inv, "slab variance at scale 0", false),
      WAVINV_DOUBLE("prior.scaling_factor_r", prior.scaling_factor_r, "slab variance decay per scale", false),
      WAVINV_INT("smc.particles", smc.particles, "number of particles N", false),
      WAVINV_INT("smc.densities", smc.densities, "bridging densities M per scale", false),
      WAVINV_DOUBLE("smc.ess_fraction", smc.ess_fraction, "resample when ESS < fraction * N", false),
      WAVINV_DOUBLE("smc.initial_sigma", smc.initial_sigma, "initial random-walk step", true),
      Entry{{"smc.schedule", "linear | adaptive_ess", true},
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "linear") c.smc.schedule = smc::Schedule::linear;
              else if (v == "adaptive_ess") c.smc.schedule = smc::Schedule::adaptive_ess;
              else throw ConfigError("smc.schedule", "expected linear or adaptive_ess, got '" + v + "'");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.smc.schedule == smc::Schedule::linear ? "linear" : "adaptive_ess");
            }},
      WAVINV_DOUBLE("smc.adaptive_ess_target", smc.adaptive_ess_target, "ESS drop per step (adaptive_ess)", true),
      Entry{{"smc.proposal", "ensemble_scaled | isotropic", true},
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "isotropic") c.smc.proposal = smc::Proposal::isotropic;
              else if (v == "ensemble_scaled") c.smc.proposal = smc::Proposal::ensemble_scaled;
              else throw ConfigError("smc.proposal", "expected isotropic or ensemble_scaled, got '" + v + "'");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.smc.proposal == smc::Proposal::isotropic ? "isotropic" : "ensemble_scaled");
            }},
      WAVINV_INT("smc.workers", smc.workers, "rejuvenation threads (results do not depend on it)", true),
      WAVINV_DOUBLE("smc.stop_threshold", smc.stop_threshold, "stop when ln BF <= threshold", false),
      Entry{{"smc.forced_resample_steps", "comma list of bridging steps that always resample", true},
            [](ExperimentConfig& c, const std::string& v) {
              c.smc.forced_resample_steps = parse_int_list("smc.forced_resample_steps", v);
            },
            [](const ExperimentConfig& c) { return int_list(c.smc.forced_resample_steps); }},
      WAVINV_INT("smc.max_scale", max_scale, "largest scale S", false),
      WAVINV_DOUBLE("solver.epsilon", solver.refinement_threshold, "AWCM refinement threshold", false),
      WAVINV_DOUBLE("solver.tolerance", solver.residual_tolerance, "max-norm residual tolerance", true),
      WAVINV_INT("solver.max_vcycles", solver.max_vcycles, "V-cycle budget", true),
      WAVINV_INT("solver.smoother_sweeps", solver.smoother_sweeps, "Gauss-Seidel sweeps before and after", true),
      WAVINV_INT("solver.coarsest_level", solver.coarsest_level, "coarsest multigrid level", true),
      WAVINV_INT("solver.half_width", solver.half_width, "lifting N of the solver", true),
      WAVINV_INT("solver.level", solver.finest_level_J, "finest level J of `solve` inputs", true),
      WAVINV_DOUBLE("inference.solver_epsilon", inference_solver.refinement_threshold,
                    "AWCM threshold inside the likelihood", true),
      WAVINV_DOUBLE("inference.solver_tolerance", inference_solver.residual_tolerance,
                    "residual tolerance inside the likelihood", true),
      WAVINV_DOUBLE("basis.count_threshold", count_threshold,
                    "relative cut on |posterior mean| for basis counts (0: non-zero)", true),
      Entry{{"benchmark.id", "I | II | III | III-5x5 | III-5pct | IV", false},
            [](ExperimentConfig& c, const std::string& v) {
              try {
                c.benchmark = benchmarks::parse_benchmark_id(v);
              } catch (const Error& e) {
                throw ConfigError("benchmark.id", e.what());
              }
            },
            [](const ExperimentConfig& c) { return benchmarks::to_string(c.benchmark); }},
      WAVINV_DOUBLE("benchmark.gp_strength", gp_strength, "GP strength s_g (IV: outer layer)", false),
      WAVINV_DOUBLE("benchmark.gp_length", gp_length, "GP length scale l (IV: outer layer)", false),
      WAVINV_DOUBLE("benchmark.warp_strength", warp_strength, "IV warp strength", true),
      WAVINV_DOUBLE("benchmark.warp_length", warp_length, "IV warp length scale", true),
      Entry{{"observation.sensor_grid", "sensors per axis (default: per benchmark)", false},
            [](ExperimentConfig& c, const std::string& v) {
              c.sensor_grid = v == "default" ? std::nullopt
                                             : std::optional<int>(parse_number<int>("observation.sensor_grid", v));
            },
            [](const ExperimentConfig& c) {
              return c.sensor_grid ? std::to_string(*c.sensor_grid) : std::string("default");
            }},
      Entry{{"observation.noise", "noise sd as a fraction of the reading sd (default: per benchmark)", false},
            [](ExperimentConfig& c, const std::string& v) {
              c.noise = v == "default" ? std::nullopt
                                       : std::optional<double>(parse_number<double>("observation.noise", v));
            },
            [](const ExperimentConfig& c) { return c.noise ? fmt(*c.noise) : std::string("default"); }},
      WAVINV_INT("transform.levels", transform_levels, "levels for `transform` (0: maximum)", true),
      WAVINV_INT("transform.half_width", transform_half_width, "lifting N for `transform`", true),
      Entry{{"run.seed", "top-level seed", false},
            [](ExperimentConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>("run.seed", v); },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      Entry{{"run.out", "output directory", true},
            [](ExperimentConfig& c, const std::string& v) {
              if (v.empty()) throw ConfigError("run.out", "must not be empty");
              c.out = v;
            },
            [](const ExperimentConfig& c) { return c.out; }},
  };
  return table;
}

#undef WAVINV_DOUBLE
#undef WAVINV_INT

// Re-raises a module validation failure under the key that caused it.
void check_after_set(const ExperimentConfig& c, const std::string& key) {
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& e : entries()) k.push_back(e.info);
    return k;
  }();
  return keys;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_flat() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries()) out.emplace_back(e.info.key, e.get(*this));
  return out;
}

benchmarks::InferenceSettings ExperimentConfig::inference_settings() const {
  benchmarks::InferenceSettings s;
  s.smc = smc;
  s.smc.seed = seed;
  s.prior = prior;
  s.solver = inference_solver;
  s.max_scale = max_scale;
  s.count_threshold = count_threshold;
  return s;
}

benchmarks::BenchmarkSettings ExperimentConfig::benchmark_settings() const {
  benchmarks::BenchmarkSettings b;
  b.id = benchmark;
  b.seed = seed;
  b.sensor_grid = sensor_grid;
  b.noise_fraction = noise;
  b.gp_strength = gp_strength;
  b.gp_length = gp_length;
  b.warp_strength = warp_strength;
  b.warp_length = warp_length;
  b.inference = inference_settings();
  return b;
}

void ExperimentConfig::validate() const {
  solver.validate();
  benchmark_settings().validate();
  if (transform_levels < 0) throw ConfigError("transform.levels", "must be >= 0");
  if (transform_half_width < 1) throw ConfigError("transform.half_width", "must be >= 1");
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& e : entries())
    if (e.info.key == key) {
      ExperimentConfig next = cfg;
      e.set(next, trim(value));
      check_after_set(next, key);
      cfg = std::move(next);
      return;
    }
  throw ConfigError(key, "unknown key");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError("", where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(key, where + ": key given twice");
    try {
      set_config_value(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(key, where + ": " + std::string(e.what()).substr(key.size() + 2));
    }
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("", path + ": " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) throw ConfigError("", path + ": manifest has no config object");
    ExperimentConfig cfg;
    for (const auto& [k, v] : j["config"].items()) {
      if (!v.is_string()) throw ConfigError(k, path + ": manifest values must be strings");
      set_config_value(cfg, k, v.get<std::string>());
    }
    return cfg;
  }
  return parse_config_text(buf.str(), path);
}

}  // namespace wavinv::cli
