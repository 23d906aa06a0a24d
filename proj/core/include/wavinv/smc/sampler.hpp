#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "wavinv/bayes/layout.hpp"
#include "wavinv/bayes/prior.hpp"
#include "wavinv/smc/ensemble.hpp"
#include "wavinv/smc/rejuvenate.hpp"

namespace wavinv::smc {

struct SmcModel {
  bayes::TreeLayout layout;
  bayes::PriorHyperparams prior;
  LogLikelihoodFn log_likelihood;
};

enum class Schedule {
  linear,        // gamma_t = t / M
  adaptive_ess,  // not in the method description: picks each step so the ESS drops to adaptive_ess_target * N
};

enum class Proposal {
  isotropic,        // w' ~ N(w, sigma^2 I)
  ensemble_scaled,  // per-node step sigma * (weighted ensemble sd of that node)
};

struct SmcSettings {
  int particles = 740;
  int densities = 740;
  double ess_fraction = 0.95;
  double initial_sigma = 0.1;
  Schedule schedule = Schedule::linear;
  Proposal proposal = Proposal::ensemble_scaled;
  double adaptive_ess_target = 0.9;
  int workers = 1;
  std::uint64_t seed = 0;
  double stop_threshold = 0.0;
  // Keep running scales after the stopping rule fires (for per-scale
  // reporting); the selection still only considers scales up to the stop.
  bool continue_after_stop = false;
  // Extra resampling at these bridging steps regardless of the ESS.
  std::vector<int> forced_resample_steps;

  void validate() const;
};

struct ScaleRunRecord {
  int scale = 0;
  EnsembleState ensemble;             // final ensemble at gamma = 1
  double initial_log_weight_mean = 0.0;
  double log_z = 0.0;                 // ln Z_s / Z_0
  double log_bf = std::numeric_limits<double>::quiet_NaN();  // ln Z_s - ln Z_{s-1}
  std::vector<double> gamma_trace;
  std::vector<double> ess_trace;       // after reweighting, before resampling
  std::vector<double> acceptance_trace;
  std::vector<double> indicator_acceptance_trace;
  std::vector<double> sigma_trace;     // step used at each bridging step
  std::vector<int> resample_steps;
  std::size_t likelihood_calls = 0;
  double seconds = 0.0;
};

struct BayesFactorLedger {
  std::vector<double> log_z;
  std::vector<double> log_bf;  // log_bf[0] is NaN

  void push(double lz);
  // Index of the largest ln Z; -1 when empty.
  int best() const;
};

// Weighted standard deviation of each node's value over the particles where
// it is active; nodes active in fewer than two particles (or with zero
// spread) fall back to the slab standard deviation.
std::vector<double> ensemble_node_scale(const EnsembleState& e, const bayes::TreeLayout& layout,
                                        const bayes::PriorHyperparams& prior);

// Runs the tempering pass at scale s. With previous == nullptr and s == 0
// the ensemble starts from the prior; otherwise previous must be the record
// at s - 1 and its particles are extended by one prior-sampled level.
ScaleRunRecord run_scale(int s, const ScaleRunRecord* previous, const SmcModel& model, const SmcSettings& settings);

struct AdaptiveRun {
  std::vector<ScaleRunRecord> records;
  BayesFactorLedger ledger;
  int stop_scale = 0;  // first scale with ln BF <= threshold, else the last run
  int selected_scale = 0;
};

// Scales 0..max_scale, stopping after the first scale whose ln BF is at or
// below settings.stop_threshold. Selects the scale with the largest ln Z
// among scales 0..stop_scale.
AdaptiveRun run_adaptive(int max_scale, const SmcModel& model, const SmcSettings& settings,
                         const std::function<void(const ScaleRunRecord&)>& on_scale = {});

}  // namespace wavinv::smc
