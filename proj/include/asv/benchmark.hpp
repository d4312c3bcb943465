#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asv/metrics.hpp"
#include "asv/policy.hpp"

namespace asv {

struct EvalEpisode {
  uint64_t index = 0;
  int initial_count = 0;
  int collected = 0;
  std::vector<int> collections;  // per step
  std::vector<double> ptc;       // per step, percent
  std::vector<double> mse;       // per step, belief vs truth after smoothing
  double decision_ms = 0.0;      // mean wall clock per whole-fleet selection
};

// Observer callbacks; on_step fires after each applied step.
struct RunHooks {
  std::function<void(const EpisodeState&, const PerceptionState&)> on_reset;
  std::function<void(const EpisodeState&, const std::vector<std::optional<Action>>&,
                     const StepResult&, const PerceptionState&)>
      on_step;
};

// One seeded episode under `policy`.  Environment and policy randomness come
// from separate named streams of (master_seed, index), so every policy run
// with the same (master_seed, index) sees a byte-identical initialization.
EvalEpisode run_episode(const GridMap& map, const FleetConfig& fleet, const WorldParams& world,
                        Policy& policy, uint64_t master_seed, uint64_t index,
                        const char* env_stream = "eval-episode",
                        const char* pol_stream = "eval-policy", bool time_decisions = true,
                        const RunHooks* hooks = nullptr);

struct PolicyResult {
  std::string policy;
  std::string scenario;
  double mean_ptc = 0.0, ci_ptc = 0.0;    // final-step PTC over episodes
  double mean_mse = 0.0, ci_mse = 0.0;    // final-step MSE over episodes
  double mean_ms = 0.0;
  std::vector<EvalEpisode> episodes;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

struct BenchmarkEntry {
  std::string name;
  PolicyFactory make;
};

// Runs every policy over the same `episodes` seed indices.  jobs > 1 spreads
// episodes over worker threads (each worker builds its own policy instance);
// results are reduced in index order, so the report does not depend on the
// schedule.  strict zeroes the wall-clock fields.  When out_dir is nonempty,
// writes report.csv, per-policy trace JSON, and PTC/MSE step plots.
std::vector<PolicyResult> run_benchmark(const GridMap& map,
                                        const std::vector<BenchmarkEntry>& policies,
                                        int episodes, const FleetConfig& fleet,
                                        const WorldParams& world, uint64_t master_seed,
                                        int jobs, bool strict, const std::string& out_dir);

void write_report_csv(const std::string& path, const std::vector<PolicyResult>& results);

}  // namespace asv
