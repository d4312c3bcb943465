#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "asv/benchmark.hpp"
#include "asv/episode_log.hpp"
#include "asv/run_config.hpp"
#include "asv/svg_plot.hpp"
#include "asv/trainer.hpp"

namespace fs = std::filesystem;
using namespace asv;

namespace {

// Bad invocation (exit 1), as opposed to failures while running (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GridMap load_scenario(const RunConfig& cfg) {
  if (cfg.scenario.empty()) throw UsageError("--scenario is required");
  if (!fs::exists(cfg.scenario)) throw UsageError("scenario not found: " + cfg.scenario);
  return load_map_file(cfg.scenario);
}

void validate(const RunConfig& cfg) {
  if (cfg.scouts < 0 || cfg.cleaners < 0 || cfg.scouts + cfg.cleaners < 1)
    throw UsageError("fleet needs nonnegative team counts and at least one agent");
  if (cfg.horizon < 1) throw UsageError("--horizon must be >= 1");
  if (cfg.episodes < 0) throw UsageError("--episodes must be >= 0");
  if (cfg.jobs < 1) throw UsageError("--jobs must be >= 1");
}

bool is_drl(std::string_view name) { return name == "dddql" || name == "dddql-greedy"; }

// dddql / dddql-greedy load the checkpoint once and act greedily from it; the
// two names only label report rows by the training recipe that produced them.
PolicyFactory policy_factory(const std::string& name, const RunConfig& cfg,
                             std::shared_ptr<CheckpointData>& ckpt) {
  if (is_drl(name)) {
    if (cfg.checkpoint.empty())
      throw UsageError("policy '" + name + "' needs --checkpoint");
    if (!fs::exists(cfg.checkpoint))
      throw UsageError("checkpoint not found: " + cfg.checkpoint);
    if (!ckpt) ckpt = std::make_shared<CheckpointData>(read_checkpoint(cfg.checkpoint));
    return [ckpt, name] {
      return std::make_unique<DrlPolicy>(ckpt->scout_online, ckpt->cleaner_online, name);
    };
  }
  if (!make_baseline(name)) throw UsageError("unknown policy '" + name + "'");
  return [name] { return make_baseline(name); };
}

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= list.size()) {
    size_t comma = list.find(',', start);
    if (comma == std::string::npos) comma = list.size();
    std::string item = list.substr(start, comma - start);
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("--policy must name at least one policy");
  return out;
}

int cmd_train(RunConfig cfg) {
  validate(cfg);
  GridMap map = load_scenario(cfg);
  TrainerConfig tc = cfg.trainer;
  tc.seed = cfg.seed;
  Trainer trainer(map, fleet_config(cfg), world_params(cfg), cfg.rewards, tc, cfg.out);
  if (!cfg.checkpoint.empty()) {
    if (!trainer.resume_from(cfg.checkpoint))
      throw UsageError("checkpoint not found: " + cfg.checkpoint);
  }
  trainer.train();
  std::printf("trained %d episodes on %s; checkpoints and training_log.csv under %s\n",
              tc.episodes, map.name.c_str(), cfg.out.c_str());
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  validate(cfg);
  GridMap map = load_scenario(cfg);
  std::shared_ptr<CheckpointData> ckpt;
  std::vector<BenchmarkEntry> entries;
  for (const std::string& name : split_names(cfg.policy))
    entries.push_back({name, policy_factory(name, cfg, ckpt)});

  auto results = run_benchmark(map, entries, cfg.episodes, fleet_config(cfg), world_params(cfg),
                               cfg.seed, cfg.jobs, cfg.strict, cfg.out);

  std::printf("%-14s %-14s %9s %9s %12s %12s %9s\n", "policy", "scenario", "mean_ptc",
              "ci95_ptc", "mean_mse", "ci95_mse", "ms/step");
  for (const PolicyResult& r : results)
    std::printf("%-14s %-14s %9.2f %9.2f %12.5f %12.5f %9.3f\n", r.policy.c_str(),
                r.scenario.c_str(), r.mean_ptc, r.ci_ptc, r.mean_mse, r.ci_mse, r.mean_ms);
  std::printf("report written to %s/report.csv\n", cfg.out.c_str());
  return 0;
}

int cmd_rollout(const RunConfig& cfg) {
  validate(cfg);
  GridMap map = load_scenario(cfg);
  std::shared_ptr<CheckpointData> ckpt;
  auto policy = policy_factory(cfg.policy, cfg, ckpt)();

  fs::create_directories(cfg.out);
  EpisodeLogWriter log(cfg.out + "/rollout.jsonl");
  std::vector<std::vector<Cell>> paths;
  std::vector<AgentKind> kinds;
  std::vector<Cell> trash_left;

  RunHooks hooks;
  hooks.on_reset = [&](const EpisodeState& st, const PerceptionState&) {
    log.header(st, cfg.seed);
    paths.assign(st.positions.size(), {});
    kinds.clear();
    for (int n = 0; n < st.num_agents(); ++n) {
      paths[n].push_back(st.positions[n]);
      kinds.push_back(st.specs[n].kind);
    }
  };
  hooks.on_step = [&](const EpisodeState& st, const std::vector<std::optional<Action>>& actions,
                      const StepResult& result, const PerceptionState&) {
    std::vector<RewardBreakdown> rewards(st.num_agents());
    for (int n = 0; n < st.num_agents(); ++n)
      rewards[n] = agent_reward(st.specs[n], result.agents[n], cfg.rewards, map.diagonal());
    log.step(st, actions, result, rewards);
    for (int n = 0; n < st.num_agents(); ++n) paths[n].push_back(st.positions[n]);
    trash_left.clear();
    for (int i = 0; i < map.height; ++i)
      for (int j = 0; j < map.width; ++j)
        if (st.truth[map.idx({i, j})] > 0) trash_left.push_back({i, j});
  };

  FleetConfig fleet = fleet_config(cfg);
  WorldParams world = world_params(cfg);
  EvalEpisode ep = run_episode(map, fleet, world, *policy, cfg.seed, 0, "eval-episode",
                               "eval-policy", !cfg.strict, &hooks);
  write_rollout_svg(cfg.out + "/rollout.svg", map, paths, kinds, trash_left);
  std::printf("rollout: policy=%s seed=%llu collected %d of %d (PTC %.2f)\n",
              policy->name().c_str(), static_cast<unsigned long long>(cfg.seed), ep.collected,
              ep.initial_count, ep.ptc.empty() ? 0.0 : ep.ptc.back());
  std::printf("log %s/rollout.jsonl, plot %s/rollout.svg\n", cfg.out.c_str(), cfg.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  // The config file seeds defaults; flags parsed below override it.
  try {
    for (int i = 1; i < argc; ++i) {
      std::string_view a = argv[i];
      if (a == "--config" && i + 1 < argc)
        cfg = load_config_file(argv[i + 1], cfg);
      else if (a.rfind("--config=", 0) == 0)
        cfg = load_config_file(std::string(a.substr(9)), cfg);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "asvclean: %s\n", e.what());
    return 1;
  }

  CLI::App app{"Simulator and benchmark suite for cooperative trash collection by mixed "
               "scout/cleaner surface-vehicle fleets"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file applied before flags");

  auto add_common = [&](CLI::App* cmd, bool episodes_mean_training) {
    cmd->add_option("--config", config_path, "key=value config file applied before flags");
    cmd->add_option("--scenario", cfg.scenario, "map file (P1-style text grid)");
    cmd->add_option("--policy", cfg.policy,
                    "dddql, dddql-greedy, greedy, pso, lawnmower or random");
    cmd->add_option("--episodes",
                    episodes_mean_training ? cfg.trainer.episodes : cfg.episodes,
                    episodes_mean_training ? "training episodes" : "evaluation episodes");
    cmd->add_option("--seed", cfg.seed, "master random seed");
    cmd->add_option("--horizon", cfg.horizon, "steps per episode");
    cmd->add_option("--jobs", cfg.jobs, "evaluation worker threads");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_option("--checkpoint", cfg.checkpoint, "network checkpoint to load");
    cmd->add_option("--prefill", cfg.trainer.prefill, "buffer fraction filled before training");
    cmd->add_flag("--strict-determinism", cfg.strict,
                  "zero wall-clock fields so repeated runs are byte-identical");
  };

  CLI::App* train = app.add_subcommand("train", "Train the scout and cleaner networks");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Benchmark policies over seeded episodes");
  CLI::App* rollout =
      app.add_subcommand("rollout", "Run one episode; write its JSONL log and trajectory plot");
  add_common(train, true);
  add_common(evaluate, false);
  add_common(rollout, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) return cmd_train(cfg);
    if (evaluate->parsed()) return cmd_evaluate(cfg);
    if (rollout->parsed()) return cmd_rollout(cfg);
    std::fprintf(stderr, "%s", app.help().c_str());
    return 1;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "asvclean: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "asvclean: %s\n", e.what());
    return 2;
  }
}
