#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asv/nn.hpp"
#include "asv/perception.hpp"
#include "asv/policy.hpp"
#include "asv/replay.hpp"
#include "asv/rewards.hpp"

namespace asv {

struct CheckpointError : SimError {
  using SimError::SimError;
};

struct TrainerConfig {
  nn::NetConfig net;  // height/width are overwritten from the scenario map
  int episodes = 60000;
  int batch = 128;
  double lr = 1e-4;
  double gamma = 0.99;
  int target_sync = 100;  // gradient steps between hard target copies
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_fraction = 0.5;  // fraction of episodes spent annealing
  double per_alpha = 0.6;
  double per_beta_start = 0.4;
  double per_beta_end = 1.0;
  double per_eps = 1e-6;
  size_t capacity = 1000000;
  double prefill = 0.20;   // of capacity, filled by greedy episodes
  bool greedy_mix = false; // exploration half random, half greedy
  int train_every = 1;     // env steps between gradient steps
  int min_fill_batches = 10;
  int eval_every = 100;    // episodes between held-out evaluations
  int eval_episodes = 8;
  uint64_t seed = 1;
};

// Weights for both teams plus enough optimizer/RNG state to resume.
struct CheckpointData {
  nn::QNetwork<float> scout_online, scout_target, cleaner_online, cleaner_target;
  uint64_t episode = 0;
  std::array<long, 2> grad_steps{0, 0};
  std::array<std::string, 2> replay_rng;
  double best_ptc = -1.0;
};

void write_checkpoint(const std::string& path, CheckpointData& data);
CheckpointData read_checkpoint(const std::string& path);

// Greedy-argmax over two frozen team networks; requires ctx.perception.
// Owns weight-only copies, so instances are independent across threads.
class DrlPolicy final : public Policy {
public:
  DrlPolicy(const nn::QNetwork<float>& scout, const nn::QNetwork<float>& cleaner,
            std::string name = "dddql");
  Action act(const ActContext& ctx, Rng& rng) override;
  std::string name() const override { return name_; }

private:
  nn::QNetwork<float> scout_, cleaner_;
  std::string name_;
};

struct EpisodeSummary {
  int collected = 0;
  int initial_count = 0;
  double final_mse = 0.0;
  std::array<double, 2> loss_sum{0.0, 0.0};
  std::array<long, 2> loss_steps{0, 0};
};

// Dueling double Q-learning over the two team networks with shared per-team
// prioritized replay.  Single-threaded; every random draw comes from named
// sub-streams of the config seed.
class Trainer {
public:
  Trainer(const GridMap& map, FleetConfig fleet, WorldParams world, RewardWeights rewards,
          TrainerConfig cfg, std::string out_dir);

  // Full protocol: prefill, episode loop with periodic held-out evaluation,
  // best/latest checkpoints, CSV log.
  void train();

  // Greedy-driven episodes until each team buffer holds exactly
  // round(prefill * capacity) transitions.
  void prefill();

  bool resume_from(const std::string& path);  // false when no file is present

  std::pair<double, double> evaluate_heldout(int episodes);  // mean PTC, mean final MSE

  const nn::QNetwork<float>& scout_net() const { return scout_online_; }
  const nn::QNetwork<float>& cleaner_net() const { return cleaner_online_; }
  const PrioritizedReplay& buffer(int team) const { return *buf_[team]; }
  long gradient_steps(int team) const { return grad_steps_[team]; }
  size_t prefill_target() const;

  // One prioritized batch update for a team (0 = scout, 1 = cleaner).
  double train_step(int team, double beta);

  // Shared behavior rule: exploit the masked argmax with probability 1-eps,
  // otherwise explore uniformly, or (mix mode) by a fair coin between uniform
  // and the greedy baseline.
  static Action behavior_action(nn::QNetwork<float>& net, const float* obs,
                                const ActContext& ctx, double eps, bool mix, Greedy& greedy,
                                Rng& rng);

private:
  enum class Mode { Prefill, Train, Eval };

  EpisodeSummary run_episode(const char* env_stream, const char* pol_stream, uint64_t index,
                             Mode mode, double eps, double beta);
  int team_of(int agent) const;
  void write_log_row(int episode, const EpisodeSummary& s, double eps,
                     std::optional<std::pair<double, double>> eval);
  void save(const std::string& name);

  const GridMap& map_;
  FleetConfig fleet_;
  WorldParams world_;
  RewardWeights rewards_;
  TrainerConfig cfg_;
  std::string out_;
  size_t obs_floats_;

  nn::QNetwork<float> scout_online_, scout_target_, cleaner_online_, cleaner_target_;
  nn::AdamConfig adam_;
  std::array<std::unique_ptr<PrioritizedReplay>, 2> buf_;
  std::array<Rng, 2> replay_rng_;
  std::array<long, 2> grad_steps_{0, 0};
  long fleet_steps_ = 0;
  uint64_t episode_ = 0;
  double best_ptc_ = -1.0;
  Greedy greedy_;
  std::string log_path_;
  bool log_started_ = false;

  // batch scratch
  nn::Mat<float> x_, xn_;
  std::vector<size_t> idx_;
  std::vector<double> w_;
  std::vector<float> td_;
};

}  // namespace asv
