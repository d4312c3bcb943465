#pragma once

#include "asv/episode.hpp"

namespace asv {

struct RewardWeights {
  double c_alpha = 1.0;
  double c_beta = 2.0;
  double c_gamma = 1.0;
  double c_delta = 50.0;
};

// Per-term values kept for the episode log; `total` is the scalar fed to
// training.
struct RewardBreakdown {
  double r_alpha = 0.0;  // -(distance to nearest believed trash)/diag, gated
  double r_beta = 0.0;   // newly covered cells credited to this agent
  double r_gamma = 0.0;  // belief change over the agent's disk, share-weighted
  double r_delta = 0.0;  // items collected
  double total = 0.0;
};

// Cleaners are paid for collection; the approach penalty only bites on steps
// with no pickup and only while the belief holds any trash.
RewardBreakdown reward_cleaner(const AgentOutcome& outcome, const RewardWeights& w,
                               double map_diag);

// Scouts are paid for coverage and belief correction; the approach penalty
// applies whenever the belief holds any trash.
RewardBreakdown reward_scout(const AgentOutcome& outcome, const RewardWeights& w,
                             double map_diag);

RewardBreakdown agent_reward(const AgentSpec& spec, const AgentOutcome& outcome,
                             const RewardWeights& w, double map_diag);

}  // namespace asv
