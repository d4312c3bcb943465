#include "asv/rewards.hpp"

namespace asv {

RewardBreakdown reward_cleaner(const AgentOutcome& outcome, const RewardWeights& w,
                               double map_diag) {
  RewardBreakdown r;
  r.r_delta = outcome.collected;
  if (outcome.collected == 0 && outcome.dist_known)
    r.r_alpha = -(*outcome.dist_known / map_diag);
  r.total = w.c_alpha * r.r_alpha + w.c_delta * r.r_delta;
  return r;
}

RewardBreakdown reward_scout(const AgentOutcome& outcome, const RewardWeights& w,
                             double map_diag) {
  RewardBreakdown r;
  r.r_beta = outcome.covered_credit;
  r.r_gamma = outcome.model_delta;
  if (outcome.dist_known) r.r_alpha = -(*outcome.dist_known / map_diag);
  r.total = w.c_alpha * r.r_alpha + w.c_beta * r.r_beta + w.c_gamma * r.r_gamma;
  return r;
}

RewardBreakdown agent_reward(const AgentSpec& spec, const AgentOutcome& outcome,
                             const RewardWeights& w, double map_diag) {
  return spec.can_clean ? reward_cleaner(outcome, w, map_diag)
                        : reward_scout(outcome, w, map_diag);
}

}  // namespace asv
