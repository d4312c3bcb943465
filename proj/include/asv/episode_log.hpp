#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "asv/episode.hpp"
#include "asv/rewards.hpp"

namespace asv {

// JSON-lines episode record: one header object, then one object per step
// carrying positions, actions, collection counts, coverage mass, and the
// per-agent reward terms.
class EpisodeLogWriter {
public:
  explicit EpisodeLogWriter(const std::string& path);

  void header(const EpisodeState& state, uint64_t seed);
  void step(const EpisodeState& state, const std::vector<std::optional<Action>>& actions,
            const StepResult& result, const std::vector<RewardBreakdown>& rewards);

private:
  std::ofstream os_;
};

}  // namespace asv
