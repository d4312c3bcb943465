#include "asv/episode_log.hpp"

#include <nlohmann/json.hpp>

namespace asv {

EpisodeLogWriter::EpisodeLogWriter(const std::string& path) : os_(path) {
  if (!os_) throw SimError("cannot open episode log " + path);
}

void EpisodeLogWriter::header(const EpisodeState& state, uint64_t seed) {
  int scouts = 0, cleaners = 0;
  for (const auto& s : state.specs) (s.can_clean ? cleaners : scouts) += 1;
  nlohmann::json j{{"type", "header"},
                   {"seed", seed},
                   {"map", state.map->name},
                   {"scouts", scouts},
                   {"cleaners", cleaners},
                   {"horizon", state.horizon},
                   {"wind", {state.trash.wind.x, state.trash.wind.y}},
                   {"initial_count", state.initial_count}};
  os_ << j.dump() << "\n";
}

void EpisodeLogWriter::step(const EpisodeState& state,
                            const std::vector<std::optional<Action>>& actions,
                            const StepResult& result,
                            const std::vector<RewardBreakdown>& rewards) {
  nlohmann::json pos = nlohmann::json::array();
  for (Cell c : state.positions) pos.push_back({c.i, c.j});
  nlohmann::json acts = nlohmann::json::array();
  for (const auto& a : actions)
    a ? acts.push_back(action_name(*a)) : acts.push_back(nullptr);
  long sum_u = 0;
  for (uint8_t u : state.coverage) sum_u += u;
  nlohmann::json rws = nlohmann::json::array();
  for (const auto& r : rewards)
    rws.push_back({{"alpha", r.r_alpha},
                   {"beta", r.r_beta},
                   {"gamma", r.r_gamma},
                   {"delta", r.r_delta},
                   {"total", r.total}});
  nlohmann::json j{{"t", state.step - 1},
                   {"positions", pos},
                   {"actions", acts},
                   {"collected", result.collected},
                   {"remaining", state.remaining_items()},
                   {"sum_u", sum_u},
                   {"rewards", rws}};
  os_ << j.dump() << "\n";
}

}  // namespace asv
