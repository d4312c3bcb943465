#include "asv/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asv {

const char* action_name(Action a) {
  static constexpr const char* names[kNumActions] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return names[static_cast<int>(a)];
}

std::vector<AgentSpec> FleetConfig::specs() const {
  std::vector<AgentSpec> out;
  out.reserve(size());
  for (int n = 0; n < scouts; ++n) out.push_back(AgentSpec::scout());
  for (int n = 0; n < cleaners; ++n) out.push_back(AgentSpec::cleaner());
  return out;
}

Cell move_endpoint(Cell from, Action a, int speed) {
  auto [di, dj] = kActionDelta[static_cast<int>(a)];
  return {from.i + di * speed, from.j + dj * speed};
}

namespace {

// Refreshes model/coverage from the agents' sensing disks.  When `result` is
// given, also accumulates the per-agent coverage and model-change bookkeeping.
void sense(EpisodeState& st, StepResult* result) {
  const GridMap& map = *st.map;
  auto& sc = st.scratch;
  if (sc.in_disk.size() != static_cast<size_t>(map.size())) {
    sc.in_disk.assign(map.size(), 0);
    sc.delta.assign(map.size(), 0);
    sc.was_uncovered.assign(map.size(), 0);
    sc.eta.assign(map.size(), 0);
  }
  sc.touched.clear();

  for (int n = 0; n < st.num_agents(); ++n) {
    Cell p = st.positions[n];
    for (auto [di, dj] : st.disks[n]) {
      int i = p.i + di, j = p.j + dj;
      if (!map.navigable(i, j)) continue;
      int id = map.idx(i, j);
      if (!sc.in_disk[id]) {
        sc.in_disk[id] = 1;
        sc.touched.push_back(id);
      }
      sc.eta[id] += 1;
    }
  }
  for (int id : sc.touched) {
    sc.delta[id] = st.truth[id] - st.model[id];
    sc.was_uncovered[id] = st.coverage[id] == 0;
  }
  if (result) {
    for (int n = 0; n < st.num_agents(); ++n) {
      Cell p = st.positions[n];
      AgentOutcome& out = result->agents[n];
      for (auto [di, dj] : st.disks[n]) {
        int i = p.i + di, j = p.j + dj;
        if (!map.navigable(i, j)) continue;
        int id = map.idx(i, j);
        if (sc.was_uncovered[id]) out.covered_credit += 1.0 / sc.eta[id];
        if (sc.delta[id] != 0) out.model_delta += static_cast<double>(sc.delta[id]) / sc.eta[id];
      }
    }
  }
  for (int id : sc.touched) {
    st.model[id] = st.truth[id];
    if (sc.was_uncovered[id]) {
      st.coverage[id] = 1;
      if (result) result->newly_covered += 1;
    }
    sc.in_disk[id] = 0;
    sc.delta[id] = 0;
    sc.was_uncovered[id] = 0;
    sc.eta[id] = 0;
  }
}

void fill_distances(const EpisodeState& st, StepResult& result) {
  std::vector<Cell> positive;
  const GridMap& map = *st.map;
  for (int i = 0; i < map.height; ++i)
    for (int j = 0; j < map.width; ++j)
      if (st.model[map.idx(i, j)] > 0) positive.push_back({i, j});
  if (positive.empty()) return;
  for (int n = 0; n < st.num_agents(); ++n) {
    double best = std::numeric_limits<double>::infinity();
    for (Cell c : positive) best = std::min(best, cell_dist(st.positions[n], c));
    result.agents[n].dist_known = best;
  }
}

}  // namespace

EpisodeState reset_episode(const GridMap& map, const FleetConfig& fleet, const WorldParams& params,
                           Rng& rng) {
  uint64_t episode_key = rng.next_u64();
  Rng deploy_rng = Rng::stream(episode_key, "deploy");
  Rng spawn_rng = Rng::stream(episode_key, "spawn");
  Rng wind_rng = Rng::stream(episode_key, "wind");

  auto cells = map.deploy_cells();
  if (static_cast<int>(cells.size()) < fleet.size())
    throw FleetTooLargeError("fleet of " + std::to_string(fleet.size()) + " exceeds " +
                             std::to_string(cells.size()) + " deploy cells");

  EpisodeState st;
  st.map = &map;
  st.specs = fleet.specs();
  st.horizon = params.horizon;

  // partial Fisher-Yates: distinct start cells, uniform over the zone union
  for (int n = 0; n < fleet.size(); ++n) {
    int pick = n + deploy_rng.uniform_int(static_cast<int>(cells.size()) - n);
    std::swap(cells[n], cells[pick]);
    st.positions.push_back(cells[n]);
  }

  st.trash = spawn_trash(map, params.trash, spawn_rng);
  st.trash.wind.x = wind_rng.uniform(-params.trash.wind_bound, params.trash.wind_bound);
  st.trash.wind.y = wind_rng.uniform(-params.trash.wind_bound, params.trash.wind_bound);
  st.initial_count = static_cast<int>(st.trash.items.size());

  bin_items(st.trash, map, st.truth);
  st.model.assign(map.size(), 0);
  st.coverage.assign(map.size(), 0);

  st.disks.reserve(st.specs.size());
  for (const AgentSpec& spec : st.specs) st.disks.push_back(disk_offsets(spec.sense_radius));

  sense(st, nullptr);
  return st;
}

ActionMask legal_actions(const EpisodeState& state, int agent, const Reservations& reserved) {
  ActionMask mask;
  const GridMap& map = *state.map;
  Cell from = state.positions[agent];
  int speed = state.specs[agent].speed;
  for (int a = 0; a < kNumActions; ++a) {
    auto [di, dj] = kActionDelta[a];
    Cell pos = from;
    bool ok = true;
    for (int s = 0; s < speed && ok; ++s) {
      pos.i += di;
      pos.j += dj;
      if (!map.navigable(pos)) {
        ok = false;
        break;
      }
      int id = map.idx(pos);
      if (reserved.contains(id)) {
        ok = false;
        break;
      }
      for (int m = 0; m < state.num_agents(); ++m)
        if (m != agent && state.positions[m] == pos) {
          ok = false;
          break;
        }
    }
    mask.legal[a] = ok;
  }
  return mask;
}

StepResult apply_actions(EpisodeState& state, const std::vector<std::optional<Action>>& actions,
                         Rng& rng) {
  if (state.step >= state.horizon) throw EpisodeOverError("episode horizon reached");
  if (static_cast<int>(actions.size()) != state.num_agents())
    throw IllegalActionError("actions size does not match fleet size");

  const GridMap& map = *state.map;

  // Validate by replaying the sequential reservation protocol, then move.
  Reservations reserved;
  std::vector<Cell> next = state.positions;
  for (int n = 0; n < state.num_agents(); ++n) {
    ActionMask mask = legal_actions(state, n, reserved);
    if (!actions[n].has_value()) {
      if (mask.any())
        throw IllegalActionError("agent " + std::to_string(n) + " held while moves were legal");
      reserved.add(map.idx(state.positions[n]));
      continue;
    }
    Action a = *actions[n];
    if (!mask[a])
      throw IllegalActionError("agent " + std::to_string(n) + " chose illegal move " +
                               action_name(a));
    Cell pos = state.positions[n];
    auto [di, dj] = kActionDelta[static_cast<int>(a)];
    for (int s = 0; s < state.specs[n].speed; ++s) {
      pos.i += di;
      pos.j += dj;
      reserved.add(map.idx(pos));
    }
    next[n] = pos;
  }
  state.positions = next;

  StepResult result;
  result.agents.assign(state.num_agents(), {});

  // Collection at the destination cell, before the field drifts.
  std::vector<std::pair<int, int>> cleaner_cells;  // (cell idx, agent)
  for (int n = 0; n < state.num_agents(); ++n)
    if (state.specs[n].can_clean) cleaner_cells.emplace_back(map.idx(state.positions[n]), n);
  if (!cleaner_cells.empty() && !state.trash.items.empty()) {
    auto& items = state.trash.items;
    size_t kept = 0;
    for (size_t k = 0; k < items.size(); ++k) {
      int id = map.idx(cell_of(items[k]));
      int taken_by = -1;
      for (auto [cid, agent] : cleaner_cells)
        if (cid == id) {
          taken_by = agent;
          break;
        }
      if (taken_by >= 0) {
        result.agents[taken_by].collected += 1;
      } else {
        items[kept++] = items[k];
      }
    }
    items.resize(kept);
  }
  for (const AgentOutcome& out : result.agents) result.collected += out.collected;
  state.collected_total += result.collected;

  step_trash(state.trash, map, rng);
  bin_items(state.trash, map, state.truth);
  sense(state, &result);
  fill_distances(state, result);

  state.step += 1;
  return result;
}

}  // namespace asv
