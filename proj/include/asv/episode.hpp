#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "asv/grid.hpp"
#include "asv/rng.hpp"
#include "asv/trash.hpp"

namespace asv {

struct IllegalActionError : SimError {
  using SimError::SimError;
};
struct EpisodeOverError : SimError {
  using SimError::SimError;
};
struct FleetTooLargeError : SimError {
  using SimError::SimError;
};

// The eight compass moves, indexed clockwise from north.  Indices are part of
// the persistence format and must stay stable.
enum class Action : int { N = 0, NE, E, SE, S, SW, W, NW };

constexpr int kNumActions = 8;

// (di, dj) per action; row index grows southward.
constexpr std::array<std::pair<int, int>, kNumActions> kActionDelta{{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

const char* action_name(Action a);

struct ActionMask {
  std::array<bool, kNumActions> legal{};

  bool any() const {
    for (bool b : legal)
      if (b) return true;
    return false;
  }
  int count() const {
    int n = 0;
    for (bool b : legal) n += b;
    return n;
  }
  bool operator[](Action a) const { return legal[static_cast<int>(a)]; }
  uint8_t bits() const {
    uint8_t b = 0;
    for (int k = 0; k < kNumActions; ++k)
      if (legal[k]) b |= static_cast<uint8_t>(1u << k);
    return b;
  }
  static ActionMask from_bits(uint8_t b) {
    ActionMask m;
    for (int k = 0; k < kNumActions; ++k) m.legal[k] = (b >> k) & 1u;
    return m;
  }
};

enum class AgentKind { Scout, Cleaner };

struct AgentSpec {
  AgentKind kind = AgentKind::Scout;
  int speed = 2;             // nodes per step
  double sense_radius = 6.0; // cells, strict Euclidean bound
  bool can_clean = false;

  static AgentSpec scout() { return {AgentKind::Scout, 2, 6.0, false}; }
  static AgentSpec cleaner() { return {AgentKind::Cleaner, 1, 1.0, true}; }
};

// Scouts first, then cleaners; this listing order is also the collision
// resolution order within a step.
struct FleetConfig {
  int scouts = 2;
  int cleaners = 2;

  int size() const { return scouts + cleaners; }
  std::vector<AgentSpec> specs() const;
};

struct WorldParams {
  TrashParams trash;
  int horizon = 150;
};

// Per-agent bookkeeping from one step, consumed by the reward functions.
struct AgentOutcome {
  int collected = 0;               // items removed by this agent
  double covered_credit = 0.0;     // newly covered cells, 1/eta split over coverers
  double model_delta = 0.0;        // sum over own disk of (model change)/eta
  std::optional<double> dist_known;// distance to nearest model-positive cell, if any
};

struct StepResult {
  std::vector<AgentOutcome> agents;
  int newly_covered = 0;
  int collected = 0;
};

struct EpisodeState {
  const GridMap* map = nullptr;
  std::vector<Cell> positions;
  std::vector<AgentSpec> specs;
  TrashField trash;
  std::vector<int> truth;      // per-cell item counts, rebinned every step
  std::vector<int> model;      // last-seen counts inside sensing disks
  std::vector<uint8_t> coverage;
  int step = 0;
  int horizon = 150;
  int initial_count = 0;
  int collected_total = 0;

  // per-agent sensing disk offsets, fixed at reset
  std::vector<std::vector<std::pair<int, int>>> disks;

  // scratch reused by apply_actions; not part of the logical state
  struct Scratch {
    std::vector<uint8_t> in_disk;
    std::vector<int> delta;
    std::vector<uint8_t> was_uncovered;
    std::vector<int> eta;
    std::vector<int> touched;
  } scratch;

  int num_agents() const { return static_cast<int>(positions.size()); }
  bool done() const { return step >= horizon; }
  int remaining_items() const { return static_cast<int>(trash.items.size()); }
};

// Cells claimed by moves already committed this step (full paths, including
// held positions).  Small enough that linear scans win.
struct Reservations {
  std::vector<int> cells;
  bool contains(int idx) const {
    for (int c : cells)
      if (c == idx) return true;
    return false;
  }
  void add(int idx) { cells.push_back(idx); }
};

// Places the fleet uniformly over distinct deploy cells, spawns trash, samples
// the episode wind, and runs the initial sensing pass.
EpisodeState reset_episode(const GridMap& map, const FleetConfig& fleet, const WorldParams& params,
                           Rng& rng);

// Mask of moves whose full path (speed cells in the chosen direction) stays
// navigable, avoids every agent's current position, and avoids `reserved`.
ActionMask legal_actions(const EpisodeState& state, int agent,
                         const Reservations& reserved = {});

// Advances one step: move, collect, drift, rebin, sense.  `actions[n]` must be
// legal under sequential reservation in agent order; nullopt means hold and is
// only legal for a fully blocked agent.
StepResult apply_actions(EpisodeState& state, const std::vector<std::optional<Action>>& actions,
                         Rng& rng);

// Endpoint of a move, ignoring legality.
Cell move_endpoint(Cell from, Action a, int speed);

// Runs the sequential choose-and-reserve protocol over all agents, then
// applies the step.  `choose(agent, mask)` is only called when the mask has at
// least one legal action; blocked agents hold.
template <typename Chooser>
std::pair<std::vector<std::optional<Action>>, StepResult> run_fleet_step(EpisodeState& state,
                                                                         Chooser&& choose,
                                                                         Rng& rng) {
  std::vector<std::optional<Action>> actions(state.num_agents());
  Reservations reserved;
  for (int n = 0; n < state.num_agents(); ++n) {
    ActionMask mask = legal_actions(state, n, reserved);
    if (!mask.any()) {
      actions[n] = std::nullopt;
      reserved.add(state.map->idx(state.positions[n]));
      continue;
    }
    Action a = choose(n, mask);
    actions[n] = a;
    Cell pos = state.positions[n];
    auto [di, dj] = kActionDelta[static_cast<int>(a)];
    for (int s = 0; s < state.specs[n].speed; ++s) {
      pos.i += di;
      pos.j += dj;
      reserved.add(state.map->idx(pos));
    }
  }
  StepResult result = apply_actions(state, actions, rng);
  return {std::move(actions), std::move(result)};
}

}  // namespace asv
