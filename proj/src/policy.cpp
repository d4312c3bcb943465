#include "asv/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asv {

namespace {

bool is_cardinal(Action a) { return static_cast<int>(a) % 2 == 0; }

Action reverse(Action a) { return static_cast<Action>((static_cast<int>(a) + 4) % kNumActions); }

// One of the two cardinals perpendicular to a cardinal heading.
Action random_lane(Action primary, Rng& rng) {
  int p = static_cast<int>(primary);
  int lane = (p + (rng.uniform_int(2) ? 2 : 6)) % kNumActions;
  return static_cast<Action>(lane);
}

Action random_cardinal(Rng& rng) { return static_cast<Action>(2 * rng.uniform_int(4)); }

int count_new_coverage(const EpisodeState& state, int agent, Cell at) {
  const GridMap& map = *state.map;
  int count = 0;
  for (auto [di, dj] : state.disks[agent]) {
    int i = at.i + di, j = at.j + dj;
    if (map.navigable(i, j) && !state.coverage[map.idx(i, j)]) ++count;
  }
  return count;
}

}  // namespace

Action RandomWalker::act(const ActContext& ctx, Rng& rng) {
  int pick = rng.uniform_int(ctx.mask.count());
  for (int a = 0; a < kNumActions; ++a)
    if (ctx.mask.legal[a] && pick-- == 0) return static_cast<Action>(a);
  return Action::N;  // unreachable: act requires a nonempty mask
}

void LawnMower::episode_start(const EpisodeState& state, Rng& rng) {
  sweeps_.assign(state.num_agents(), {});
  for (auto& s : sweeps_) {
    s.primary = random_cardinal(rng);
    s.lane = random_lane(s.primary, rng);
  }
}

Action LawnMower::act(const ActContext& ctx, Rng& rng) {
  Sweep& s = sweeps_[ctx.agent];
  if (ctx.mask[s.primary]) return s.primary;
  if (ctx.mask[s.lane]) {
    s.primary = reverse(s.primary);
    return s.lane;
  }
  // boxed in: take any legal move and restart the sweep pattern
  int pick = rng.uniform_int(ctx.mask.count());
  Action chosen = Action::N;
  for (int a = 0; a < kNumActions; ++a)
    if (ctx.mask.legal[a] && pick-- == 0) {
      chosen = static_cast<Action>(a);
      break;
    }
  s.primary = is_cardinal(chosen) ? chosen : random_cardinal(rng);
  s.lane = random_lane(s.primary, rng);
  return chosen;
}

Action Greedy::act(const ActContext& ctx, Rng&) {
  const EpisodeState& st = ctx.state;
  const GridMap& map = *st.map;
  Cell from = st.positions[ctx.agent];
  int speed = st.specs[ctx.agent].speed;

  std::vector<Cell> targets;
  for (int i = 0; i < map.height; ++i)
    for (int j = 0; j < map.width; ++j)
      if (st.model[map.idx(i, j)] > 0) targets.push_back({i, j});

  Action best = Action::N;
  if (!targets.empty()) {
    double best_d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < kNumActions; ++a) {
      if (!ctx.mask.legal[a]) continue;
      Cell end = move_endpoint(from, static_cast<Action>(a), speed);
      double d = std::numeric_limits<double>::infinity();
      for (Cell t : targets) d = std::min(d, cell_dist(end, t));
      if (d < best_d) {
        best_d = d;
        best = static_cast<Action>(a);
      }
    }
  } else {
    int best_c = -1;
    for (int a = 0; a < kNumActions; ++a) {
      if (!ctx.mask.legal[a]) continue;
      Cell end = move_endpoint(from, static_cast<Action>(a), speed);
      int c = count_new_coverage(st, ctx.agent, end);
      if (c > best_c) {
        best_c = c;
        best = static_cast<Action>(a);
      }
    }
  }
  return best;
}

void Pso::episode_start(const EpisodeState& state, Rng&) {
  int n = state.num_agents();
  velocity_.assign(n, {});
  pbest_value_.assign(n, 0.0);
  pbest_.assign(n, {});
  last_seen_.assign(state.map->size(), -1);
}

void Pso::step_begin(const EpisodeState& state) {
  const GridMap& map = *state.map;

  for (int n = 0; n < state.num_agents(); ++n) {
    Cell p = state.positions[n];
    for (auto [di, dj] : state.disks[n]) {
      int i = p.i + di, j = p.j + dj;
      if (!map.navigable(i, j)) continue;
      int id = map.idx(i, j);
      last_seen_[id] = state.step;
      if (state.model[id] > pbest_value_[n]) {
        pbest_value_[n] = state.model[id];
        pbest_[n] = {cell_cx({i, j}), cell_cy({i, j})};
      }
    }
  }

  int best_id = -1, best_v = 0;
  for (int id = 0; id < map.size(); ++id)
    if (state.model[id] > best_v) {
      best_v = state.model[id];
      best_id = id;
    }
  if (best_id >= 0) {
    Cell c{best_id / map.width, best_id % map.width};
    gbest_ = {cell_cx(c), cell_cy(c)};
    return;
  }

  // empty belief: steer toward the stalest part of the map
  int oldest = std::numeric_limits<int>::max();
  for (int i = 0; i < map.height; ++i)
    for (int j = 0; j < map.width; ++j)
      if (map.nav[map.idx(i, j)]) oldest = std::min(oldest, last_seen_[map.idx(i, j)]);
  double sx = 0, sy = 0;
  int count = 0;
  for (int i = 0; i < map.height; ++i)
    for (int j = 0; j < map.width; ++j) {
      int id = map.idx(i, j);
      if (map.nav[id] && last_seen_[id] == oldest) {
        sx += cell_cx({i, j});
        sy += cell_cy({i, j});
        ++count;
      }
    }
  gbest_ = {sx / count, sy / count};
}

Action Pso::act(const ActContext& ctx, Rng& rng) {
  int n = ctx.agent;
  Cell from = ctx.state.positions[n];
  Vec2 p{cell_cx(from), cell_cy(from)};
  Vec2 pb = pbest_value_[n] > 0 ? pbest_[n] : gbest_;

  double r1 = rng.uniform(), r2 = rng.uniform();
  Vec2& v = velocity_[n];
  v.x = params_.omega * v.x + params_.c1 * r1 * (pb.x - p.x) + params_.c2 * r2 * (gbest_.x - p.x);
  v.y = params_.omega * v.y + params_.c1 * r1 * (pb.y - p.y) + params_.c2 * r2 * (gbest_.y - p.y);

  double mag = std::hypot(v.x, v.y);
  int speed = ctx.state.specs[n].speed;
  Action best = Action::N;
  if (mag < 1e-9) {
    double best_d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < kNumActions; ++a) {
      if (!ctx.mask.legal[a]) continue;
      auto [di, dj] = kActionDelta[a];
      double d = std::hypot(static_cast<double>(di * speed), static_cast<double>(dj * speed));
      if (d < best_d) {
        best_d = d;
        best = static_cast<Action>(a);
      }
    }
    return best;
  }

  double best_cos = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    if (!ctx.mask.legal[a]) continue;
    auto [di, dj] = kActionDelta[a];
    double dx = dj * speed, dy = di * speed;
    double cos = (dx * v.x + dy * v.y) / (std::hypot(dx, dy) * mag);
    if (cos > best_cos) {
      best_cos = cos;
      best = static_cast<Action>(a);
    }
  }
  return best;
}

std::unique_ptr<Policy> make_baseline(const std::string& name) {
  if (name == "random") return std::make_unique<RandomWalker>();
  if (name == "lawnmower") return std::make_unique<LawnMower>();
  if (name == "greedy") return std::make_unique<Greedy>();
  if (name == "pso") return std::make_unique<Pso>();
  return nullptr;
}

}  // namespace asv
