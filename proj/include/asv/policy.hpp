#pragma once

#include <memory>
#include <string>
#include <vector>

#include "asv/episode.hpp"
#include "asv/perception.hpp"

namespace asv {

struct ActContext {
  const EpisodeState& state;
  const PerceptionState* perception = nullptr;  // baselines ignore this
  int agent = 0;
  ActionMask mask;
};

// Fleet-wide decision maker.  The runner calls, per step: step_begin once,
// act per agent in resolution order (only when the mask has a legal move),
// then step_end.  act must return an action legal under ctx.mask.
class Policy {
public:
  virtual ~Policy() = default;
  virtual void episode_start(const EpisodeState&, Rng&) {}
  virtual void step_begin(const EpisodeState&) {}
  virtual Action act(const ActContext& ctx, Rng& rng) = 0;
  virtual void step_end(const EpisodeState&, const StepResult&) {}
  virtual std::string name() const = 0;
};

class RandomWalker final : public Policy {
public:
  Action act(const ActContext& ctx, Rng& rng) override;
  std::string name() const override { return "random"; }
};

// Boustrophedon sweep: hold a primary cardinal heading until blocked, shift
// one lane sideways and reverse, reseed at random when boxed in.
class LawnMower final : public Policy {
public:
  void episode_start(const EpisodeState& state, Rng& rng) override;
  Action act(const ActContext& ctx, Rng& rng) override;
  std::string name() const override { return "lawnmower"; }

private:
  struct Sweep {
    Action primary = Action::E;
    Action lane = Action::S;
  };
  std::vector<Sweep> sweeps_;
};

// Chases the nearest believed trash cell; with an empty belief, maximizes the
// number of uncovered cells the move would bring into the sensing disk.
class Greedy final : public Policy {
public:
  Action act(const ActContext& ctx, Rng& rng) override;
  std::string name() const override { return "greedy"; }
};

struct PsoParams {
  double omega = 0.7;
  double c1 = 1.5;
  double c2 = 1.5;
};

// Particle-swarm steering over the belief: per-vehicle velocities pulled
// toward the best cell the vehicle has sensed and the best cell in the whole
// belief, projected onto the best-aligned legal move.
class Pso final : public Policy {
public:
  explicit Pso(PsoParams params = {}) : params_(params) {}
  void episode_start(const EpisodeState& state, Rng& rng) override;
  void step_begin(const EpisodeState& state) override;
  Action act(const ActContext& ctx, Rng& rng) override;
  std::string name() const override { return "pso"; }

private:
  PsoParams params_;
  std::vector<Vec2> velocity_;
  std::vector<double> pbest_value_;
  std::vector<Vec2> pbest_;
  std::vector<int> last_seen_;  // per cell, step of most recent disk visit
  int stamp_ = 0;
  Vec2 gbest_;
};

// nullptr when the name is not a baseline.
std::unique_ptr<Policy> make_baseline(const std::string& name);

}  // namespace asv
