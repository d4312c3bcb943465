#include "asv/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "asv/metrics.hpp"

namespace asv {

namespace {

constexpr char kMagic[8] = {'A', 'S', 'V', 'Q', 'N', 'E', 'T', '1'};

void put_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<char*>(&v), 8); }
void put_i64(std::ostream& os, int64_t v) { os.write(reinterpret_cast<char*>(&v), 8); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<char*>(&v), 8); }

uint64_t get_u64(std::istream& is) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
int64_t get_i64(std::istream& is) {
  int64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

void put_string(std::ostream& os, const std::string& s) {
  put_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string get_string(std::istream& is) {
  size_t n = get_u64(is);
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

void put_net(std::ostream& os, nn::QNetwork<float>& net, bool with_moments) {
  put_i64(os, with_moments ? net.adam_t : 0);
  net.for_each_param([&](nn::Param<float>& p) {
    os.write(reinterpret_cast<const char*>(p.w.data()),
             static_cast<std::streamsize>(p.w.size() * sizeof(float)));
    if (with_moments) {
      os.write(reinterpret_cast<const char*>(p.m.data()),
               static_cast<std::streamsize>(p.m.size() * sizeof(float)));
      os.write(reinterpret_cast<const char*>(p.v.data()),
               static_cast<std::streamsize>(p.v.size() * sizeof(float)));
    }
  });
}

void get_net(std::istream& is, nn::QNetwork<float>& net, bool with_moments) {
  net.adam_t = get_i64(is);
  net.for_each_param([&](nn::Param<float>& p) {
    is.read(reinterpret_cast<char*>(p.w.data()),
            static_cast<std::streamsize>(p.w.size() * sizeof(float)));
    if (with_moments) {
      is.read(reinterpret_cast<char*>(p.m.data()),
              static_cast<std::streamsize>(p.m.size() * sizeof(float)));
      is.read(reinterpret_cast<char*>(p.v.data()),
              static_cast<std::streamsize>(p.v.size() * sizeof(float)));
    }
  });
}

}  // namespace

void write_checkpoint(const std::string& path, CheckpointData& d) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CheckpointError("cannot open " + path + " for writing");
  os.write(kMagic, 8);
  const nn::NetConfig& c = d.scout_online.cfg;
  for (int v : {c.height, c.width, c.in_ch, c.conv1, c.conv2, c.conv3, c.fc1, c.fc2, c.fc3})
    put_i64(os, v);
  put_net(os, d.scout_online, true);
  put_net(os, d.scout_target, false);
  put_net(os, d.cleaner_online, true);
  put_net(os, d.cleaner_target, false);
  put_u64(os, d.episode);
  put_i64(os, d.grad_steps[0]);
  put_i64(os, d.grad_steps[1]);
  put_string(os, d.replay_rng[0]);
  put_string(os, d.replay_rng[1]);
  put_f64(os, d.best_ptc);
  if (!os) throw CheckpointError("short write to " + path);
}

CheckpointData read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw CheckpointError(path + " is not a checkpoint file");
  nn::NetConfig c;
  c.height = static_cast<int>(get_i64(is));
  c.width = static_cast<int>(get_i64(is));
  c.in_ch = static_cast<int>(get_i64(is));
  c.conv1 = static_cast<int>(get_i64(is));
  c.conv2 = static_cast<int>(get_i64(is));
  c.conv3 = static_cast<int>(get_i64(is));
  c.fc1 = static_cast<int>(get_i64(is));
  c.fc2 = static_cast<int>(get_i64(is));
  c.fc3 = static_cast<int>(get_i64(is));

  CheckpointData d;
  Rng scratch(0);
  d.scout_online.init(c, scratch);
  d.scout_target.init(c, scratch);
  d.cleaner_online.init(c, scratch);
  d.cleaner_target.init(c, scratch);
  get_net(is, d.scout_online, true);
  get_net(is, d.scout_target, false);
  get_net(is, d.cleaner_online, true);
  get_net(is, d.cleaner_target, false);
  d.episode = get_u64(is);
  d.grad_steps[0] = get_i64(is);
  d.grad_steps[1] = get_i64(is);
  d.replay_rng[0] = get_string(is);
  d.replay_rng[1] = get_string(is);
  d.best_ptc = get_f64(is);
  if (!is) throw CheckpointError(path + " is truncated");
  return d;
}

DrlPolicy::DrlPolicy(const nn::QNetwork<float>& scout, const nn::QNetwork<float>& cleaner,
                     std::string name)
    : scout_(scout), cleaner_(cleaner), name_(std::move(name)) {}

Action DrlPolicy::act(const ActContext& ctx, Rng&) {
  Observation obs = observe(ctx.state, *ctx.perception, ctx.agent);
  nn::Mat<float> x(obs.data.size(), 1);
  std::memcpy(x.data(), obs.data.data(), obs.data.size() * sizeof(float));
  nn::QNetwork<float>& net = ctx.state.specs[ctx.agent].can_clean ? cleaner_ : scout_;
  nn::Mat<float> q = net.forward(x, false);
  return static_cast<Action>(nn::masked_argmax(q, 0, ctx.mask));
}

Trainer::Trainer(const GridMap& map, FleetConfig fleet, WorldParams world,
                 RewardWeights rewards, TrainerConfig cfg, std::string out_dir)
    : map_(map),
      fleet_(fleet),
      world_(world),
      rewards_(rewards),
      cfg_(cfg),
      out_(std::move(out_dir)),
      obs_floats_(static_cast<size_t>(kObsChannels) * map.size()),
      replay_rng_{Rng::stream(cfg.seed, "replay", 0), Rng::stream(cfg.seed, "replay", 1)} {
  cfg_.net.height = map.height;
  cfg_.net.width = map.width;
  cfg_.net.in_ch = kObsChannels;
  adam_.lr = cfg_.lr;

  Rng init_s = Rng::stream(cfg_.seed, "init", 0);
  Rng init_c = Rng::stream(cfg_.seed, "init", 1);
  scout_online_.init(cfg_.net, init_s);
  cleaner_online_.init(cfg_.net, init_c);
  Rng dummy(0);
  scout_target_.init(cfg_.net, dummy);
  cleaner_target_.init(cfg_.net, dummy);
  scout_target_.copy_weights_from(scout_online_);
  cleaner_target_.copy_weights_from(cleaner_online_);

  for (int team = 0; team < 2; ++team)
    buf_[team] = std::make_unique<PrioritizedReplay>(cfg_.capacity, obs_floats_, cfg_.per_alpha,
                                                     cfg_.per_eps);
  std::filesystem::create_directories(out_);
  log_path_ = out_ + "/training_log.csv";
}

int Trainer::team_of(int agent) const { return fleet_.specs()[agent].can_clean ? 1 : 0; }

size_t Trainer::prefill_target() const {
  return static_cast<size_t>(std::llround(cfg_.prefill * static_cast<double>(cfg_.capacity)));
}

Action Trainer::behavior_action(nn::QNetwork<float>& net, const float* obs,
                                const ActContext& ctx, double eps, bool mix, Greedy& greedy,
                                Rng& rng) {
  if (rng.uniform() >= eps) {
    nn::Mat<float> x(static_cast<long>(6) * ctx.state.map->size(), 1);
    std::memcpy(x.data(), obs, sizeof(float) * x.rows());
    nn::Mat<float> q = net.forward(x, false);
    return static_cast<Action>(nn::masked_argmax(q, 0, ctx.mask));
  }
  if (mix && rng.uniform_int(2) == 0) return greedy.act(ctx, rng);
  int pick = rng.uniform_int(ctx.mask.count());
  for (int a = 0; a < kNumActions; ++a)
    if (ctx.mask.legal[a] && pick-- == 0) return static_cast<Action>(a);
  return Action::N;  // unreachable
}

EpisodeSummary Trainer::run_episode(const char* env_stream, const char* pol_stream,
                                    uint64_t index, Mode mode, double eps, double beta) {
  Rng env_rng = Rng::stream(cfg_.seed, env_stream, index);
  Rng pol_rng = Rng::stream(cfg_.seed, pol_stream, index);

  EpisodeState state = reset_episode(map_, fleet_, world_, env_rng);
  PerceptionState per = make_perception(state);
  int agents = state.num_agents();

  std::vector<std::vector<float>> obs_cur(agents), obs_next(agents);
  for (int n = 0; n < agents; ++n) obs_cur[n] = observe(state, per, n).data;

  EpisodeSummary sum;
  sum.initial_count = state.initial_count;
  size_t target = prefill_target();

  while (!state.done()) {
    auto chooser = [&](int n, ActionMask mask) {
      ActContext ctx{state, &per, n, mask};
      switch (mode) {
        case Mode::Prefill:
          return greedy_.act(ctx, pol_rng);
        case Mode::Eval: {
          nn::QNetwork<float>& net = team_of(n) == 1 ? cleaner_online_ : scout_online_;
          return behavior_action(net, obs_cur[n].data(), ctx, 0.0, false, greedy_, pol_rng);
        }
        case Mode::Train: {
          nn::QNetwork<float>& net = team_of(n) == 1 ? cleaner_online_ : scout_online_;
          return behavior_action(net, obs_cur[n].data(), ctx, eps, cfg_.greedy_mix, greedy_,
                                 pol_rng);
        }
      }
      return Action::N;
    };
    auto [actions, result] = run_fleet_step(state, chooser, env_rng);
    update_perception(per, state);
    sum.collected += result.collected;

    if (mode != Mode::Eval) {
      for (int n = 0; n < agents; ++n) obs_next[n] = observe(state, per, n).data;
      bool done = state.done();
      for (int n = 0; n < agents; ++n) {
        if (!actions[n]) continue;  // fully blocked agents took no action
        int team = team_of(n);
        if (mode == Mode::Prefill && buf_[team]->size() >= target) continue;
        RewardBreakdown rb =
            agent_reward(state.specs[n], result.agents[n], rewards_, map_.diagonal());
        uint8_t next_bits = legal_actions(state, n).bits();
        buf_[team]->push(obs_cur[n].data(), static_cast<uint8_t>(*actions[n]),
                         static_cast<float>(rb.total), obs_next[n].data(), next_bits, done);
      }
      obs_cur.swap(obs_next);
    } else if (!state.done()) {
      for (int n = 0; n < agents; ++n) obs_cur[n] = observe(state, per, n).data;
    }

    if (mode == Mode::Train) {
      ++fleet_steps_;
      if (fleet_steps_ % cfg_.train_every == 0) {
        size_t gate = static_cast<size_t>(cfg_.min_fill_batches) * cfg_.batch;
        for (int team = 0; team < 2; ++team) {
          if (buf_[team]->size() < std::max<size_t>(gate, cfg_.batch)) continue;
          sum.loss_sum[team] += train_step(team, beta);
          sum.loss_steps[team] += 1;
        }
      }
    }
  }
  sum.final_mse = gaussian_mse(state.truth, state.model, map_.height, map_.width);
  return sum;
}

double Trainer::train_step(int team, double beta) {
  PrioritizedReplay& buf = *buf_[team];
  if (buf.size() < static_cast<size_t>(cfg_.batch))
    throw BufferUnderfilled("train_step before buffer reached one batch");
  nn::QNetwork<float>& online = team == 1 ? cleaner_online_ : scout_online_;
  nn::QNetwork<float>& target = team == 1 ? cleaner_target_ : scout_target_;

  int batch = cfg_.batch;
  buf.sample(batch, beta, replay_rng_[team], idx_, w_);

  long rows = static_cast<long>(obs_floats_);
  x_.resize(rows, batch);
  xn_.resize(rows, batch);
  for (int b = 0; b < batch; ++b) {
    buf.decode_obs(idx_[b], x_.col(b).data());
    buf.decode_next_obs(idx_[b], xn_.col(b).data());
  }

  nn::Mat<float> q_next = online.forward(xn_, false);
  nn::Mat<float> q_next_target = target.forward(xn_, false);

  std::vector<float> y(batch);
  for (int b = 0; b < batch; ++b) {
    ActionMask mask = buf.next_mask(idx_[b]);
    auto [t, chosen] = nn::double_q_target(nn::masked_q(q_next, b, mask),
                                           nn::masked_q(q_next_target, b, mask), mask,
                                           buf.reward(idx_[b]), buf.done(idx_[b]),
                                           static_cast<float>(cfg_.gamma));
    // the evaluated successor action must be the online argmax
    if (chosen >= 0 && chosen != nn::masked_argmax(q_next, b, mask))
      throw SimError("double-Q selection drifted from the online argmax");
    y[b] = t;
  }

  nn::Mat<float> q = online.forward(x_, true);
  nn::Mat<float> dq = nn::Mat<float>::Zero(kNumActions, batch);
  td_.resize(batch);
  double loss = 0.0;
  for (int b = 0; b < batch; ++b) {
    int a = buf.action(idx_[b]);
    float td = q(a, b) - y[b];
    td_[b] = std::fabs(td);
    double w = w_[b];
    loss += w * static_cast<double>(td) * td;
    dq(a, b) = static_cast<float>(2.0 * w * td / batch);
  }
  loss /= batch;

  online.zero_grad();
  online.backward(dq);
  online.adam_step(adam_);
  buf.update_priorities(idx_, td_);

  ++grad_steps_[team];
  if (grad_steps_[team] % cfg_.target_sync == 0) target.copy_weights_from(online);
  return loss;
}

void Trainer::prefill() {
  size_t target = prefill_target();
  if (target == 0) return;
  uint64_t k = 0;
  while (buf_[0]->size() < target || buf_[1]->size() < target)
    run_episode("prefill", "prefill-policy", k++, Mode::Prefill, 0.0, 0.0);
}

std::pair<double, double> Trainer::evaluate_heldout(int episodes) {
  std::vector<double> ptcs, mses;
  for (int j = 0; j < episodes; ++j) {
    EpisodeSummary s = run_episode("heldout", "heldout-policy", j, Mode::Eval, 0.0, 0.0);
    ptcs.push_back(100.0 * s.collected / std::max(1, s.initial_count));
    mses.push_back(s.final_mse);
  }
  return {mean(ptcs), mean(mses)};
}

void Trainer::write_log_row(int episode, const EpisodeSummary& s, double eps,
                            std::optional<std::pair<double, double>> eval) {
  std::ofstream os(log_path_, log_started_ ? std::ios::app : std::ios::trunc);
  if (!log_started_) {
    os << "episode,loss_scout,loss_cleaner,eval_ptc,eval_mse,eps\n";
    log_started_ = true;
  }
  char buf[256];
  double ls = s.loss_steps[0] ? s.loss_sum[0] / s.loss_steps[0] : 0.0;
  double lc = s.loss_steps[1] ? s.loss_sum[1] / s.loss_steps[1] : 0.0;
  if (eval)
    std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%.6g,%.6g,%.6g\n", episode, ls, lc,
                  eval->first, eval->second, eps);
  else
    std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,,,%.6g\n", episode, ls, lc, eps);
  os << buf;
}

void Trainer::save(const std::string& name) {
  CheckpointData d;
  d.scout_online = scout_online_;
  d.scout_target = scout_target_;
  d.cleaner_online = cleaner_online_;
  d.cleaner_target = cleaner_target_;
  d.episode = episode_;
  d.grad_steps = grad_steps_;
  d.replay_rng = {replay_rng_[0].serialize(), replay_rng_[1].serialize()};
  d.best_ptc = best_ptc_;
  write_checkpoint(out_ + "/" + name, d);
}

bool Trainer::resume_from(const std::string& path) {
  if (!std::filesystem::exists(path)) return false;
  CheckpointData d = read_checkpoint(path);
  if (!(d.scout_online.cfg == cfg_.net))
    throw CheckpointError("checkpoint network shape does not match this configuration");
  scout_online_ = d.scout_online;
  scout_target_ = d.scout_target;
  cleaner_online_ = d.cleaner_online;
  cleaner_target_ = d.cleaner_target;
  episode_ = d.episode;
  grad_steps_ = d.grad_steps;
  replay_rng_[0].deserialize(d.replay_rng[0]);
  replay_rng_[1].deserialize(d.replay_rng[1]);
  best_ptc_ = d.best_ptc;
  log_started_ = std::filesystem::exists(log_path_);
  return true;
}

void Trainer::train() {
  double eps_episodes = std::max(1.0, cfg_.eps_fraction * cfg_.episodes);
  int total = cfg_.episodes;

  if (total > 0 && buf_[0]->size() + buf_[1]->size() == 0) prefill();
  save("checkpoint_latest.bin");

  for (int i = static_cast<int>(episode_); i < total; ++i) {
    double t = std::min(1.0, i / eps_episodes);
    double eps = cfg_.eps_start + (cfg_.eps_end - cfg_.eps_start) * t;
    double bt = total > 1 ? static_cast<double>(i) / (total - 1) : 1.0;
    double beta = cfg_.per_beta_start + (cfg_.per_beta_end - cfg_.per_beta_start) * bt;

    EpisodeSummary s = run_episode("episode", "policy", i, Mode::Train, eps, beta);
    episode_ = i + 1;

    std::optional<std::pair<double, double>> eval;
    if ((i + 1) % cfg_.eval_every == 0 || i + 1 == total) {
      eval = evaluate_heldout(cfg_.eval_episodes);
      if (eval->first > best_ptc_) {
        best_ptc_ = eval->first;
        save("checkpoint_best.bin");
      }
      save("checkpoint_latest.bin");
    }
    write_log_row(i, s, eps, eval);
  }
  if (episode_ > 0 || total == 0) save("checkpoint_latest.bin");
}

}  // namespace asv
