#include "asv/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "asv/svg_plot.hpp"

namespace asv {

EvalEpisode run_episode(const GridMap& map, const FleetConfig& fleet, const WorldParams& world,
                        Policy& policy, uint64_t master_seed, uint64_t index,
                        const char* env_stream, const char* pol_stream, bool time_decisions,
                        const RunHooks* hooks) {
  Rng env_rng = Rng::stream(master_seed, env_stream, index);
  Rng pol_rng = Rng::stream(master_seed, pol_stream, index);

  EpisodeState state = reset_episode(map, fleet, world, env_rng);
  PerceptionState per = make_perception(state);
  policy.episode_start(state, pol_rng);
  if (hooks && hooks->on_reset) hooks->on_reset(state, per);

  EvalEpisode ep;
  ep.index = index;
  ep.initial_count = state.initial_count;

  double selection_ns = 0.0;
  int steps = 0;
  while (!state.done()) {
    auto t0 = std::chrono::steady_clock::now();
    policy.step_begin(state);

    // sequential choose-and-reserve, timed as one block per step
    std::vector<std::optional<Action>> actions(state.num_agents());
    Reservations reserved;
    for (int n = 0; n < state.num_agents(); ++n) {
      ActionMask mask = legal_actions(state, n, reserved);
      if (!mask.any()) {
        reserved.add(map.idx(state.positions[n]));
        continue;
      }
      Action a = policy.act({state, &per, n, mask}, pol_rng);
      actions[n] = a;
      Cell pos = state.positions[n];
      auto [di, dj] = kActionDelta[static_cast<int>(a)];
      for (int s = 0; s < state.specs[n].speed; ++s) {
        pos.i += di;
        pos.j += dj;
        reserved.add(map.idx(pos));
      }
    }
    if (time_decisions) {
      auto t1 = std::chrono::steady_clock::now();
      selection_ns += std::chrono::duration<double, std::nano>(t1 - t0).count();
    }

    StepResult result = apply_actions(state, actions, env_rng);
    update_perception(per, state);
    policy.step_end(state, result);

    ep.collections.push_back(result.collected);
    ep.mse.push_back(gaussian_mse(state.truth, state.model, map.height, map.width));
    if (hooks && hooks->on_step) hooks->on_step(state, actions, result, per);
    ++steps;
  }

  ep.collected = state.collected_total;
  ep.ptc = ptc_trace(ep.collections, ep.initial_count);
  ep.decision_ms = steps > 0 && time_decisions ? selection_ns / steps / 1e6 : 0.0;
  return ep;
}

namespace {

PolicyResult reduce(const std::string& name, const std::string& scenario,
                    std::vector<EvalEpisode> episodes, bool strict) {
  PolicyResult r;
  r.policy = name;
  r.scenario = scenario;
  std::vector<double> ptcs, mses, ms;
  for (auto& e : episodes) {
    if (strict) e.decision_ms = 0.0;
    ptcs.push_back(e.ptc.empty() ? 0.0 : e.ptc.back());
    mses.push_back(e.mse.empty() ? 0.0 : e.mse.back());
    ms.push_back(e.decision_ms);
  }
  r.mean_ptc = mean(ptcs);
  r.ci_ptc = ci95(ptcs);
  r.mean_mse = mean(mses);
  r.ci_mse = ci95(mses);
  r.mean_ms = mean(ms);
  r.episodes = std::move(episodes);
  return r;
}

void write_traces_json(const std::string& path, const PolicyResult& r) {
  nlohmann::json j;
  j["policy"] = r.policy;
  j["scenario"] = r.scenario;
  auto& eps = j["episodes"] = nlohmann::json::array();
  for (const auto& e : r.episodes) {
    eps.push_back({{"index", e.index},
                   {"initial_count", e.initial_count},
                   {"collected", e.collected},
                   {"ptc", e.ptc},
                   {"mse", e.mse},
                   {"decision_ms", e.decision_ms}});
  }
  std::ofstream os(path);
  os << j.dump(1, '\t') << "\n";
}

PlotSeries band_series(const PolicyResult& r, bool use_mse, const std::string& color) {
  PlotSeries s;
  s.label = r.policy;
  s.color = color;
  if (r.episodes.empty()) return s;
  size_t steps = use_mse ? r.episodes[0].mse.size() : r.episodes[0].ptc.size();
  for (size_t t = 0; t < steps; ++t) {
    std::vector<double> xs;
    xs.reserve(r.episodes.size());
    for (const auto& e : r.episodes) xs.push_back(use_mse ? e.mse[t] : e.ptc[t]);
    double m = mean(xs), c = ci95(xs);
    s.mean.push_back(m);
    s.lo.push_back(m - c);
    s.hi.push_back(m + c);
  }
  return s;
}

}  // namespace

void write_report_csv(const std::string& path, const std::vector<PolicyResult>& results) {
  std::ofstream os(path);
  os << "policy,scenario,episodes,mean_ptc,ci95_ptc,mean_final_mse,ci95_final_mse,mean_decision_ms\n";
  char buf[256];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.policy.c_str(),
                  r.scenario.c_str(), r.episodes.size(), r.mean_ptc, r.ci_ptc, r.mean_mse,
                  r.ci_mse, r.mean_ms);
    os << buf;
  }
}

std::vector<PolicyResult> run_benchmark(const GridMap& map,
                                        const std::vector<BenchmarkEntry>& policies,
                                        int episodes, const FleetConfig& fleet,
                                        const WorldParams& world, uint64_t master_seed,
                                        int jobs, bool strict, const std::string& out_dir) {
  std::vector<PolicyResult> results;
  for (const auto& entry : policies) {
    std::vector<EvalEpisode> eps(episodes);
    if (jobs <= 1) {
      auto policy = entry.make();
      for (int i = 0; i < episodes; ++i)
        eps[i] = run_episode(map, fleet, world, *policy, master_seed, i, "eval-episode",
                             "eval-policy", !strict);
    } else {
      std::atomic<int> next{0};
      auto worker = [&] {
        auto policy = entry.make();
        for (int i = next.fetch_add(1); i < episodes; i = next.fetch_add(1))
          eps[i] = run_episode(map, fleet, world, *policy, master_seed, i, "eval-episode",
                               "eval-policy", !strict);
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    results.push_back(reduce(entry.name, map.name, std::move(eps), strict));
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_report_csv(out_dir + "/report.csv", results);
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::vector<PlotSeries> ptc_series, mse_series;
    for (size_t k = 0; k < results.size(); ++k) {
      write_traces_json(out_dir + "/traces_" + results[k].policy + ".json", results[k]);
      ptc_series.push_back(band_series(results[k], false, kColors[k % 6]));
      mse_series.push_back(band_series(results[k], true, kColors[k % 6]));
    }
    write_series_plot(out_dir + "/ptc_" + map.name + ".svg", "Trash cleaned, " + map.name,
                      "step", "PTC (%)", ptc_series);
    write_series_plot(out_dir + "/mse_" + map.name + ".svg", "Model error, " + map.name, "step",
                      "MSE", mse_series);
  }
  return results;
}

}  // namespace asv
