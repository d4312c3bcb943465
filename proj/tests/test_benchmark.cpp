#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asv/benchmark.hpp"
#include "asv/episode_log.hpp"
#include "asv/rewards.hpp"
#include "helpers.hpp"

using namespace asv;
namespace fs = std::filesystem;

TEST_CASE("one seeded episode replays and obeys the trace identities") {
  GridMap m = load_map_file(test::asset("desk_open.map"));
  WorldParams world;
  RandomWalker p1, p2;
  EvalEpisode a = run_episode(m, {}, world, p1, 101, 3);
  EvalEpisode b = run_episode(m, {}, world, p2, 101, 3);

  CHECK(a.index == 3);
  CHECK(a.initial_count == b.initial_count);
  CHECK(a.collections == b.collections);
  CHECK(a.ptc == b.ptc);
  CHECK(a.mse == b.mse);
  REQUIRE(a.ptc.size() == size_t(world.horizon));

  // the percent trace is exactly the accumulated collection counts
  std::vector<double> want = ptc_trace(a.collections, a.initial_count);
  CHECK(a.ptc == want);
  CHECK(a.collected <= a.initial_count);
  CHECK(a.ptc.back() == doctest::Approx(100.0 * a.collected / a.initial_count));
  for (size_t t = 1; t < a.ptc.size(); ++t) CHECK(a.ptc[t] >= a.ptc[t - 1]);
  CHECK(a.decision_ms >= 0.0);

  EvalEpisode s = run_episode(m, {}, world, p1, 101, 3, "eval-episode", "eval-policy", false);
  CHECK(s.decision_ms == 0.0);
  CHECK(s.ptc == a.ptc);
}

TEST_CASE("hooks observe the reset and every applied step") {
  GridMap m = load_map_file(test::asset("desk_open.map"));
  WorldParams world;
  world.horizon = 20;
  int resets = 0, steps = 0;
  std::vector<double> mse_seen;
  RunHooks hooks;
  hooks.on_reset = [&](const EpisodeState& st, const PerceptionState&) {
    ++resets;
    CHECK(st.step == 0);
  };
  hooks.on_step = [&](const EpisodeState& st, const std::vector<std::optional<Action>>& acts,
                      const StepResult&, const PerceptionState&) {
    ++steps;
    CHECK(acts.size() == size_t(st.num_agents()));
    mse_seen.push_back(gaussian_mse(st.truth, st.model, st.map->height, st.map->width));
  };
  RandomWalker p;
  EvalEpisode ep = run_episode(m, {}, world, p, 7, 0, "eval-episode", "eval-policy", true, &hooks);
  CHECK(resets == 1);
  CHECK(steps == 20);
  CHECK(ep.mse == mse_seen);
}

TEST_CASE("different policies face the identical seeded world") {
  GridMap m = load_map_file(test::asset("desk_open.map"));
  WorldParams world;
  world.horizon = 30;
  std::vector<BenchmarkEntry> entries{
      {"random", [] { return make_baseline("random"); }},
      {"greedy", [] { return make_baseline("greedy"); }},
  };
  std::vector<PolicyResult> res = run_benchmark(m, entries, 5, {}, world, 55, 1, true, "");
  REQUIRE(res.size() == 2);
  CHECK(res[0].policy == "random");
  CHECK(res[1].policy == "greedy");
  CHECK(res[0].scenario == "desk_open");
  for (int i = 0; i < 5; ++i) {
    CHECK(res[0].episodes[i].initial_count == res[1].episodes[i].initial_count);
    CHECK(res[0].episodes[i].index == uint64_t(i));
  }
  CHECK(res[0].mean_ms == 0.0);  // strict mode blanks the clock
}

TEST_CASE("thread count changes nothing but the wall clock") {
  GridMap m = load_map_file(test::asset("desk_open.map"));
  WorldParams world;
  world.horizon = 25;
  std::vector<BenchmarkEntry> entries{
      {"lawnmower", [] { return make_baseline("lawnmower"); }},
      {"pso", [] { return make_baseline("pso"); }},
  };
  std::vector<PolicyResult> one = run_benchmark(m, entries, 6, {}, world, 31, 1, true, "");
  std::vector<PolicyResult> two = run_benchmark(m, entries, 6, {}, world, 31, 2, true, "");
  REQUIRE(one.size() == two.size());
  for (size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].mean_ptc == two[k].mean_ptc);
    CHECK(one[k].mean_mse == two[k].mean_mse);
    CHECK(one[k].ci_ptc == two[k].ci_ptc);
    for (int i = 0; i < 6; ++i) {
      CHECK(one[k].episodes[i].ptc == two[k].episodes[i].ptc);
      CHECK(one[k].episodes[i].mse == two[k].episodes[i].mse);
    }
  }
}

TEST_CASE("a benchmark leaves its report, traces, and plots behind") {
  GridMap m = load_map_file(test::asset("desk_open.map"));
  WorldParams world;
  world.horizon = 15;
  fs::remove_all("bench_out");
  std::vector<BenchmarkEntry> entries{{"random", [] { return make_baseline("random"); }}};
  run_benchmark(m, entries, 3, {}, world, 5, 1, true, "bench_out");

  CHECK(fs::exists("bench_out/report.csv"));
  CHECK(fs::exists("bench_out/traces_random.json"));
  CHECK(fs::exists("bench_out/ptc_desk_open.svg"));
  CHECK(fs::exists("bench_out/mse_desk_open.svg"));

  std::ifstream csv("bench_out/report.csv");
  std::string header, row;
  std::getline(csv, header);
  CHECK(header ==
        "policy,scenario,episodes,mean_ptc,ci95_ptc,mean_final_mse,ci95_final_mse,"
        "mean_decision_ms");
  REQUIRE(std::getline(csv, row));
  CHECK(row.rfind("random,desk_open,3,", 0) == 0);

  std::ifstream tj("bench_out/traces_random.json");
  nlohmann::json j = nlohmann::json::parse(tj);
  CHECK(j["policy"] == "random");
  CHECK(j["episodes"].size() == 3);
  CHECK(j["episodes"][0]["ptc"].size() == 15);

  std::ifstream svg("bench_out/ptc_desk_open.svg");
  std::string first_line;
  std::getline(svg, first_line);
  CHECK(first_line.find("<svg") != std::string::npos);
}

TEST_CASE("episode logs serialize one parseable object per line") {
  GridMap m = load_map_file(test::asset("desk_open.map"));
  WorldParams world;
  world.horizon = 6;
  RewardWeights weights;
  fs::create_directories("bench_out");

  {
    EpisodeLogWriter log("bench_out/episode.jsonl");
    RunHooks hooks;
    uint64_t seed = 12;
    hooks.on_reset = [&](const EpisodeState& st, const PerceptionState&) {
      log.header(st, seed);
    };
    hooks.on_step = [&](const EpisodeState& st, const std::vector<std::optional<Action>>& acts,
                        const StepResult& result, const PerceptionState&) {
      std::vector<RewardBreakdown> rws;
      for (int n = 0; n < st.num_agents(); ++n)
        rws.push_back(agent_reward(st.specs[n], result.agents[n], weights, st.map->diagonal()));
      log.step(st, acts, result, rws);
    };
    RandomWalker p;
    run_episode(m, {}, world, p, seed, 0, "eval-episode", "eval-policy", true, &hooks);
  }

  std::ifstream in("bench_out/episode.jsonl");
  std::string line;
  int lines = 0, collected_sum = 0;
  int header_count = 0;
  int last_remaining = -1, initial = -1;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    if (lines == 0) {
      CHECK(j["type"] == "header");
      CHECK(j["map"] == "desk_open");
      CHECK(j["seed"] == 12);
      CHECK(j["horizon"] == 6);
      CHECK(j["scouts"] == 2);
      CHECK(j["cleaners"] == 2);
      initial = j["initial_count"];
      ++header_count;
    } else {
      CHECK(j["t"] == lines - 1);
      CHECK(j["positions"].size() == 4);
      CHECK(j["actions"].size() == 4);
      CHECK(j["rewards"].size() == 4);
      collected_sum += j["collected"].get<int>();
      last_remaining = j["remaining"];
    }
    ++lines;
  }
  CHECK(lines == 7);
  CHECK(header_count == 1);
  CHECK(initial == collected_sum + last_remaining);
}
