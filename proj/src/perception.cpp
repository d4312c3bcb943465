#include "asv/perception.hpp"

#include <algorithm>
#include <fstream>

namespace asv {

PerceptionState make_perception(const EpisodeState& state) {
  PerceptionState per;
  per.model_hist.push_back(state.model);
  per.trails.resize(state.num_agents());
  return per;
}

void update_perception(PerceptionState& per, const EpisodeState& state) {
  per.model_hist.insert(per.model_hist.begin(), state.model);
  if (per.model_hist.size() > kModelHistory) per.model_hist.resize(kModelHistory);
  for (int n = 0; n < state.num_agents(); ++n) {
    auto& trail = per.trails[n];
    trail.push_back(state.positions[n]);
    if (static_cast<int>(trail.size()) > kTrailLength) trail.erase(trail.begin());
  }
}

Observation observe(const EpisodeState& state, const PerceptionState& per, int agent) {
  const GridMap& map = *state.map;
  Observation obs;
  obs.height = map.height;
  obs.width = map.width;
  obs.data.assign(static_cast<size_t>(kObsChannels) * map.size(), 0.0f);

  for (int i = 0; i < map.height; ++i)
    for (int j = 0; j < map.width; ++j) {
      int id = map.idx(i, j);
      if (map.nav[id]) obs.at(0, i, j) = state.coverage[id] ? 0.5f : 1.0f;
    }

  for (int h = 0; h < kModelHistory; ++h) {
    if (h >= static_cast<int>(per.model_hist.size())) continue;
    const auto& snap = per.model_hist[h];
    int mx = *std::max_element(snap.begin(), snap.end());
    if (mx <= 0) continue;
    float inv = 1.0f / static_cast<float>(mx);
    float* ch = obs.data.data() + static_cast<size_t>(1 + h) * map.size();
    for (int id = 0; id < map.size(); ++id) ch[id] = static_cast<float>(snap[id]) * inv;
  }

  const auto& trail = per.trails[agent];
  int len = static_cast<int>(trail.size());
  for (int k = 0; k < len; ++k) {
    float v = static_cast<float>(k + 1) / static_cast<float>(len);
    obs.at(4, trail[k].i, trail[k].j) = std::max(v, 0.1f);
  }

  for (int n = 0; n < state.num_agents(); ++n) {
    if (n == agent) continue;
    Cell p = state.positions[n];
    obs.at(5, p.i, p.j) = state.specs[n].can_clean ? 1.0f : 0.5f;
  }
  return obs;
}

void write_observation_pgm(const Observation& obs, const std::string& prefix) {
  for (int c = 0; c < kObsChannels; ++c) {
    std::ofstream out(prefix + "_c" + std::to_string(c) + ".pgm");
    out << "P2\n" << obs.width << " " << obs.height << "\n255\n";
    for (int i = 0; i < obs.height; ++i) {
      for (int j = 0; j < obs.width; ++j) {
        int v = static_cast<int>(std::lround(obs.at(c, i, j) * 255.0f));
        out << std::clamp(v, 0, 255) << (j + 1 < obs.width ? ' ' : '\n');
      }
    }
  }
}

}  // namespace asv
