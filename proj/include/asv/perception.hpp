#pragma once

#include <string>
#include <vector>

#include "asv/episode.hpp"

namespace asv {

// Six-channel egocentric view, every entry in [0,1]:
//   0  navigability minus half coverage, values in {0, 0.5, 1}
//   1-3  belief snapshots at t, t-1, t-2, each scaled by its own max
//   4  the observer's recent path, fading toward old entries, newest = 1
//   5  teammates: scouts 0.5, cleaners 1, observer excluded
struct Observation {
  int height = 0;
  int width = 0;
  std::vector<float> data;  // 6 * height * width, channel-major

  float& at(int c, int i, int j) { return data[(c * height + i) * width + j]; }
  float at(int c, int i, int j) const { return data[(c * height + i) * width + j]; }
  const float* channel(int c) const { return data.data() + c * height * width; }
};

constexpr int kObsChannels = 6;
constexpr int kTrailLength = 10;
constexpr int kModelHistory = 3;

// Episode-scoped observation memory: belief snapshots (newest first) and the
// per-agent position rings.  Trails start empty; positions are recorded after
// each step, so the newest entry is the agent's current cell from step 1 on.
struct PerceptionState {
  std::vector<std::vector<int>> model_hist;
  std::vector<std::vector<Cell>> trails;
};

PerceptionState make_perception(const EpisodeState& state);
void update_perception(PerceptionState& per, const EpisodeState& state);

Observation observe(const EpisodeState& state, const PerceptionState& per, int agent);

// Writes channel c to "<prefix>_c<c>.pgm" for each channel, 0..255 gray.
void write_observation_pgm(const Observation& obs, const std::string& prefix);

}  // namespace asv
