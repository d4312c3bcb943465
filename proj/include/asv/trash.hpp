#pragma once

#include <vector>

#include "asv/grid.hpp"
#include "asv/rng.hpp"

namespace asv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct SpawnError : SimError {
  using SimError::SimError;
};

struct TrashParams {
  double count_mean = 60.0;
  double count_std = 10.0;
  double sigma_spawn = 5.0;   // spread of the spawn cluster, in cells
  double wind_bound = 0.05;   // |wind component| upper bound, cells/step
  double noise_bound = 0.10;  // per-item fluctuation bound, cells/step
  int max_spawn_retries = 1000;
};

// Floating items in continuous coordinates.  Drift is shared wind plus
// per-item noise; both weighted by 1 and integrated with dt = 1.
struct TrashField {
  std::vector<Vec2> items;
  Vec2 wind;
  double noise_bound = 0.10;
  double w_wind = 1.0;
  double w_rand = 1.0;
  double dt = 1.0;
};

inline Cell cell_of(Vec2 p) {
  return {static_cast<int>(std::floor(p.y)), static_cast<int>(std::floor(p.x))};
}

// Draws K ~ round(N(mean, std^2)) clamped to >= 1 items around a uniformly
// chosen navigable source cell; every item is rejection-sampled into
// navigable area.  The wind is left zero; episode reset samples it.
TrashField spawn_trash(const GridMap& map, const TrashParams& params, Rng& rng);

// Advances every item by one step of wind + fresh per-item noise.  A
// displacement whose endpoint leaves navigable area has the offending axis
// component cancelled.
void step_trash(TrashField& field, const GridMap& map, Rng& rng);

// Recomputes the per-cell item counts of `field` into `out` (size map.size()).
void bin_items(const TrashField& field, const GridMap& map, std::vector<int>& out);

}  // namespace asv
