#include "asv/trash.hpp"

#include <algorithm>

namespace asv {

TrashField spawn_trash(const GridMap& map, const TrashParams& params, Rng& rng) {
  TrashField field;
  field.noise_bound = params.noise_bound;

  long long k = std::llround(rng.normal(params.count_mean, params.count_std));
  int count = static_cast<int>(std::max(1ll, k));

  auto cells = map.navigable_cells();
  Cell source = cells[rng.uniform_int(static_cast<int>(cells.size()))];
  double cx = cell_cx(source);
  double cy = cell_cy(source);

  field.items.reserve(count);
  for (int n = 0; n < count; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < params.max_spawn_retries; ++attempt) {
      Vec2 p{rng.normal(cx, params.sigma_spawn), rng.normal(cy, params.sigma_spawn)};
      if (map.navigable(cell_of(p))) {
        field.items.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw SpawnError("trash spawn exceeded retry cap on scenario '" + map.name + "'");
  }
  return field;
}

void step_trash(TrashField& field, const GridMap& map, Rng& rng) {
  for (Vec2& p : field.items) {
    double rx = rng.uniform(-field.noise_bound, field.noise_bound);
    double ry = rng.uniform(-field.noise_bound, field.noise_bound);
    double dx = field.dt * (field.w_wind * field.wind.x + field.w_rand * rx);
    double dy = field.dt * (field.w_wind * field.wind.y + field.w_rand * ry);
    double nx = p.x + dx;
    double ny = p.y + dy;
    if (!map.navigable(cell_of({nx, ny}))) {
      // cancel the axis components that individually leave navigable area
      if (!map.navigable(cell_of({nx, p.y}))) nx = p.x;
      if (!map.navigable(cell_of({p.x, ny}))) ny = p.y;
      if (!map.navigable(cell_of({nx, ny}))) {
        // diagonally blocked corner
        nx = p.x;
        ny = p.y;
      }
    }
    p.x = nx;
    p.y = ny;
  }
}

void bin_items(const TrashField& field, const GridMap& map, std::vector<int>& out) {
  out.assign(map.size(), 0);
  for (const Vec2& p : field.items) {
    Cell c = cell_of(p);
    out[map.idx(c)] += 1;
  }
}

}  // namespace asv
