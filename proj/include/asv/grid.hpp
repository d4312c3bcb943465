#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace asv {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MapError : SimError {
  using SimError::SimError;
};

struct Cell {
  int i = 0;  // row
  int j = 0;  // col
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Center of a cell in continuous coordinates: x along columns, y along rows.
inline double cell_cx(Cell c) { return c.j + 0.5; }
inline double cell_cy(Cell c) { return c.i + 0.5; }

inline double cell_dist(Cell a, Cell b) {
  return std::hypot(static_cast<double>(a.i - b.i), static_cast<double>(a.j - b.j));
}

// Discretized scenario: navigability mask plus deployment regions.  The
// navigable set is guaranteed 8-connected after a successful load.
struct GridMap {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> nav;                    // height*width, row-major, 1 = navigable
  std::vector<std::vector<Cell>> deploy_zones; // one entry per contiguous region
  std::string name;

  int size() const { return height * width; }
  int idx(int i, int j) const { return i * width + j; }
  int idx(Cell c) const { return c.i * width + c.j; }
  bool in_bounds(int i, int j) const { return i >= 0 && i < height && j >= 0 && j < width; }
  bool navigable(int i, int j) const { return in_bounds(i, j) && nav[idx(i, j)] != 0; }
  bool navigable(Cell c) const { return navigable(c.i, c.j); }

  std::vector<Cell> deploy_cells() const;
  std::vector<Cell> navigable_cells() const;
  int navigable_count() const;
  double diagonal() const { return std::hypot(static_cast<double>(height), static_cast<double>(width)); }
};

// Parses the scenario text format: optional '#' comment lines, a "H W" header,
// then H rows of W characters from {0 obstacle, 1 navigable, 2 deploy}.
GridMap load_map(const std::string& text, const std::string& name = "");
GridMap load_map_file(const std::string& path);

// Integer offsets (di, dj) whose center-to-center distance is < radius.
std::vector<std::pair<int, int>> disk_offsets(double radius);

}  // namespace asv
