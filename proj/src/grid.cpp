#include "asv/grid.hpp"

#include <fstream>
#include <sstream>

namespace asv {

std::vector<Cell> GridMap::deploy_cells() const {
  std::vector<Cell> out;
  for (const auto& zone : deploy_zones) out.insert(out.end(), zone.begin(), zone.end());
  return out;
}

std::vector<Cell> GridMap::navigable_cells() const {
  std::vector<Cell> out;
  out.reserve(nav.size());
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j)
      if (nav[idx(i, j)]) out.push_back({i, j});
  return out;
}

int GridMap::navigable_count() const {
  int n = 0;
  for (uint8_t v : nav) n += v != 0;
  return n;
}

namespace {

// Flood fill with 8-connectivity; returns number of cells reached.
int flood_count(const GridMap& m, const std::vector<uint8_t>& mask, Cell start) {
  std::vector<uint8_t> seen(m.size(), 0);
  std::vector<Cell> stack{start};
  seen[m.idx(start)] = 1;
  int count = 0;
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    ++count;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        Cell n{c.i + di, c.j + dj};
        if (!m.in_bounds(n.i, n.j)) continue;
        int id = m.idx(n);
        if (mask[id] && !seen[id]) {
          seen[id] = 1;
          stack.push_back(n);
        }
      }
  }
  return count;
}

}  // namespace

GridMap load_map(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rows;
  bool have_header = false;
  int want_h = 0, want_w = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    if (!have_header) {
      std::istringstream hs(line);
      if (!(hs >> want_h >> want_w) || want_h <= 0 || want_w <= 0)
        throw MapError("scenario '" + name + "': malformed header line '" + line + "'");
      have_header = true;
      continue;
    }
    rows.push_back(line);
  }
  if (!have_header) throw MapError("scenario '" + name + "': missing header");
  if (static_cast<int>(rows.size()) != want_h)
    throw MapError("scenario '" + name + "': expected " + std::to_string(want_h) + " rows, got " +
                   std::to_string(rows.size()));

  GridMap m;
  m.height = want_h;
  m.width = want_w;
  m.name = name;
  m.nav.assign(m.size(), 0);
  std::vector<uint8_t> deploy(m.size(), 0);
  for (int i = 0; i < want_h; ++i) {
    if (static_cast<int>(rows[i].size()) != want_w)
      throw MapError("scenario '" + name + "': row " + std::to_string(i) + " has width " +
                     std::to_string(rows[i].size()) + ", expected " + std::to_string(want_w));
    for (int j = 0; j < want_w; ++j) {
      char c = rows[i][j];
      if (c == '0') continue;
      if (c == '1') {
        m.nav[m.idx(i, j)] = 1;
      } else if (c == '2') {
        m.nav[m.idx(i, j)] = 1;
        deploy[m.idx(i, j)] = 1;
      } else {
        throw MapError("scenario '" + name + "': invalid character '" + std::string(1, c) +
                       "' at row " + std::to_string(i));
      }
    }
  }

  int total_nav = m.navigable_count();
  if (total_nav == 0) throw MapError("scenario '" + name + "': no navigable cells");
  Cell first{};
  for (int i = 0; i < m.height && !m.nav[m.idx(first)]; ++i)
    for (int j = 0; j < m.width; ++j)
      if (m.nav[m.idx(i, j)]) {
        first = {i, j};
        i = m.height;
        break;
      }
  if (flood_count(m, m.nav, first) != total_nav)
    throw MapError("scenario '" + name + "': navigable region is disconnected");

  // Group deploy cells into 8-connected zones.
  std::vector<uint8_t> remaining = deploy;
  for (int i = 0; i < m.height; ++i)
    for (int j = 0; j < m.width; ++j) {
      if (!remaining[m.idx(i, j)]) continue;
      std::vector<Cell> zone;
      std::vector<Cell> stack{{i, j}};
      remaining[m.idx(i, j)] = 0;
      while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        zone.push_back(c);
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            Cell n{c.i + di, c.j + dj};
            if (!m.in_bounds(n.i, n.j) || !remaining[m.idx(n)]) continue;
            remaining[m.idx(n)] = 0;
            stack.push_back(n);
          }
      }
      m.deploy_zones.push_back(std::move(zone));
    }
  if (m.deploy_zones.empty())
    throw MapError("scenario '" + name + "': no deploy zone cells");
  return m;
}

GridMap load_map_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MapError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  std::string base = path;
  if (auto pos = base.find_last_of('/'); pos != std::string::npos) base = base.substr(pos + 1);
  if (auto pos = base.rfind(".map"); pos != std::string::npos) base = base.substr(0, pos);
  return load_map(ss.str(), base);
}

std::vector<std::pair<int, int>> disk_offsets(double radius) {
  std::vector<std::pair<int, int>> out;
  int r = static_cast<int>(std::ceil(radius));
  for (int di = -r; di <= r; ++di)
    for (int dj = -r; dj <= r; ++dj)
      if (static_cast<double>(di) * di + static_cast<double>(dj) * dj < radius * radius)
        out.emplace_back(di, dj);
  return out;
}

}  // namespace asv
