#pragma once

#include <string>

#include "asv/grid.hpp"

namespace asv::test {

inline std::string assets_dir() {
#ifdef ASV_ASSETS_DIR
  return ASV_ASSETS_DIR;
#else
  return "assets";
#endif
}

inline std::string asset(const std::string& name) { return assets_dir() + "/" + name; }

// All-navigable h x w grid with a deploy block of the given extent.
inline GridMap open_map(int h, int w, int di0 = 0, int di1 = 0, int dj0 = 0, int dj1 = 0) {
  std::string text = std::to_string(h) + " " + std::to_string(w) + "\n";
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j)
      text += (i >= di0 && i <= di1 && j >= dj0 && j <= dj1) ? '2' : '1';
    text += '\n';
  }
  return load_map(text, "open");
}

}  // namespace asv::test
