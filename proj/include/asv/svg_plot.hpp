#pragma once

#include <string>
#include <vector>

#include "asv/episode.hpp"

namespace asv {

struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> mean, lo, hi;  // lo/hi may be empty for a bare line
};

// Step-indexed line chart with optional shaded bands, axes and a legend.
void write_series_plot(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<PlotSeries>& series);

// Map view with per-agent trajectories and leftover trash cells marked.
void write_rollout_svg(const std::string& path, const GridMap& map,
                       const std::vector<std::vector<Cell>>& trajectories,
                       const std::vector<AgentKind>& kinds, const std::vector<Cell>& trash_left);

}  // namespace asv
