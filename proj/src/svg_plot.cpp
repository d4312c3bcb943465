#include "asv/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace asv {

namespace {

constexpr int kW = 760, kH = 480;
constexpr int kLeft = 64, kRight = 150, kTop = 40, kBottom = 46;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// A loose "nice" tick step: 1/2/5 times a power of ten.
double tick_step(double span) {
  if (span <= 0) return 1.0;
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2 * mag;
  if (r < 7.5) return 5 * mag;
  return 10 * mag;
}

}  // namespace

void write_series_plot(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<PlotSeries>& series) {
  size_t steps = 0;
  double ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    steps = std::max(steps, s.mean.size());
    for (size_t t = 0; t < s.mean.size(); ++t) {
      double lo = t < s.lo.size() ? s.lo[t] : s.mean[t];
      double hi = t < s.hi.size() ? s.hi[t] : s.mean[t];
      if (first) {
        ymin = lo;
        ymax = hi;
        first = false;
      } else {
        ymin = std::min(ymin, lo);
        ymax = std::max(ymax, hi);
      }
    }
  }
  if (steps < 2) steps = 2;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  double px = kW - kLeft - kRight, py = kH - kTop - kBottom;
  auto X = [&](double t) { return kLeft + px * t / static_cast<double>(steps - 1); };
  auto Y = [&](double v) { return kTop + py * (1.0 - (v - ymin) / (ymax - ymin)); };

  std::ofstream os(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
     << "font-family=\"sans-serif\">" << title << "</text>\n";

  double ystep = tick_step(ymax - ymin);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9; v += ystep) {
    os << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(Y(v)) << "\" x2=\"" << kW - kRight
       << "\" y2=\"" << fmt(Y(v)) << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(Y(v) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
       << "</text>\n";
  }
  double xstep = tick_step(static_cast<double>(steps - 1));
  for (double t = 0; t <= static_cast<double>(steps - 1) + 1e-9; t += xstep) {
    os << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(X(t))
       << "\" y2=\"" << kH - kBottom << "\" stroke=\"#eeeeee\"/>\n"
       << "<text x=\"" << fmt(X(t)) << "\" y=\"" << kH - kBottom + 18
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(t)
       << "</text>\n";
  }
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fmt(px) << "\" height=\""
     << fmt(py) << "\" fill=\"none\" stroke=\"#333333\"/>\n"
     << "<text x=\"" << kLeft + px / 2 << "\" y=\"" << kH - 8
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xlabel
     << "</text>\n"
     << "<text x=\"16\" y=\"" << kTop + py / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
     << "transform=\"rotate(-90 16 " << kTop + py / 2 << ")\">" << ylabel << "</text>\n";

  int row = 0;
  for (const auto& s : series) {
    if (s.mean.empty()) continue;
    if (s.lo.size() == s.mean.size() && s.hi.size() == s.mean.size()) {
      os << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (size_t t = 0; t < s.mean.size(); ++t)
        os << fmt(X(static_cast<double>(t))) << "," << fmt(Y(s.hi[t])) << " ";
      for (size_t t = s.mean.size(); t-- > 0;)
        os << fmt(X(static_cast<double>(t))) << "," << fmt(Y(s.lo[t])) << " ";
      os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\" points=\"";
    for (size_t t = 0; t < s.mean.size(); ++t)
      os << fmt(X(static_cast<double>(t))) << "," << fmt(Y(s.mean[t])) << " ";
    os << "\"/>\n";
    int ly = kTop + 10 + 18 * row++;
    os << "<line x1=\"" << kW - kRight + 8 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight + 32
       << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kW - kRight + 38 << "\" y=\"" << ly + 4
       << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

void write_rollout_svg(const std::string& path, const GridMap& map,
                       const std::vector<std::vector<Cell>>& trajectories,
                       const std::vector<AgentKind>& kinds, const std::vector<Cell>& trash_left) {
  int cell = std::max(4, std::min(960 / std::max(1, map.width), 960 / std::max(1, map.height)));
  int w = map.width * cell, h = map.height * cell;
  std::ofstream os(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  for (int i = 0; i < map.height; ++i)
    for (int j = 0; j < map.width; ++j) {
      const char* fill = map.nav[map.idx(i, j)] ? "#dcebf5" : "#41484f";
      os << "<rect x=\"" << j * cell << "\" y=\"" << i * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
    }
  for (const auto& zone : map.deploy_zones)
    for (Cell c : zone)
      os << "<rect x=\"" << c.j * cell << "\" y=\"" << c.i * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"#a8d5a2\" fill-opacity=\"0.6\"/>\n";
  for (Cell c : trash_left)
    os << "<rect x=\"" << c.j * cell << "\" y=\"" << c.i * cell << "\" width=\"" << cell
       << "\" height=\"" << cell << "\" fill=\"#f2c94c\"/>\n";
  for (size_t n = 0; n < trajectories.size(); ++n) {
    const char* color = kinds[n] == AgentKind::Scout ? "#1f77b4" : "#d62728";
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" stroke-opacity=\"0.85\" points=\"";
    for (Cell c : trajectories[n])
      os << fmt((c.j + 0.5) * cell) << "," << fmt((c.i + 0.5) * cell) << " ";
    os << "\"/>\n";
    if (!trajectories[n].empty()) {
      Cell s0 = trajectories[n].front();
      os << "<circle cx=\"" << fmt((s0.j + 0.5) * cell) << "\" cy=\"" << fmt((s0.i + 0.5) * cell)
         << "\" r=\"" << cell * 0.35 << "\" fill=\"" << color << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace asv
