#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Minimal self-contained SVG plots (axes, ticks, error bars, overlay
// curves). Output bytes depend only on the data, so plots from identical
// runs are identical files.

namespace homsim::svg {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // empty for none
  std::string color = "#1f77b4";
  bool as_line = false;      // line instead of markers
  std::string label;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 760;
  int height = 480;
};

void write_svg(const std::filesystem::path& path, const Figure& fig);

}  // namespace homsim::svg
