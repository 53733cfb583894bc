/// Minimal SVG 1.1 line/scatter plots.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasitop/io/format.hpp"

namespace quasitop::io {

enum class Mark { Line, Scatter, Step };

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  Mark mark = Mark::Line;
  std::string color;  // empty: palette
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  int width = 720;
  int height = 480;
  std::vector<Series> series;
};

// timestamp: emitted as a comment when set.
std::string render_svg(const Plot& plot, const Metadata& meta, const std::optional<std::string>& timestamp);

}  // namespace quasitop::io
