// Copyright 2026 The qnn-graphlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnngl/svg.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "qnngl/io.hpp"

namespace qnngl {

namespace {

struct Series {
  std::vector<double> x;
  std::vector<double> y1;  // supervised arm
  std::vector<double> y2;  // supervised + graph arm
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

Series parse_csv(const std::string& csv_text, PlotKind kind, PlotMetric metric) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("plot: CSV is empty");
  const char* expected = kind == PlotKind::Training ? kTrainingCsvHeader : kSweepCsvHeader;
  if (line != expected) throw ConfigError("plot: CSV header does not match the requested plot kind");

  // Column layout (both schemas): x, training pair, testing pair.
  const std::size_t c1 = metric == PlotMetric::TrainingLoss ? 1 : 3;
  const std::size_t c2 = metric == PlotMetric::TrainingLoss ? 2 : 4;

  Series s;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw ConfigError("plot: CSV line " + std::to_string(lineno) + " does not have 5 fields");
    try {
      s.x.push_back(std::stod(fields[0]));
      s.y1.push_back(std::stod(fields[c1]));
      s.y2.push_back(std::stod(fields[c2]));
    } catch (const std::exception&) {
      throw ConfigError("plot: CSV line " + std::to_string(lineno) + " has a non-numeric field");
    }
  }
  if (s.x.empty()) throw ConfigError("plot: CSV has no data rows");
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string render_plot_svg(const std::string& csv_text, PlotKind kind, PlotMetric metric) {
  const Series s = parse_csv(csv_text, kind, metric);

  const double width = 640.0, height = 480.0;
  const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 55.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x_min = s.x.front(), x_max = s.x.front();
  for (double v : s.x) {
    x_min = std::min(x_min, v);
    x_max = std::max(x_max, v);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  const double y_min = 0.0, y_max = 1.0;

  auto px = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double v) { return mt + (y_max - v) / (y_max - y_min) * ph; };

  const std::string x_label = kind == PlotKind::Training ? "s * epsilon" : "number of supervised states S";
  const std::string y_label = "loss";
  const char* color1 = "#2aa02a";  // supervised
  const char* color2 = "#1f77b4";  // supervised + graph

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Grid and ticks.
  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double fx = x_min + (x_max - x_min) * t / n_ticks;
    const double fy = y_min + (y_max - y_min) * t / n_ticks;
    svg << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(px(fx))
        << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"#dddddd\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py(fy)) << "\" x2=\"" << fmt(ml + pw)
        << "\" y2=\"" << fmt(py(fy)) << "\" stroke=\"#dddddd\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    svg << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py(fy) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }

  // Axes.
  svg << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 12)
      << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt(mt + ph / 2)
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fmt(mt + ph / 2)
      << ")\">" << y_label << "</text>\n";

  auto draw_series = [&](const std::vector<double>& y, const char* color) {
    if (s.x.size() >= 2) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        svg << fmt(px(s.x[i])) << "," << fmt(py(y[i])) << (i + 1 < s.x.size() ? " " : "");
      svg << "\"/>\n";
    }
    const double radius = kind == PlotKind::Sweep ? 4.0 : 1.2;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      svg << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(y[i])) << "\" r=\"" << radius
          << "\" fill=\"" << color << "\"/>\n";
  };
  draw_series(s.y1, color1);
  draw_series(s.y2, color2);

  // Legend.
  svg << "<rect x=\"" << fmt(ml + 10) << "\" y=\"" << fmt(mt + 10)
      << "\" width=\"190\" height=\"42\" fill=\"white\" stroke=\"#888888\"/>\n";
  svg << "<circle cx=\"" << fmt(ml + 24) << "\" cy=\"" << fmt(mt + 24) << "\" r=\"4\" fill=\""
      << color1 << "\"/>\n";
  svg << "<text x=\"" << fmt(ml + 34) << "\" y=\"" << fmt(mt + 28)
      << "\" font-size=\"12\">Supervised</text>\n";
  svg << "<circle cx=\"" << fmt(ml + 24) << "\" cy=\"" << fmt(mt + 42) << "\" r=\"4\" fill=\""
      << color2 << "\"/>\n";
  svg << "<text x=\"" << fmt(ml + 34) << "\" y=\"" << fmt(mt + 46)
      << "\" font-size=\"12\">Supervised + Graph</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

void emit_svg(const std::string& csv_path, PlotKind kind, PlotMetric metric,
              const std::string& out_path) {
  write_text_file(out_path, render_plot_svg(read_text_file(csv_path), kind, metric));
}

}  // namespace qnngl
