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

#pragma once

#include <string>

namespace qnngl {

// Static SVG line plots of the emitted CSV files: one plot holds the two
// paired series (supervised arm in green, supervised + graph arm in blue).

enum class PlotKind { Training, Sweep };       // selects CSV schema and x axis
enum class PlotMetric { TrainingLoss, TestingLoss };  // which column pair to draw

// Renders a plot from CSV text; throws ConfigError on schema mismatch.
std::string render_plot_svg(const std::string& csv_text, PlotKind kind, PlotMetric metric);

// Reads the CSV at csv_path and writes the plot to out_path.
void emit_svg(const std::string& csv_path, PlotKind kind, PlotMetric metric,
              const std::string& out_path);

}  // namespace qnngl
