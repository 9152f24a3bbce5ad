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
#include <vector>

#include "qnngl/graph.hpp"
#include "qnngl/network.hpp"
#include "qnngl/training.hpp"

namespace qnngl {

// File formats. Datasets and networks are single JSON documents with
// complex vectors/matrices stored as interleaved [re, im, re, im, ...]
// arrays (row-major for matrices). CSV columns carry the exact headers the
// plotting pipeline expects; emission aborts on NaN/Inf or on fidelity
// columns leaving [0, 1].

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Stable numeric formatting used in all emitted CSV files.
std::string format_double(double value);

void save_dataset_json(const GraphDataset& ds, const std::string& path);
GraphDataset load_dataset_json(const std::string& path);

void save_network_json(const NetworkState& network, const std::string& path);
NetworkState load_network_json(const std::string& path);

inline constexpr const char* kTrainingCsvHeader =
    "step times epsilon,SsvTraining,SsvGraphTraining,SsvTestingUsv,SsvGraphTestingUsv";
inline constexpr const char* kSweepCsvHeader =
    "numberSupervisedPairsList,SsvTrainingMeanList,SsvGraphTrainingMeanList,"
    "SsvTestingUsvMeanList,SsvGraphTestingUsvMeanList";

// Per-round loss curves of the paired gamma = 0 / gamma < 0 runs.
std::string render_training_csv(double epsilon, const std::vector<LossRecord>& arm_sv,
                                const std::vector<LossRecord>& arm_graph);

// Mean final losses per supervised count.
std::string render_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qnngl
