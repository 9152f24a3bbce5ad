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

#include "qnngl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qnngl {

using nlohmann::json;

namespace {

constexpr int kDatasetFormatVersion = 1;
constexpr int kNetworkFormatVersion = 1;

json complex_vector_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i).real());
    out.push_back(v(i).imag());
  }
  return out;
}

Vec complex_vector_from_json(const json& j) {
  if (!j.is_array() || j.size() % 2 != 0)
    throw ConfigError("expected an even-length interleaved real/imag array");
  Vec v(j.size() / 2);
  for (std::size_t i = 0; i + 1 < j.size(); i += 2)
    v(static_cast<Eigen::Index>(i / 2)) = Complex(j[i].get<double>(), j[i + 1].get<double>());
  return v;
}

json complex_matrix_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out.push_back(m(r, c).real());
      out.push_back(m(r, c).imag());
    }
  }
  return out;
}

Mat complex_matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != 2 * rows * cols)
    throw ConfigError("matrix entry count does not match its declared dimensions");
  Mat m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, i += 2)
      m(r, c) = Complex(j[i].get<double>(), j[i + 1].get<double>());
  return m;
}

int qubits_from_dim(std::size_t dim, const char* what) {
  int n = 0;
  std::size_t d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw ConfigError(std::string(what) + ": length is not a power of two");
    d /= 2;
    ++n;
  }
  if (n == 0) throw ConfigError(std::string(what) + ": empty state");
  return n;
}

void check_csv_value(double value, const char* column, bool fidelity_based) {
  if (!std::isfinite(value))
    throw InvariantViolation(std::string("refusing to write non-finite value in column ") + column);
  if (fidelity_based && (value < 0.0 || value > 1.0))
    throw InvariantViolation(std::string("fidelity column ") + column + " left [0, 1]: " +
                             std::to_string(value));
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void save_dataset_json(const GraphDataset& ds, const std::string& path) {
  json doc;
  doc["version"] = kDatasetFormatVersion;
  doc["num_vertices"] = ds.num_vertices();
  doc["seed"] = ds.seed;
  doc["input_amplitudes"] = json::array();
  for (const auto& s : ds.inputs) doc["input_amplitudes"].push_back(complex_vector_to_json(s.amplitudes));
  doc["target_amplitudes"] = json::array();
  for (const auto& s : ds.targets) doc["target_amplitudes"].push_back(complex_vector_to_json(s.amplitudes));
  doc["adjacency"] = json::array();
  for (Eigen::Index v = 0; v < ds.adjacency.rows(); ++v) {
    json row = json::array();
    for (Eigen::Index w = 0; w < ds.adjacency.cols(); ++w) row.push_back(ds.adjacency(v, w));
    doc["adjacency"].push_back(row);
  }
  write_text_file(path, doc.dump(2) + "\n");
}

GraphDataset load_dataset_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("dataset file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kDatasetFormatVersion)
      throw ConfigError("dataset file " + path + " has an unsupported format version");
    GraphDataset ds;
    ds.seed = doc.value("seed", std::uint64_t{0});
    const int n = doc.at("num_vertices").get<int>();
    for (const auto& amps : doc.at("input_amplitudes")) {
      Vec v = complex_vector_from_json(amps);
      ds.inputs.emplace_back(qubits_from_dim(static_cast<std::size_t>(v.size()), "input state"), v);
    }
    for (const auto& amps : doc.at("target_amplitudes")) {
      Vec v = complex_vector_from_json(amps);
      ds.targets.emplace_back(qubits_from_dim(static_cast<std::size_t>(v.size()), "target state"), v);
    }
    const auto& adj = doc.at("adjacency");
    ds.adjacency = RealMat::Zero(n, n);
    if (static_cast<int>(adj.size()) != n)
      throw ConfigError("dataset file " + path + ": adjacency row count mismatch");
    for (int v = 0; v < n; ++v) {
      if (static_cast<int>(adj[static_cast<std::size_t>(v)].size()) != n)
        throw ConfigError("dataset file " + path + ": adjacency column count mismatch");
      for (int w = 0; w < n; ++w)
        ds.adjacency(v, w) = adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)].get<double>();
    }
    if (ds.num_vertices() != n || static_cast<int>(ds.inputs.size()) != n)
      throw ConfigError("dataset file " + path + ": state counts do not match num_vertices");
    ValidationReport report = validate_dataset(ds);
    if (!report.ok())
      throw InvariantViolation("dataset file " + path + " violates invariants: " +
                               report.violations.front());
    return ds;
  } catch (const json::exception& e) {
    throw ConfigError("dataset file " + path + " is malformed: " + e.what());
  }
}

void save_network_json(const NetworkState& network, const std::string& path) {
  json doc;
  doc["version"] = kNetworkFormatVersion;
  doc["widths"] = network.topology.widths;
  doc["perceptrons"] = json::array();
  for (const auto& layer : network.perceptrons) {
    json jl = json::array();
    for (const Mat& u : layer) jl.push_back(complex_matrix_to_json(u));
    doc["perceptrons"].push_back(jl);
  }
  write_text_file(path, doc.dump(2) + "\n");
}

NetworkState load_network_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("network file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kNetworkFormatVersion)
      throw ConfigError("network file " + path + " has an unsupported format version");
    NetworkState net;
    net.topology = NetworkTopology(doc.at("widths").get<std::vector<int>>());
    const auto& layers = doc.at("perceptrons");
    for (int l = 0; l < net.topology.num_unitary_layers(); ++l) {
      const Eigen::Index d = dim_for_qubits(net.topology.widths[static_cast<std::size_t>(l)] + 1);
      std::vector<Mat> layer;
      for (const auto& ju : layers.at(static_cast<std::size_t>(l)))
        layer.push_back(complex_matrix_from_json(ju, d, d));
      net.perceptrons.push_back(std::move(layer));
    }
    net.validate();
    return net;
  } catch (const json::exception& e) {
    throw ConfigError("network file " + path + " is malformed: " + e.what());
  }
}

std::string render_training_csv(double epsilon, const std::vector<LossRecord>& arm_sv,
                                const std::vector<LossRecord>& arm_graph) {
  if (arm_sv.size() != arm_graph.size())
    throw std::invalid_argument("render_training_csv: the two arms have different lengths");
  std::string out = kTrainingCsvHeader;
  out += "\n";
  for (std::size_t i = 0; i < arm_sv.size(); ++i) {
    const double step_eps = static_cast<double>(arm_sv[i].step_index) * epsilon;
    check_csv_value(step_eps, "step times epsilon", false);
    check_csv_value(arm_sv[i].l_sv, "SsvTraining", true);
    check_csv_value(arm_graph[i].l_sv, "SsvGraphTraining", true);
    check_csv_value(arm_sv[i].l_usv, "SsvTestingUsv", true);
    check_csv_value(arm_graph[i].l_usv, "SsvGraphTestingUsv", true);
    out += format_double(step_eps) + "," + format_double(arm_sv[i].l_sv) + "," +
           format_double(arm_graph[i].l_sv) + "," + format_double(arm_sv[i].l_usv) + "," +
           format_double(arm_graph[i].l_usv) + "\n";
  }
  return out;
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += "\n";
  for (const auto& row : rows) {
    check_csv_value(row.mean_training_sv, "SsvTrainingMeanList", true);
    check_csv_value(row.mean_training_graph, "SsvGraphTrainingMeanList", true);
    check_csv_value(row.mean_testing_sv, "SsvTestingUsvMeanList", true);
    check_csv_value(row.mean_testing_graph, "SsvGraphTestingUsvMeanList", true);
    out += std::to_string(row.s) + "," + format_double(row.mean_training_sv) + "," +
           format_double(row.mean_training_graph) + "," + format_double(row.mean_testing_sv) + "," +
           format_double(row.mean_testing_graph) + "\n";
  }
  return out;
}

}  // namespace qnngl
