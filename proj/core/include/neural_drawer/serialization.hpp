// Copyright 2026 The neural_drawer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// On-disk artifacts: model checkpoints, layout JSON, CSV histories, run
// manifests, dataset directories and key=value configuration files.

#ifndef NEURAL_DRAWER_SERIALIZATION_HPP
#define NEURAL_DRAWER_SERIALIZATION_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neural_drawer/aesthete.hpp"
#include "neural_drawer/gnd.hpp"
#include "neural_drawer/graph.hpp"
#include "neural_drawer/training.hpp"

namespace nd {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Checkpoints: "NDCK", u32 format version, u64 header length, JSON header,
// then every parameter as little-endian float64 in declared order.

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_gnd_checkpoint(const GndModel& model, const TrainRunConfig* config = nullptr);
std::string encode_aesthete_checkpoint(const AestheteModel& model, std::uint64_t seed = 0);

struct LoadedGnd {
  GndModel model;
  std::string header_json;
};

/// Throws IoError on a bad magic, version mismatch, kind mismatch or
/// truncated payload.
LoadedGnd decode_gnd_checkpoint(std::string_view bytes);
AestheteModel decode_aesthete_checkpoint(std::string_view bytes);
/// Reads only the model-kind tag ("gnd" or "aesthete").
std::string checkpoint_kind(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories. Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Echo of a training configuration as a JSON object.
std::string train_config_json(const TrainRunConfig& cfg);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::uint64_t> seeds;
  std::string dataset_fingerprint;
  std::map<std::string, double> metrics;

  /// FNV-1a of the canonical "key=value\n" config text, as 16 hex digits.
  std::string config_hash() const;
  std::string to_json() const;
};

/// {"n", "coords", "metrics": {"avg_stress", "crossings"}, "manifest"}, with
/// every number written to 17 significant digits.
std::string layout_json(const Layout& layout, std::optional<double> avg_stress, int crossings,
                        const RunManifest& manifest);
/// Coordinates parsed back from layout JSON.
Layout parse_layout_json(std::string_view text);

std::string history_csv(std::span<const EpochRecord> history);
std::string trace_csv(std::span<const double> trace);

/// One "graph_NNNNN.txt" edge list per graph plus splits.json.
void write_dataset(const std::filesystem::path& dir, const GraphDataset& dataset);
GraphDataset read_dataset(const std::filesystem::path& dir);
std::uint64_t dataset_fingerprint(const GraphDataset& dataset);

/// Flat key=value lines; '#' starts a comment. Throws ParseError.
std::map<std::string, std::string> parse_config(std::string_view text);

}  // namespace nd

#endif  // NEURAL_DRAWER_SERIALIZATION_HPP
