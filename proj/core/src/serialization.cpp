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

#include "neural_drawer/serialization.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "neural_drawer/errors.hpp"

namespace nd {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'N', 'D', 'C', 'K'};

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("checkpoint: truncated payload");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::string encode(json header, std::span<const ad::Parameter> params) {
  json shapes = json::array();
  for (const auto& p : params) shapes.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}});
  header["format_version"] = kCheckpointVersion;
  header["parameters"] = std::move(shapes);
  const std::string text = header.dump();
  std::string out(kMagic, 4);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, text.size());
  out += text;
  for (const auto& p : params) {
    for (double v : p.value.values()) put_le<double>(out, v);
  }
  return out;
}

struct Decoded {
  json header;
  std::size_t payload = 0;
};

Decoded decode_header(std::string_view bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("checkpoint: bad magic");
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint: format version " + std::to_string(version) + " is not supported (expected " +
                  std::to_string(kCheckpointVersion) + ")");
  }
  const auto length = get_le<std::uint64_t>(bytes, pos);
  if (length > bytes.size() - pos) throw IoError("checkpoint: truncated header");
  Decoded d;
  try {
    d.header = json::parse(bytes.substr(pos, length));
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint: malformed header: ") + e.what());
  }
  d.payload = pos + length;
  return d;
}

void fill_parameters(const Decoded& d, std::string_view bytes, std::span<ad::Parameter> params) {
  const json& shapes = d.header.at("parameters");
  if (shapes.size() != params.size()) throw IoError("checkpoint: parameter count does not match the architecture");
  std::size_t pos = d.payload;
  for (std::size_t i = 0; i < params.size(); ++i) {
    ad::Parameter& p = params[i];
    if (shapes[i].at("name").get<std::string>() != p.name || shapes[i].at("rows").get<std::size_t>() != p.value.rows() ||
        shapes[i].at("cols").get<std::size_t>() != p.value.cols()) {
      throw IoError("checkpoint: parameter " + std::to_string(i) + " does not match the architecture");
    }
    for (double& v : p.value.values()) v = get_le<double>(bytes, pos);
    p.zero_grad();
  }
  if (pos != bytes.size()) throw IoError("checkpoint: trailing bytes after payload");
}

json spec_json(const GndSpec& s) {
  return {{"kind", aggregator_name(s.kind)}, {"input_dim", s.input_dim}, {"hidden", s.hidden},
          {"layers", s.layers},              {"heads", s.heads},         {"leaky_slope", s.leaky_slope},
          {"gin_epsilon", s.gin_epsilon},    {"dropout", s.dropout},     {"features", feature_mode_name(s.features)}};
}

GndSpec spec_from_json(const json& j) {
  GndSpec s;
  const auto kind = parse_aggregator(j.at("kind").get<std::string>());
  const auto features = parse_feature_mode(j.at("features").get<std::string>());
  if (!kind || !features) throw IoError("checkpoint: unknown model kind or feature mode");
  s.kind = *kind;
  s.features = *features;
  s.input_dim = j.at("input_dim").get<std::size_t>();
  s.hidden = j.at("hidden").get<std::size_t>();
  s.layers = j.at("layers").get<int>();
  s.heads = j.at("heads").get<int>();
  s.leaky_slope = j.at("leaky_slope").get<double>();
  s.gin_epsilon = j.at("gin_epsilon").get<double>();
  s.dropout = j.at("dropout").get<double>();
  return s;
}

json config_json(const TrainRunConfig& c) {
  return {{"task", task_name(c.task)},
          {"target", target_name(c.target)},
          {"learning_rate", c.learning_rate},
          {"batch_graphs", c.batch_graphs},
          {"epochs", c.epochs},
          {"patience", c.patience},
          {"seed", c.seed},
          {"lambda", c.lambda},
          {"aesthete_pairs", c.aesthete_pairs},
          {"pad_small_graphs", c.pad_small_graphs},
          {"model", spec_json(c.model)}};
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string encode_gnd_checkpoint(const GndModel& model, const TrainRunConfig* config) {
  if (model.empty()) throw std::invalid_argument("checkpoint: empty model");
  json header = {{"kind", "gnd"}, {"spec", spec_json(model.spec())}};
  if (config != nullptr) {
    header["config"] = config_json(*config);
    header["seed"] = config->seed;
  }
  return encode(std::move(header), model.parameters());
}

std::string encode_aesthete_checkpoint(const AestheteModel& model, std::uint64_t seed) {
  if (model.empty()) throw std::invalid_argument("checkpoint: empty model");
  json header = {{"kind", "aesthete"},
                 {"spec", {{"inputs", AestheteModel::kInputs}, {"hidden", AestheteModel::kHidden}}},
                 {"seed", seed}};
  return encode(std::move(header), model.parameters());
}

std::string checkpoint_kind(std::string_view bytes) {
  const Decoded d = decode_header(bytes);
  return d.header.value("kind", "");
}

LoadedGnd decode_gnd_checkpoint(std::string_view bytes) {
  const Decoded d = decode_header(bytes);
  if (d.header.value("kind", "") != "gnd") throw IoError("checkpoint: expected a gnd model");
  LoadedGnd out;
  try {
    out.model = GndModel(spec_from_json(d.header.at("spec")), 0);
    fill_parameters(d, bytes, out.model.parameters());
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint: malformed header: ") + e.what());
  }
  out.header_json = d.header.dump();
  return out;
}

AestheteModel decode_aesthete_checkpoint(std::string_view bytes) {
  const Decoded d = decode_header(bytes);
  if (d.header.value("kind", "") != "aesthete") throw IoError("checkpoint: expected an aesthete model");
  AestheteModel model(0);
  try {
    fill_parameters(d, bytes, model.parameters());
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint: malformed header: ") + e.what());
  }
  return model;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string train_config_json(const TrainRunConfig& cfg) { return config_json(cfg).dump(); }

std::string RunManifest::config_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : config) {
    for (char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  return hex16(h);
}

std::string RunManifest::to_json() const {
  json m = {{"command", command},
            {"config", config},
            {"config_hash", config_hash()},
            {"seeds", seeds},
            {"dataset_fingerprint", dataset_fingerprint.empty() ? json(nullptr) : json(dataset_fingerprint)}};
  json metric_obj = json::object();
  for (const auto& [k, v] : metrics) metric_obj[k] = std::isfinite(v) ? json(v) : json(nullptr);
  m["metrics"] = std::move(metric_obj);
  return m.dump();
}

std::string layout_json(const Layout& layout, std::optional<double> avg_stress, int crossings,
                        const RunManifest& manifest) {
  if (layout.cols() != 2) throw ShapeError("layout_json: layout must be N x 2");
  std::string out = "{\"n\":" + std::to_string(layout.rows()) + ",\"coords\":[";
  for (std::size_t i = 0; i < layout.rows(); ++i) {
    if (i > 0) out += ',';
    out += '[' + fmt17(layout(i, 0)) + ',' + fmt17(layout(i, 1)) + ']';
  }
  out += "],\"metrics\":{\"avg_stress\":";
  out += avg_stress && std::isfinite(*avg_stress) ? fmt17(*avg_stress) : "null";
  out += ",\"crossings\":" + std::to_string(crossings) + "},\"manifest\":" + manifest.to_json() + "}\n";
  return out;
}

Layout parse_layout_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    const auto n = j.at("n").get<std::size_t>();
    const json& coords = j.at("coords");
    if (coords.size() != n) throw IoError("layout json: coordinate count does not match n");
    Layout p(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      p(i, 0) = coords[i].at(0).get<double>();
      p(i, 1) = coords[i].at(1).get<double>();
    }
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("layout json: ") + e.what());
  }
}

std::string history_csv(std::span<const EpochRecord> history) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (const auto& h : history) {
    out += std::to_string(h.epoch) + ',' + fmt17(h.train_loss) + ',' + fmt17(h.val_loss) + '\n';
  }
  return out;
}

std::string trace_csv(std::span<const double> trace) {
  std::string out = "step,loss\n";
  for (std::size_t s = 0; s < trace.size(); ++s) out += std::to_string(s) + ',' + fmt17(trace[s]) + '\n';
  return out;
}

namespace {

std::string graph_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "graph_%05zu.txt", i);
  return buf;
}

}  // namespace

std::uint64_t dataset_fingerprint(const GraphDataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    std::uint64_t x = fingerprint(dataset.graphs[i]) ^ (static_cast<std::uint64_t>(dataset.splits[i]) << 62);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void write_dataset(const std::filesystem::path& dir, const GraphDataset& dataset) {
  if (dataset.graphs.size() != dataset.splits.size()) throw std::invalid_argument("write_dataset: split size mismatch");
  json files = json::array();
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    const std::string name = graph_file_name(i);
    write_file(dir / name, to_edge_list(dataset.graphs[i]));
    files.push_back(name);
  }
  json index = {{"count", dataset.graphs.size()},
                {"seed", dataset.seed},
                {"fingerprint", hex16(dataset_fingerprint(dataset))},
                {"files", std::move(files)}};
  for (Split s : {Split::Train, Split::Validation, Split::Test}) index[std::string(split_name(s))] = dataset.indices(s);
  write_file(dir / "splits.json", index.dump(1) + "\n");
}

GraphDataset read_dataset(const std::filesystem::path& dir) {
  GraphDataset ds;
  try {
    const json index = json::parse(read_file(dir / "splits.json"));
    const auto count = index.at("count").get<std::size_t>();
    ds.seed = index.value("seed", std::uint64_t{0});
    const json& files = index.at("files");
    if (files.size() != count) throw IoError("dataset: file list does not match count");
    ds.graphs.reserve(count);
    for (const auto& f : files) {
      const std::string name = f.get<std::string>();
      try {
        ds.graphs.push_back(load_edge_list(read_file(dir / name)).graph);
      } catch (const ParseError& e) {
        throw IoError("dataset: " + name + ": " + e.what());
      }
    }
    ds.splits.assign(count, Split::Train);
    std::vector<bool> seen(count, false);
    for (Split s : {Split::Train, Split::Validation, Split::Test}) {
      for (const auto& v : index.at(std::string(split_name(s)))) {
        const auto i = v.get<std::size_t>();
        if (i >= count || seen[i]) throw IoError("dataset: split index " + std::to_string(i) + " invalid");
        seen[i] = true;
        ds.splits[i] = s;
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (!seen[i]) throw IoError("dataset: graph " + std::to_string(i) + " has no split");
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("dataset: malformed splits.json: ") + e.what());
  }
  return ds;
}

std::map<std::string, std::string> parse_config(std::string_view text) {
  std::map<std::string, std::string> out;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace nd
