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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "json.hpp"
#include "neural_drawer/errors.hpp"
#include "neural_drawer/svg.hpp"

namespace nd {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nd_serialization_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool same_parameters(std::span<const ad::Parameter> a, std::span<const ad::Parameter> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || !(a[i].value == b[i].value)) return false;
  }
  return true;
}

class GndCheckpointTest : public ::testing::TestWithParam<Aggregator> {};

TEST_P(GndCheckpointTest, RoundTripIsBitExact) {
  GndSpec spec;
  spec.kind = GetParam();
  spec.hidden = 6;
  spec.input_dim = 3;
  spec.dropout = 0.25;
  const GndModel model(spec, 42);
  const std::string bytes = encode_gnd_checkpoint(model);
  EXPECT_EQ(checkpoint_kind(bytes), "gnd");
  const LoadedGnd back = decode_gnd_checkpoint(bytes);
  EXPECT_EQ(back.model.spec().kind, spec.kind);
  EXPECT_EQ(back.model.spec().hidden, 6u);
  EXPECT_EQ(back.model.spec().input_dim, 3u);
  EXPECT_EQ(back.model.spec().dropout, 0.25);
  EXPECT_TRUE(same_parameters(model.parameters(), back.model.parameters()));
  EXPECT_EQ(encode_gnd_checkpoint(back.model), bytes);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, GndCheckpointTest,
                         ::testing::Values(Aggregator::GCN, Aggregator::GAT, Aggregator::GIN, Aggregator::MLP),
                         [](const auto& info) { return std::string(aggregator_name(info.param)); });

TEST(CheckpointTest, AestheteRoundTrip) {
  const AestheteModel model(9);
  const std::string bytes = encode_aesthete_checkpoint(model, 9);
  EXPECT_EQ(checkpoint_kind(bytes), "aesthete");
  const AestheteModel back = decode_aesthete_checkpoint(bytes);
  EXPECT_TRUE(same_parameters(model.parameters(), back.parameters()));
}

TEST(CheckpointTest, HeaderCarriesTrainingConfig) {
  TrainRunConfig cfg;
  cfg.model.hidden = 5;
  cfg.seed = 17;
  const GndModel model(cfg.model, 1);
  const LoadedGnd back = decode_gnd_checkpoint(encode_gnd_checkpoint(model, &cfg));
  const auto header = nlohmann::json::parse(back.header_json);
  EXPECT_EQ(header.at("format_version").get<int>(), 1);
  EXPECT_NE(back.header_json.find("17"), std::string::npos);
}

TEST(CheckpointTest, RejectsCorruptInput) {
  const GndModel model(GndSpec{}, 3);
  const std::string good = encode_gnd_checkpoint(model);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_gnd_checkpoint(bad_magic), IoError);

  std::string bad_version = good;
  bad_version[4] = 7;
  try {
    decode_gnd_checkpoint(bad_version);
    FAIL() << "version mismatch accepted";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }

  EXPECT_THROW(decode_gnd_checkpoint(good.substr(0, good.size() - 1)), IoError);
  EXPECT_THROW(decode_gnd_checkpoint(good.substr(0, 10)), IoError);
  EXPECT_THROW(decode_gnd_checkpoint(good + "x"), IoError);
  EXPECT_THROW(decode_gnd_checkpoint(""), IoError);
}

TEST(CheckpointTest, RejectsKindMismatch) {
  const std::string aes = encode_aesthete_checkpoint(AestheteModel(1));
  const std::string gnd = encode_gnd_checkpoint(GndModel(GndSpec{}, 1));
  EXPECT_THROW(decode_gnd_checkpoint(aes), IoError);
  EXPECT_THROW(decode_aesthete_checkpoint(gnd), IoError);
}

TEST(LayoutJsonTest, ParsesBackExactly) {
  Layout p(3, 2);
  p(0, 0) = 0.1;
  p(0, 1) = -1.0 / 3.0;
  p(1, 0) = 1e-300;
  p(1, 1) = 12345.678901234567;
  p(2, 0) = std::nextafter(1.0, 2.0);
  p(2, 1) = -0.0;
  RunManifest m;
  m.command = "draw";
  m.config = {{"method", "spectral"}};
  m.seeds = {4};
  const std::string text = layout_json(p, 0.25, 2, m);
  EXPECT_EQ(parse_layout_json(text), p);

  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("n").get<int>(), 3);
  EXPECT_EQ(j.at("metrics").at("crossings").get<int>(), 2);
  EXPECT_DOUBLE_EQ(j.at("metrics").at("avg_stress").get<double>(), 0.25);
  const auto& man = j.at("manifest");
  for (const char* key : {"command", "config", "config_hash", "seeds", "dataset_fingerprint", "metrics"}) {
    EXPECT_TRUE(man.contains(key)) << key;
  }
  EXPECT_EQ(man.at("config").at("method"), "spectral");
}

TEST(LayoutJsonTest, MissingStressIsNull) {
  const auto j = nlohmann::json::parse(layout_json(Layout(1, 2), std::nullopt, 0, RunManifest{}));
  EXPECT_TRUE(j.at("metrics").at("avg_stress").is_null());
}

TEST(LayoutJsonTest, RejectsMalformedText) {
  EXPECT_THROW(parse_layout_json("{"), IoError);
  EXPECT_THROW(parse_layout_json(R"({"n":2,"coords":[[0,0]]})"), IoError);
}

TEST(CsvTest, Headers) {
  const std::vector<EpochRecord> h{{1, 0.5, 0.75}, {2, 0.25, 0.5}};
  const std::string csv = history_csv(h);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,train_loss,val_loss");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("2,0.25,0.5"), std::string::npos);

  const std::vector<double> trace{3.0, 2.0};
  EXPECT_EQ(trace_csv(trace), "step,loss\n0,3\n1,2\n");
}

TEST(DatasetIoTest, RoundTripAndDeterminism) {
  const GraphDataset ds = build_sparse_dataset(25, 3);
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  write_dataset(a, ds);
  write_dataset(b, build_sparse_dataset(25, 3));
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const fs::path twin = b / entry.path().filename();
    ASSERT_TRUE(fs::exists(twin));
    EXPECT_EQ(read_file(entry.path()), read_file(twin)) << entry.path();
  }
  EXPECT_EQ(files, 26u);

  const GraphDataset back = read_dataset(a);
  ASSERT_EQ(back.graphs.size(), ds.graphs.size());
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) EXPECT_TRUE(back.graphs[i] == ds.graphs[i]);
  EXPECT_EQ(back.splits, ds.splits);
  EXPECT_EQ(dataset_fingerprint(back), dataset_fingerprint(ds));
  EXPECT_NE(dataset_fingerprint(build_sparse_dataset(25, 4)), dataset_fingerprint(ds));
}

TEST(DatasetIoTest, MissingDirectoryThrows) {
  EXPECT_THROW(read_dataset(fs::temp_directory_path() / "nd_no_such_dataset"), IoError);
}

TEST(ConfigTest, ParsesKeyValues) {
  const auto cfg = parse_config("# comment\n\nlr = 0.01\n  epochs=5  # trailing\nmodel=gat\n");
  EXPECT_EQ(cfg.size(), 3u);
  EXPECT_EQ(cfg.at("lr"), "0.01");
  EXPECT_EQ(cfg.at("model"), "gat");
}

TEST(ConfigTest, ErrorsNameTheLine) {
  try {
    parse_config("a=1\n\nno equals sign\n");
    FAIL() << "accepted a line without '='";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_config("=value\n"), ParseError);
}

TEST(ManifestTest, ConfigHashIsStableAndSensitive) {
  RunManifest a;
  a.config = {{"lr", "0.01"}, {"seed", "1"}};
  RunManifest b = a;
  EXPECT_EQ(a.config_hash(), b.config_hash());
  EXPECT_EQ(a.config_hash().size(), 16u);
  b.config["seed"] = "2";
  EXPECT_NE(a.config_hash(), b.config_hash());
  RunManifest empty;
  EXPECT_EQ(empty.config_hash(), "cbf29ce484222325");
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(SvgTest, SingleNode) {
  const std::string svg = render_svg(Layout(1, 2), Graph(1, {}));
  EXPECT_EQ(count_of(svg, "<circle"), 1u);
  EXPECT_EQ(count_of(svg, "<line"), 0u);
  EXPECT_NE(svg.find("viewBox"), std::string::npos);
}

TEST(SvgTest, PathHasCirclesAndLines) {
  Layout p(3, 2);
  p(1, 0) = 1.0;
  p(2, 0) = 2.0;
  p(2, 1) = 1.0;
  const Graph g = path_graph(3);
  const std::string svg = render_svg(p, g);
  EXPECT_EQ(count_of(svg, "<circle"), 3u);
  EXPECT_EQ(count_of(svg, "<line"), 2u);
  EXPECT_EQ(svg, render_svg(p, g));
  EXPECT_LT(svg.find("<line"), svg.find("<circle"));
}

TEST(SvgTest, RejectsNonFinite) {
  Layout p(2, 2);
  p(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(render_svg(p, path_graph(2)), std::invalid_argument);
}

}  // namespace
}  // namespace nd
