//
// Copyright 2026 The mia-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "mia/experiment.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fake_server.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace mia {
namespace {

using ::mia::testing::MakeSample;

const std::string kDataDir = MIA_TEST_DATA_DIR;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ExperimentConfig GoldenConfig() {
  const nlohmann::json json =
      nlohmann::json::parse(ReadFile(kDataDir + "/golden20_config.json"));
  return ExperimentConfigFromJson(json, kDataDir).value();
}

std::string Csv(const SweepReport& report) {
  std::ostringstream out;
  EXPECT_TRUE(ReportCsv(report, out).ok());
  return out.str();
}

std::string Json(const SweepReport& report) {
  std::ostringstream out;
  EXPECT_TRUE(ReportJson(report, out).ok());
  return out.str();
}

TEST(ExperimentConfigTest, ParsesGoldenConfig) {
  const ExperimentConfig cfg = GoldenConfig();
  EXPECT_EQ(*cfg.input.jsonl_path, kDataDir + "/golden20.mia.jsonl");
  EXPECT_EQ(cfg.attacks.size(), 6u);
  EXPECT_EQ(cfg.sweep->k_grid, (std::vector<double>{0.2, 0.5}));
  EXPECT_EQ(cfg.sweep->w_grid, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(ExpandCells(cfg).size(), 12u);
}

TEST(ExperimentConfigTest, Errors) {
  auto kind_of = [](const char* text) {
    return ErrorKindOf(
        ExperimentConfigFromJson(nlohmann::json::parse(text)).status());
  };
  const char* base = R"("input":{"jsonl":"x"},"attacks":["loss"])";
  EXPECT_EQ(kind_of("[]"), ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of(R"({"attacks":["loss"]})"), ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of(R"({"input":{"jsonl":"x"},"attacks":["nope"]})"),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of(R"({"input":{"jsonl":"x"},"attacks":[]})"),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of(R"({"input":{"jsonl":"x"},
                        "attacks":[{"attack":"min_k","k":1.5}]})"),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of((std::string("{") + base +
                     R"(,"sweep":{"k_grid":[0.5,0.2]}})")
                        .c_str()),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of((std::string("{") + base + R"(,"sweep":{"w_grid":[]}})")
                        .c_str()),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of((std::string("{") + base + R"(,"parallelism":0})")
                        .c_str()),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of((std::string("{") + base + R"(,"parallelism":"x"})")
                        .c_str()),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of(R"({"input":{"jsonl":"x","endpoint":"https://h"},
                        "attacks":["loss"]})"),
            ErrorKind::kInvalidConfig);
}

// Expected CSV comes from the independent brute-force oracle in
// tests/oracles/golden_report.py.
TEST(RunExperimentTest, GoldenCsvAtEveryParallelism) {
  const std::string expected = ReadFile(kDataDir + "/golden20_report.csv");
  ASSERT_FALSE(expected.empty());
  for (int parallelism : {1, 4, 16}) {
    ExperimentConfig cfg = GoldenConfig();
    cfg.parallelism = parallelism;
    const SweepReport report = RunExperiment(cfg).value();
    EXPECT_EQ(Csv(report), expected) << "parallelism " << parallelism;
    EXPECT_EQ(report.scoring_calls, 20u * 12u);
  }
}

TEST(RunExperimentTest, StructuralProperties) {
  const SweepReport report = RunExperiment(GoldenConfig()).value();
  // win_k at w = 1 reproduces min_k cell for cell.
  for (const SweepCell& win : report.cells) {
    if (win.attack.attack != AttackKind::kWinK || win.attack.w != 1) continue;
    for (const SweepCell& min : report.cells) {
      if (min.attack.attack == AttackKind::kMinK && min.attack.k == win.attack.k) {
        EXPECT_EQ(min.metrics, win.metrics);
      }
    }
  }
  ASSERT_EQ(report.best.size(), 6u);
  for (const BestCell& best : report.best) {
    const SweepCell& chosen = report.cells[best.cell];
    EXPECT_EQ(chosen.attack.attack, best.attack);
    for (const SweepCell& cell : report.cells) {
      if (cell.attack.attack == best.attack) {
        EXPECT_GE(chosen.metrics.auroc, cell.metrics.auroc);
      }
    }
  }
  // win_k peaks at (w = 3, k = 0.2) in the golden table.
  const SweepCell& best_win = report.cells[report.best.back().cell];
  EXPECT_EQ(best_win.attack.w, 3);
  EXPECT_EQ(best_win.attack.k, 0.2);
}

TEST(RunExperimentTest, WithoutSweepUsesConfiguredParameters) {
  ExperimentConfig cfg = GoldenConfig();
  cfg.sweep.reset();
  const SweepReport report = RunExperiment(cfg).value();
  ASSERT_EQ(report.cells.size(), 6u);
  EXPECT_EQ(report.scoring_calls, 120u);
}

TEST(SelectBestCellsTest, TiesPreferSmallerParameters) {
  std::vector<SweepCell> cells(3);
  for (auto& cell : cells) {
    cell.attack.attack = AttackKind::kWinK;
    cell.metrics.auroc = 0.8;
  }
  cells[0].attack.w = 4;
  cells[0].attack.k = 0.1;
  cells[1].attack.w = 2;
  cells[1].attack.k = 0.5;
  cells[2].attack.w = 2;
  cells[2].attack.k = 0.3;
  const auto best = SelectBestCells(cells);
  ASSERT_EQ(best.size(), 1u);
  EXPECT_EQ(best[0].cell, 2u);
}

TEST(ReportTest, JsonRoundTripIsByteIdentical) {
  const SweepReport report = RunExperiment(GoldenConfig()).value();
  const std::string json = Json(report);
  std::istringstream in(json);
  const SweepReport parsed = ParseReportJson(in).value();
  EXPECT_EQ(parsed, report);
  EXPECT_EQ(Json(parsed), json);
  EXPECT_EQ(Csv(parsed), Csv(report));
}

TEST(ReportTest, JsonShape) {
  const SweepReport report = RunExperiment(GoldenConfig()).value();
  const nlohmann::json json = nlohmann::json::parse(Json(report));
  EXPECT_EQ(json["scoring_calls"], 240);
  const nlohmann::json& loss = json["cells"][0];
  EXPECT_EQ(loss["attack"], "loss");
  EXPECT_TRUE(loss["k"].is_null());
  EXPECT_TRUE(loss["w"].is_null());
  EXPECT_DOUBLE_EQ(loss["auroc"].get<double>(), 0.765);
  EXPECT_DOUBLE_EQ(loss["tpr_at_fpr"]["0.01"].get<double>(), 0.3);
  EXPECT_DOUBLE_EQ(loss["fpr_at_tpr"]["0.99"].get<double>(), 1.0);
}

TEST(ReportTest, TableMarksBestCells) {
  const SweepReport report = RunExperiment(GoldenConfig()).value();
  std::ostringstream out;
  ASSERT_TRUE(ReportTable(report, out).ok());
  const std::string table = out.str();
  EXPECT_NE(table.find("76.5%"), std::string::npos);
  size_t stars = 0;
  for (char c : table) stars += c == '*';
  EXPECT_GE(stars, 6u);
}

TEST(ReportTest, MalformedJson) {
  std::istringstream in(R"({"cells":[{"attack":"zzz"}]})");
  EXPECT_FALSE(ParseReportJson(in).ok());
  std::istringstream garbage("not json");
  EXPECT_FALSE(ParseReportJson(garbage).ok());
}

TEST(RunExperimentTest, UnknownLabelIsRejected) {
  ExperimentConfig cfg;
  cfg.attacks = {{.attack = AttackKind::kLoss}};
  const std::vector<ScoredSample> samples = {
      MakeSample({-1.0}, "a", Label::kMember),
      MakeSample({-2.0}, "b", Label::kUnknown)};
  const auto out = RunExperimentOnSamples(cfg, samples);
  EXPECT_EQ(ErrorKindOf(out.status()), ErrorKind::kSchemaError);
  EXPECT_NE(out.status().message().find("'b'"), std::string::npos);
}

TEST(RunExperimentTest, SampleErrorNamesTheSample) {
  ExperimentConfig cfg;
  cfg.attacks = {{.attack = AttackKind::kLowercase}};
  cfg.parallelism = 4;
  const std::vector<ScoredSample> samples = {
      MakeSample({-1.0}, "first", Label::kMember),
      MakeSample({-2.0}, "second", Label::kNonmember)};
  const auto out = RunExperimentOnSamples(cfg, samples);
  EXPECT_EQ(ErrorKindOf(out.status()), ErrorKind::kMissingAux);
  EXPECT_NE(out.status().message().find("'first'"), std::string::npos);
}

TEST(RunExperimentTest, DegenerateLabels) {
  ExperimentConfig cfg;
  cfg.attacks = {{.attack = AttackKind::kLoss}};
  const auto out = RunExperimentOnSamples(
      cfg, {MakeSample({-1.0}, "a", Label::kMember)});
  EXPECT_EQ(ErrorKindOf(out.status()), ErrorKind::kDegenerateLabels);
}

TEST(RunExperimentTest, NullSyntheticHasNoSignal) {
  ExperimentConfig cfg;
  cfg.input.synthetic = NullSynthConfig(7);
  for (AttackKind kind : kAllAttacks) cfg.attacks.push_back({.attack = kind});
  cfg.parallelism = 4;
  const SweepReport report = RunExperiment(cfg).value();
  ASSERT_EQ(report.cells.size(), 6u);
  for (const SweepCell& cell : report.cells) {
    EXPECT_GE(cell.metrics.auroc, 0.45) << AttackName(cell.attack.attack);
    EXPECT_LE(cell.metrics.auroc, 0.55) << AttackName(cell.attack.attack);
  }
}

TEST(RunExperimentTest, EnrichesThroughEndpoint) {
  testing::FakeScoringServer server;
  SynthConfig synth;
  synth.n_members = 5;
  synth.n_nonmembers = 5;
  synth.seq_len = 8;
  // Strip the aux sequences so they must come from the endpoint.
  const std::vector<ScoredSample> samples = GenerateSynthetic(synth).value();
  std::vector<ScoredSample> bare;
  for (const ScoredSample& s : samples) {
    ScoredSample::Fields fields = s.fields();
    fields.lowercase_logprobs.reset();
    fields.neighbor_logprobs.reset();
    bare.push_back(MakeSample(fields));
  }
  const std::string path =
      ::testing::TempDir() + "/enrich_input" + std::string(kDumpExtension);
  ASSERT_TRUE(WriteJsonlFile(bare, path).ok());

  ExperimentConfig cfg;
  cfg.input.jsonl_path = path;
  ScoringEndpoint endpoint;
  endpoint.base_url = server.url();
  endpoint.retry.backoff_base = std::chrono::milliseconds(1);
  cfg.input.endpoint = endpoint;
  cfg.attacks = {{.attack = AttackKind::kLowercase},
                 {.attack = AttackKind::kNeighborhood, .n_neighbors = 2}};
  const SweepReport report = RunExperiment(cfg).value();
  EXPECT_EQ(server.requests(), 10 * 3);
  EXPECT_EQ(report.cells.size(), 2u);
  EXPECT_EQ(report.scoring_calls, 20u);

  int n_neighbors = 0;
  const EnrichNeeds needs = NeedsFor(cfg.attacks, &n_neighbors);
  EXPECT_TRUE(needs.lowercase && needs.neighbors);
  EXPECT_EQ(n_neighbors, 2);
}

}  // namespace
}  // namespace mia
