// Copyright 2026 The Stamp Authors
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


#include "stamp/harness.h"

#include <cmath>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "stamp/synthetic.h"

namespace stamp {
namespace {

size_t CountLines(const std::string& csv) {
  return std::vector<std::string>(absl::StrSplit(csv, '\n', absl::SkipEmpty()))
      .size();
}

TEST(SummarizeTest, MeanAndSampleStd) {
  const std::vector<double> values = {1.0, 2.0, 3.0, NAN};
  const MeanStd s = Summarize(values);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
  EXPECT_TRUE(std::isnan(Summarize(std::vector<double>{NAN}).mean));
  EXPECT_EQ(Summarize(std::vector<double>{4.0}).std, 0.0);
}

TEST(SweepGridTest, DefaultsAndJson) {
  const SweepGrid defaults;
  EXPECT_EQ(defaults.base_eps,
            (std::vector<double>{50, 100, 150, 200, 250}));
  const SweepGrid grid = *SweepGridFromJson(Json::parse(
      R"({"base_eps": [1, 2], "frameworks": ["stamp", "uniform"],
          "seeds": [9]})"));
  EXPECT_EQ(grid.base_eps, (std::vector<double>{1, 2}));
  EXPECT_EQ(grid.frameworks.size(), 2u);
  EXPECT_EQ(grid.seeds, std::vector<uint64_t>{9});
  EXPECT_EQ(grid.mechanisms, defaults.mechanisms);
  EXPECT_FALSE(SweepGridFromJson(Json::parse(R"({"base_eps": []})")).ok());
  EXPECT_FALSE(
      SweepGridFromJson(Json::parse(R"({"mechanisms": ["nope"]})")).ok());
}

TEST(RunSweepTest, OneRowPerConfiguration) {
  ClusteredStoreOptions layout;
  layout.clusters = 20;
  layout.dim = 16;
  const EmbeddingStore store = *MakeClusteredStore(layout);
  PlantedCorpusOptions planted;
  planted.corpus.documents = 4;
  planted.corpus.tokens_per_doc = 25;
  const std::vector<Document> docs = MakePlantedCorpus(store, layout, planted);
  SweepGrid grid;
  grid.seeds = {1, 2};
  const std::vector<SweepRow> rows =
      *RunSweep(RunConfig{}, grid, docs, store, RuleBasedDetector());
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].mechanism, MechanismKind::kNormalizedPolar);
  EXPECT_EQ(rows[5].mechanism, MechanismKind::kIsotropicLaplace);
  for (const SweepRow& row : rows) {
    EXPECT_EQ(row.seeds, 2u);
    EXPECT_EQ(row.group_counts[0] + row.group_counts[1] + row.group_counts[2] +
                  row.group_counts[3],
              100u);
    EXPECT_GE(row.self_recovery.mean, 0.0);
    EXPECT_LE(row.self_recovery.mean, 1.0);
  }
  const std::string csv = SweepRowsToCsv(rows);
  EXPECT_EQ(CountLines(csv), 11u);
  EXPECT_EQ(csv.substr(0, csv.find(',')), "framework");
}

TEST(RunSweepTest, UniformRowsShareTheStampBudget) {
  ClusteredStoreOptions layout;
  layout.clusters = 10;
  layout.dim = 8;
  const EmbeddingStore store = *MakeClusteredStore(layout);
  PlantedCorpusOptions planted;
  planted.corpus.documents = 3;
  planted.corpus.tokens_per_doc = 30;
  const std::vector<Document> docs = MakePlantedCorpus(store, layout, planted);
  SweepGrid grid;
  grid.base_eps = {50};
  grid.mechanisms = {MechanismKind::kNormalizedPolar};
  grid.frameworks = {Framework::kStamp, Framework::kUniform};
  grid.seeds = {1};
  const std::vector<SweepRow> rows =
      *RunSweep(RunConfig{}, grid, docs, store, RuleBasedDetector());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].eps_bar, rows[1].eps_bar, 1e-9);
  EXPECT_GT(rows[0].eps_bar, 50.0);
}

TEST(BenchTest, RecordsPerStage) {
  const EmbeddingStore store = *MakeGaussianStore(500, 8, 1);
  BenchOptions options;
  options.token_counts = {50, 100};
  options.repetitions = 1;
  const std::vector<BenchRecord> records = *RunPipelineBench(store, options);
  // grouping + (sampling, decoding) per mechanism, per token count.
  EXPECT_EQ(records.size(), 2u * (1 + 2 * options.mechanisms.size()));
  for (const BenchRecord& r : records) {
    EXPECT_GE(r.seconds, 0.0);
    EXPECT_EQ(r.vocab, 500u);
  }
  EXPECT_EQ(CountLines(BenchRecordsToCsv(records)), records.size() + 1);

  const std::vector<size_t> vocab_sizes = {100, 200};
  const auto scaling = *RunDecodeScalingBench(vocab_sizes, 8, 20, 1, 1);
  ASSERT_EQ(scaling.size(), 2u);
  EXPECT_EQ(scaling[1].vocab, 200u);
}

TEST(BenchTest, BackendRecall) {
  const EmbeddingStore store = *MakeGaussianStore(1000, 16, 2);
  const auto records = *RunBackendBench(store, 200, 10, 50.0, 3);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].backend, "exact");
  EXPECT_EQ(records[0].recall_at_1, 1.0);
  EXPECT_GT(records[1].recall_at_1, 0.9);
  EXPECT_EQ(CountLines(BackendRecordsToCsv(records)), 3u);
}

}  // namespace
}  // namespace stamp
