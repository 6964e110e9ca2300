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

#ifndef STAMP_HARNESS_H_
#define STAMP_HARNESS_H_

// Privacy/utility sweeps over budget grids and timing benchmarks.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "stamp/pipeline.h"
#include "stamp/pipeline_io.h"

namespace stamp {

struct SweepGrid {
  // Defaults: the five base budgets of the reference offset table, Polar and
  // Laplace, three seeds.
  std::vector<double> base_eps = {50.0, 100.0, 150.0, 200.0, 250.0};
  std::vector<MechanismKind> mechanisms = {MechanismKind::kNormalizedPolar,
                                           MechanismKind::kIsotropicLaplace};
  std::vector<Framework> frameworks = {Framework::kStamp};
  std::vector<AllocationKind> strategies = {AllocationKind::kOffset};
  std::vector<uint64_t> seeds = {1, 2, 3};
};

// Keys: base_eps, mechanisms, frameworks, strategies, seeds. Missing keys keep
// the defaults.
absl::StatusOr<SweepGrid> SweepGridFromJson(const Json& j);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across seeds
};

MeanStd Summarize(std::span<const double> values);

struct SweepRow {
  Framework framework = Framework::kStamp;
  MechanismKind mechanism = MechanismKind::kNormalizedPolar;
  AllocationKind strategy = AllocationKind::kOffset;
  double base_eps = 0.0;
  // Corpus-level mean per-token budget (finite budgets only).
  double eps_bar = 0.0;
  std::array<size_t, 4> group_counts = {0, 0, 0, 0};
  MeanStd self_recovery;
  std::array<MeanStd, 4> group_recovery;
  MeanStd context_cosine;
  MeanStd mask_rate;
  MeanStd seconds_per_token;
  size_t seeds = 0;
};

// One aggregate row per (mechanism, framework, strategy, base_eps), with
// metrics averaged over the grid's seeds. Uniform rows spend the same total
// budget as the matching stamp allocation on every document.
absl::StatusOr<std::vector<SweepRow>> RunSweep(
    const RunConfig& base, const SweepGrid& grid,
    std::span<const Document> docs, const EmbeddingStore& store,
    const SensitivityOracle& oracle, int workers = 1);

std::string SweepRowsToCsv(std::span<const SweepRow> rows);

inline constexpr double kDefaultMinSampleSeconds = 0.02;

struct BenchOptions {
  size_t dim = 64;
  size_t vocab = 10000;
  std::vector<size_t> token_counts = {1000, 2000, 4000};
  std::vector<MechanismKind> mechanisms = {MechanismKind::kNormalizedPolar,
                                           MechanismKind::kIsotropicLaplace};
  double epsilon = 300.0;
  uint64_t seed = 1;
  // Each timing is the minimum over this many samples. Samples of all stages
  // and token counts are interleaved, and each one repeats its stage until
  // `min_sample_seconds` of wall time has passed.
  int repetitions = 3;
  double min_sample_seconds = kDefaultMinSampleSeconds;
};

struct BenchRecord {
  std::string stage;  // grouping | sampling | decoding
  std::string mechanism;
  size_t tokens = 0;
  size_t vocab = 0;
  size_t dim = 0;
  double seconds = 0.0;
  double per_token_us = 0.0;
};

// Per-stage wall clock for privatizing `tokens` tokens against `store`.
absl::StatusOr<std::vector<BenchRecord>> RunPipelineBench(
    const EmbeddingStore& store, const BenchOptions& options);

// Exact batch decode time for `queries` random queries at each vocabulary
// size (Gaussian stores of dimension `dim`).
absl::StatusOr<std::vector<BenchRecord>> RunDecodeScalingBench(
    std::span<const size_t> vocab_sizes, size_t dim, size_t queries,
    uint64_t seed, int repetitions = 3,
    double min_sample_seconds = kDefaultMinSampleSeconds);

std::string BenchRecordsToCsv(std::span<const BenchRecord> records);

struct BackendRecord {
  std::string backend;
  size_t vocab = 0;
  size_t dim = 0;
  double queries_per_sec = 0.0;
  double recall_at_1 = 0.0;
};

// Decodes `queries` perturbed vocabulary rows through each backend with
// candidate budget k and measures recall@1 against exact search.
absl::StatusOr<std::vector<BackendRecord>> RunBackendBench(
    const EmbeddingStore& store, size_t queries, size_t k, double kappa,
    uint64_t seed);

std::string BackendRecordsToCsv(std::span<const BackendRecord> records);

}  // namespace stamp

#endif  // STAMP_HARNESS_H_
