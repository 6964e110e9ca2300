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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "stamp/decoder.h"
#include "stamp/status_macros.h"
#include "stamp/synthetic.h"

namespace stamp {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

using Stage = std::function<absl::Status()>;

// Seconds per call of each stage. Every repetition samples all stages in
// turn, so slow drifts in machine speed hit each stage alike; a sample runs
// its stage until `min_seconds` has passed. One untimed call warms each
// stage up, and the minimum sample is reported.
absl::StatusOr<std::vector<double>> TimeInterleaved(
    std::span<const Stage> stages, int repetitions, double min_seconds) {
  for (const Stage& stage : stages) RETURN_IF_ERROR(stage());
  std::vector<double> best(stages.size(),
                           std::numeric_limits<double>::infinity());
  for (int rep = 0; rep < std::max(repetitions, 1); ++rep) {
    for (size_t s = 0; s < stages.size(); ++s) {
      const auto start = Clock::now();
      size_t calls = 0;
      double elapsed = 0.0;
      do {
        RETURN_IF_ERROR(stages[s]());
        ++calls;
        elapsed = SecondsSince(start);
      } while (elapsed < min_seconds);
      best[s] = std::min(best[s], elapsed / static_cast<double>(calls));
    }
  }
  return best;
}

template <typename T, typename Parse>
absl::Status ReadList(const Json& j, const char* key, std::vector<T>& out,
                      Parse parse) {
  if (!j.contains(key)) return absl::OkStatus();
  const Json& list = j[key];
  if (!list.is_array() || list.empty()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("grid key \"%s\" must be a nonempty array", key));
  }
  out.clear();
  for (const Json& item : list) {
    auto value = parse(item);
    if (!value.ok()) return value.status();
    out.push_back(*value);
  }
  return absl::OkStatus();
}

std::string Num(double x) {
  if (std::isnan(x)) return "nan";
  return absl::StrFormat("%.6g", x);
}

}  // namespace

absl::StatusOr<SweepGrid> SweepGridFromJson(const Json& j) {
  SweepGrid grid;
  try {
    RETURN_IF_ERROR(ReadList(j, "base_eps", grid.base_eps,
                             [](const Json& v) -> absl::StatusOr<double> {
                               return v.get<double>();
                             }));
    RETURN_IF_ERROR(ReadList(j, "mechanisms", grid.mechanisms,
                             [](const Json& v) {
                               return ParseMechanismKind(v.get<std::string>());
                             }));
    RETURN_IF_ERROR(ReadList(j, "frameworks", grid.frameworks,
                             [](const Json& v) {
                               return ParseFramework(v.get<std::string>());
                             }));
    RETURN_IF_ERROR(ReadList(j, "strategies", grid.strategies,
                             [](const Json& v) {
                               return ParseAllocationKind(v.get<std::string>());
                             }));
    RETURN_IF_ERROR(ReadList(j, "seeds", grid.seeds,
                             [](const Json& v) -> absl::StatusOr<uint64_t> {
                               return v.get<uint64_t>();
                             }));
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("grid: ", e.what()));
  }
  return grid;
}

MeanStd Summarize(std::span<const double> values) {
  std::vector<double> finite;
  for (double v : values) {
    if (!std::isnan(v)) finite.push_back(v);
  }
  if (finite.empty()) return {std::nan(""), std::nan("")};
  double mean = 0.0;
  for (double v : finite) mean += v;
  mean /= static_cast<double>(finite.size());
  if (finite.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : finite) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(finite.size() - 1))};
}

absl::StatusOr<std::vector<SweepRow>> RunSweep(
    const RunConfig& base, const SweepGrid& grid,
    std::span<const Document> docs, const EmbeddingStore& store,
    const SensitivityOracle& oracle, int workers) {
  if (docs.empty()) return absl::InvalidArgumentError("empty sweep corpus");
  if (grid.seeds.empty()) return absl::InvalidArgumentError("no sweep seeds");
  std::vector<SweepRow> rows;
  for (MechanismKind mechanism : grid.mechanisms) {
    for (Framework framework : grid.frameworks) {
      for (AllocationKind strategy : grid.strategies) {
        for (double base_eps : grid.base_eps) {
          RunConfig config = base;
          config.mechanism.kind = mechanism;
          config.framework = framework;
          config.strategy.kind = strategy;
          config.base_eps = base_eps;
          config.match_stamp_budget = framework == Framework::kUniform;

          SweepRow row;
          row.framework = framework;
          row.mechanism = mechanism;
          row.strategy = strategy;
          row.base_eps = base_eps;
          row.seeds = grid.seeds.size();
          std::vector<double> recovery, cosine, mask_rate, seconds;
          std::array<std::vector<double>, 4> group_recovery;
          for (size_t s = 0; s < grid.seeds.size(); ++s) {
            config.seed = grid.seeds[s];
            const auto start = Clock::now();
            ASSIGN_OR_RETURN(
                const std::vector<PrivatizedContext> contexts,
                PrivatizeCorpus(docs, store, oracle, config, workers));
            const double elapsed = SecondsSince(start);
            ASSIGN_OR_RETURN(const UtilityReport report,
                             EvaluateRun(contexts, store, config.mask_token));
            recovery.push_back(report.self_recovery);
            cosine.push_back(report.context_cosine);
            mask_rate.push_back(report.mask_rate);
            seconds.push_back(report.tokens == 0
                                  ? 0.0
                                  : elapsed / static_cast<double>(report.tokens));
            for (size_t g = 0; g < 4; ++g) {
              group_recovery[g].push_back(report.group_recovery[g]);
            }
            if (s == 0) {
              double total = 0.0;
              size_t count = 0;
              for (const PrivatizedContext& c : contexts) {
                for (double eps : c.receipt.per_token_eps) {
                  if (!std::isfinite(eps)) continue;
                  total += eps;
                  ++count;
                }
                for (size_t g = 0; g < 4; ++g) {
                  row.group_counts[g] += c.receipt.group_counts[g];
                }
              }
              row.eps_bar = count == 0 ? 0.0 : total / static_cast<double>(count);
            }
          }
          row.self_recovery = Summarize(recovery);
          row.context_cosine = Summarize(cosine);
          row.mask_rate = Summarize(mask_rate);
          row.seconds_per_token = Summarize(seconds);
          for (size_t g = 0; g < 4; ++g) {
            row.group_recovery[g] = Summarize(group_recovery[g]);
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::string SweepRowsToCsv(std::span<const SweepRow> rows) {
  std::string csv =
      "framework,mechanism,strategy,base_eps,eps_bar,g1_count,g2_count,"
      "g3_count,g4_count,self_recovery_mean,self_recovery_std";
  for (int g = 1; g <= 4; ++g) {
    absl::StrAppend(&csv, ",g", g, "_recovery_mean,g", g, "_recovery_std");
  }
  absl::StrAppend(&csv,
                  ",context_cosine_mean,context_cosine_std,mask_rate_mean,"
                  "mask_rate_std,seconds_per_token_mean,seconds_per_token_std,"
                  "seeds\n");
  for (const SweepRow& r : rows) {
    absl::StrAppend(&csv, FrameworkName(r.framework), ",",
                    MechanismKindName(r.mechanism), ",",
                    AllocationKindName(r.strategy), ",", Num(r.base_eps), ",",
                    Num(r.eps_bar));
    for (size_t g = 0; g < 4; ++g) absl::StrAppend(&csv, ",", r.group_counts[g]);
    absl::StrAppend(&csv, ",", Num(r.self_recovery.mean), ",",
                    Num(r.self_recovery.std));
    for (size_t g = 0; g < 4; ++g) {
      absl::StrAppend(&csv, ",", Num(r.group_recovery[g].mean), ",",
                      Num(r.group_recovery[g].std));
    }
    absl::StrAppend(&csv, ",", Num(r.context_cosine.mean), ",",
                    Num(r.context_cosine.std), ",", Num(r.mask_rate.mean), ",",
                    Num(r.mask_rate.std), ",", Num(r.seconds_per_token.mean),
                    ",", Num(r.seconds_per_token.std), ",", r.seeds, "\n");
  }
  return csv;
}

absl::StatusOr<std::vector<BenchRecord>> RunPipelineBench(
    const EmbeddingStore& store, const BenchOptions& options) {
  if (options.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be >= 1");
  }
  const RuleBasedDetector detector;
  ASSIGN_OR_RETURN(const ImportanceConfig importance,
                   ImportanceConfig::Create(0.5, store.unit_row(0)));
  std::vector<MechanismConfig> mechanisms;
  for (MechanismKind kind : options.mechanisms) {
    MechanismConfig mechanism;
    mechanism.kind = kind;
    if (kind == MechanismKind::kFullPolar) {
      mechanism.radial_epsilon = options.epsilon;
      mechanism.radial_sensitivity = 1.0;
    }
    mechanisms.push_back(mechanism);
  }

  struct Workload {
    std::vector<size_t> rows;
    std::vector<std::string> tokens;
    // Privatized vectors per mechanism, written by sampling, read by decoding.
    std::vector<std::vector<std::vector<double>>> outputs;
  };
  std::vector<Workload> workloads(options.token_counts.size());
  std::vector<Stage> stages;
  std::vector<BenchRecord> records;
  for (size_t w = 0; w < workloads.size(); ++w) {
    const size_t n = options.token_counts[w];
    Workload& load = workloads[w];
    RandomSource pick(options.seed, n);
    load.rows.resize(n);
    load.tokens.resize(n);
    for (size_t i = 0; i < n; ++i) {
      load.rows[i] = std::min(
          store.size() - 1, static_cast<size_t>(pick.Uniform01() * store.size()));
      load.tokens[i] = store.token(load.rows[i]);
    }
    load.outputs.assign(mechanisms.size(), std::vector<std::vector<double>>(n));
    auto add = [&](std::string stage, std::string mechanism, Stage run) {
      records.push_back(BenchRecord{std::move(stage), std::move(mechanism), n,
                                    store.size(), store.dim(), 0.0, 0.0});
      stages.push_back(std::move(run));
    };

    add("grouping", "-", [&store, &detector, &importance, &load]() -> absl::Status {
      const size_t count = load.rows.size();
      const std::vector<Span> spans = detector.DetectSpans(load.tokens);
      std::vector<bool> important(count);
      for (size_t i = 0; i < count; ++i) {
        ASSIGN_OR_RETURN(const ImportanceResult r,
                         ImportanceScore(store.unit_row(load.rows[i]), importance));
        important[i] = r.important;
      }
      if (AssignGroupLabels(count, spans, important).size() != count) {
        return absl::InternalError("label count");
      }
      return absl::OkStatus();
    });
    for (size_t m = 0; m < mechanisms.size(); ++m) {
      const std::string name(MechanismKindName(mechanisms[m].kind));
      add("sampling", name,
          [&store, &options, &mechanisms, &load, m]() -> absl::Status {
            for (size_t i = 0; i < load.rows.size(); ++i) {
              RandomSource rng(options.seed, i);
              ASSIGN_OR_RETURN(PrivatizedVector out,
                               Privatize(store.row(load.rows[i]), mechanisms[m],
                                         options.epsilon, rng));
              load.outputs[m][i] = std::move(out.components);
            }
            return absl::OkStatus();
          });
      add("decoding", name, [&store, &load, m]() -> absl::Status {
        for (const std::vector<double>& v : load.outputs[m]) {
          ASSIGN_OR_RETURN(const DecodeResult r, Decode(v, store));
          if (r.index >= store.size()) return absl::InternalError("decode");
        }
        return absl::OkStatus();
      });
    }
  }

  ASSIGN_OR_RETURN(const std::vector<double> seconds,
                   TimeInterleaved(stages, options.repetitions,
                                   options.min_sample_seconds));
  for (size_t s = 0; s < records.size(); ++s) {
    records[s].seconds = seconds[s];
    records[s].per_token_us =
        1e6 * seconds[s] / static_cast<double>(records[s].tokens);
  }
  return records;
}

absl::StatusOr<std::vector<BenchRecord>> RunDecodeScalingBench(
    std::span<const size_t> vocab_sizes, size_t dim, size_t queries,
    uint64_t seed, int repetitions, double min_sample_seconds) {
  RandomSource rng(seed, 0xdecu);
  std::vector<double> batch(queries * dim);
  for (double& x : batch) x = rng.Normal();
  std::vector<EmbeddingStore> stores;
  std::vector<Stage> stages;
  stores.reserve(vocab_sizes.size());
  for (size_t vocab : vocab_sizes) {
    ASSIGN_OR_RETURN(EmbeddingStore store,
                     MakeGaussianStore(vocab, dim, seed + vocab));
    stores.push_back(std::move(store));
  }
  for (const EmbeddingStore& store : stores) {
    stages.push_back([&batch, &store, queries]() -> absl::Status {
      ASSIGN_OR_RETURN(const std::vector<DecodeResult> results,
                       DecodeBatch(batch, store));
      if (results.size() != queries) return absl::InternalError("batch size");
      return absl::OkStatus();
    });
  }
  ASSIGN_OR_RETURN(
      const std::vector<double> seconds,
      TimeInterleaved(stages, repetitions, min_sample_seconds));
  std::vector<BenchRecord> records;
  for (size_t v = 0; v < stores.size(); ++v) {
    records.push_back(BenchRecord{"decode_scaling", "-", queries,
                                  vocab_sizes[v], dim, seconds[v],
                                  1e6 * seconds[v] / static_cast<double>(queries)});
  }
  return records;
}

std::string BenchRecordsToCsv(std::span<const BenchRecord> records) {
  std::string csv = "stage,mechanism,tokens,vocab,dim,seconds,per_token_us\n";
  for (const BenchRecord& r : records) {
    absl::StrAppend(&csv, r.stage, ",", r.mechanism, ",", r.tokens, ",",
                    r.vocab, ",", r.dim, ",", Num(r.seconds), ",",
                    Num(r.per_token_us), "\n");
  }
  return csv;
}

absl::StatusOr<std::vector<BackendRecord>> RunBackendBench(
    const EmbeddingStore& store, size_t queries, size_t k, double kappa,
    uint64_t seed) {
  if (queries == 0) return absl::InvalidArgumentError("no queries");
  RandomSource rng(seed, 0xbbu);
  std::vector<std::vector<double>> inputs(queries);
  std::vector<size_t> reference(queries);
  for (size_t q = 0; q < queries; ++q) {
    const size_t row = std::min(
        store.size() - 1, static_cast<size_t>(rng.Uniform01() * store.size()));
    inputs[q].resize(store.dim());
    SampleVmfInto(store.unit_row(row), kappa, rng, inputs[q]);
    ASSIGN_OR_RETURN(const DecodeResult exact, Decode(inputs[q], store));
    reference[q] = exact.index;
  }

  std::vector<std::unique_ptr<NearestNeighborBackend>> backends;
  backends.push_back(ExactBackend::Build(store));
  backends.push_back(Int8ScanBackend::Build(store));
  std::vector<BackendRecord> records;
  for (const auto& backend : backends) {
    size_t hits = 0;
    const auto start = Clock::now();
    for (size_t q = 0; q < queries; ++q) {
      ASSIGN_OR_RETURN(const DecodeResult r,
                       DecodeWithBackend(inputs[q], store, *backend, k));
      hits += r.index == reference[q];
    }
    const double secs = SecondsSince(start);
    records.push_back(BackendRecord{
        std::string(backend->name()), store.size(), store.dim(),
        secs > 0.0 ? static_cast<double>(queries) / secs : 0.0,
        static_cast<double>(hits) / static_cast<double>(queries)});
  }
  return records;
}

std::string BackendRecordsToCsv(std::span<const BackendRecord> records) {
  std::string csv = "backend,vocab,dim,queries_per_sec,recall_at_1\n";
  for (const BackendRecord& r : records) {
    absl::StrAppend(&csv, r.backend, ",", r.vocab, ",", r.dim, ",",
                    Num(r.queries_per_sec), ",", Num(r.recall_at_1), "\n");
  }
  return csv;
}

}  // namespace stamp
