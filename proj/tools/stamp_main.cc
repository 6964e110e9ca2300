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


// Command-line front end: privatize, sweep, bench, inspect and synth.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "stamp/embedding_store.h"
#include "stamp/grouping.h"
#include "stamp/harness.h"
#include "stamp/pipeline.h"
#include "stamp/pipeline_io.h"
#include "stamp/status_macros.h"
#include "stamp/synthetic.h"

namespace stamp {
namespace {

struct CommonFlags {
  std::string config_path;
  std::string embeddings;
  std::string cache;
  bool lowercase = false;
  std::vector<std::string> gazetteers;  // category=path
  int workers = 1;
};

absl::Status WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) return absl::UnavailableError(absl::StrFormat("cannot write %s", path));
  return absl::OkStatus();
}

absl::StatusOr<Json> LoadConfigJson(const std::string& path) {
  if (path.empty()) return Json::object();
  return ReadJsonFile(path);
}

// Flags win over the config file's "embeddings" / "corpus" keys.
std::string PathFrom(const std::string& flag, const Json& config,
                     const char* key) {
  if (!flag.empty()) return flag;
  return config.value(key, std::string());
}

absl::StatusOr<EmbeddingStore> LoadStore(const CommonFlags& flags,
                                         const Json& config) {
  const std::string path = PathFrom(flags.embeddings, config, "embeddings");
  if (path.empty()) {
    return absl::InvalidArgumentError(
        "no embeddings given (--embeddings or \"embeddings\" in the config)");
  }
  LoadOptions options;
  options.lowercase = flags.lowercase || config.value("lowercase", false);
  if (!flags.cache.empty()) {
    return LoadEmbeddingsWithCache(path, flags.cache, options);
  }
  return LoadTextEmbeddings(path, options);
}

absl::StatusOr<RuleBasedDetector> BuildDetector(const CommonFlags& flags) {
  Gazetteers gazetteers;
  for (const std::string& entry : flags.gazetteers) {
    std::pair<std::string, std::string> parts =
        absl::StrSplit(entry, absl::MaxSplits('=', 1));
    if (parts.second.empty()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "--gazetteer expects category=path, got \"%s\"", entry));
    }
    RETURN_IF_ERROR(gazetteers.LoadFile(parts.first, parts.second));
  }
  return RuleBasedDetector(std::move(gazetteers));
}

absl::StatusOr<RunConfig> LoadRunConfig(const Json& config) {
  ASSIGN_OR_RETURN(RunConfig run, RunConfigFromJson(config));
  RETURN_IF_ERROR(ApplyEnvironmentOverrides(run));
  return run;
}

absl::Status Privatize(const CommonFlags& flags, const std::string& in,
                       const std::string& out) {
  ASSIGN_OR_RETURN(const Json config, LoadConfigJson(flags.config_path));
  ASSIGN_OR_RETURN(const RunConfig run, LoadRunConfig(config));
  ASSIGN_OR_RETURN(const EmbeddingStore store, LoadStore(flags, config));
  ASSIGN_OR_RETURN(const RuleBasedDetector detector, BuildDetector(flags));
  const std::string corpus = PathFrom(in, config, "corpus");
  ASSIGN_OR_RETURN(const std::vector<Document> docs, ReadDocuments(corpus));
  ASSIGN_OR_RETURN(const std::vector<PrivatizedContext> contexts,
                   PrivatizeCorpus(docs, store, detector, run, flags.workers));
  RETURN_IF_ERROR(WriteContexts(contexts, out));
  ASSIGN_OR_RETURN(const UtilityReport report,
                   EvaluateRun(contexts, store, run.mask_token));
  std::fprintf(stderr,
               "privatized %zu documents, %zu tokens: self-recovery %.4f, "
               "context cosine %.4f, mask rate %.4f\n",
               report.documents, report.tokens, report.self_recovery,
               report.context_cosine, report.mask_rate);
  return absl::OkStatus();
}

absl::Status Sweep(const CommonFlags& flags, const std::string& grid_path,
                   const std::string& in, const std::string& out) {
  ASSIGN_OR_RETURN(const Json config, LoadConfigJson(flags.config_path));
  ASSIGN_OR_RETURN(const RunConfig run, LoadRunConfig(config));
  ASSIGN_OR_RETURN(const EmbeddingStore store, LoadStore(flags, config));
  ASSIGN_OR_RETURN(const RuleBasedDetector detector, BuildDetector(flags));
  SweepGrid grid;
  if (!grid_path.empty()) {
    ASSIGN_OR_RETURN(const Json grid_json, ReadJsonFile(grid_path));
    ASSIGN_OR_RETURN(grid, SweepGridFromJson(grid_json));
  }
  const std::string corpus = PathFrom(in, config, "corpus");
  ASSIGN_OR_RETURN(const std::vector<Document> docs, ReadDocuments(corpus));
  ASSIGN_OR_RETURN(const std::vector<SweepRow> rows,
                   RunSweep(run, grid, docs, store, detector, flags.workers));
  return WriteText(out, SweepRowsToCsv(rows));
}

struct BenchFlags {
  std::string embeddings;
  size_t vocab = 10000;
  size_t dim = 64;
  std::vector<size_t> tokens = {1000, 2000, 4000};
  std::vector<std::string> mechanisms = {"normalized_polar",
                                         "isotropic_laplace"};
  double epsilon = 300.0;
  int repetitions = 3;
  double min_sample_seconds = kDefaultMinSampleSeconds;
  uint64_t seed = 1;
  std::vector<size_t> decode_vocab = {1000, 10000, 100000};
  size_t decode_queries = 200;
  size_t backend_queries = 10000;
  size_t backend_k = 10;
  std::string out;
  std::string backend_out;
};

absl::Status Bench(const BenchFlags& flags) {
  ASSIGN_OR_RETURN(const EmbeddingStore store,
                   flags.embeddings.empty()
                       ? MakeGaussianStore(flags.vocab, flags.dim, flags.seed)
                       : LoadTextEmbeddings(flags.embeddings));
  BenchOptions options;
  options.dim = store.dim();
  options.vocab = store.size();
  options.token_counts = flags.tokens;
  options.mechanisms.clear();
  for (const std::string& name : flags.mechanisms) {
    ASSIGN_OR_RETURN(MechanismKind kind, ParseMechanismKind(name));
    options.mechanisms.push_back(kind);
  }
  options.epsilon = flags.epsilon;
  options.seed = flags.seed;
  options.repetitions = flags.repetitions;
  options.min_sample_seconds = flags.min_sample_seconds;
  ASSIGN_OR_RETURN(std::vector<BenchRecord> records,
                   RunPipelineBench(store, options));
  if (!flags.decode_vocab.empty()) {
    ASSIGN_OR_RETURN(std::vector<BenchRecord> scaling,
                     RunDecodeScalingBench(flags.decode_vocab, store.dim(),
                                           flags.decode_queries, flags.seed,
                                           flags.repetitions,
                                           flags.min_sample_seconds));
    records.insert(records.end(), scaling.begin(), scaling.end());
  }
  RETURN_IF_ERROR(WriteText(flags.out, BenchRecordsToCsv(records)));
  if (flags.backend_queries > 0) {
    ASSIGN_OR_RETURN(const std::vector<BackendRecord> backends,
                     RunBackendBench(store, flags.backend_queries,
                                     flags.backend_k, flags.epsilon,
                                     flags.seed));
    RETURN_IF_ERROR(WriteText(flags.backend_out, BackendRecordsToCsv(backends)));
  }
  return absl::OkStatus();
}

absl::Status Inspect(const std::string& in) {
  ASSIGN_OR_RETURN(const std::vector<Json> lines, ReadJsonLines(in));
  std::array<size_t, 4> counts = {0, 0, 0, 0};
  double total_eps = 0.0;
  size_t tokens = 0, masked = 0, void_docs = 0;
  try {
    for (const Json& line : lines) {
      const Json& receipt = line.at("receipt");
      for (size_t g = 0; g < 4; ++g) {
        counts[g] += receipt.at("group_counts").at(g).get<size_t>();
      }
      for (const Json& eps : receipt.at("per_token_eps")) {
        if (eps.is_number()) total_eps += eps.get<double>();
        ++tokens;
      }
      masked += receipt.at("masked_positions").size();
      void_docs += receipt.at("guarantee_void").get<bool>();
    }
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(absl::StrFormat("%s: %s", in, e.what()));
  }
  std::printf("documents        %zu\n", lines.size());
  std::printf("tokens           %zu\n", tokens);
  for (size_t g = 0; g < 4; ++g) {
    std::printf("group %zu          %zu (%.1f%%)\n", g + 1, counts[g],
                tokens == 0 ? 0.0 : 100.0 * counts[g] / tokens);
  }
  std::printf("mean eps         %.4f\n",
              tokens == 0 ? 0.0 : total_eps / static_cast<double>(tokens));
  std::printf("masked           %zu\n", masked);
  std::printf("guarantee void   %zu documents\n", void_docs);
  return absl::OkStatus();
}

struct SynthFlags {
  std::string embeddings_out;
  std::string corpus_out;
  std::string corpus_kind = "planted";
  ClusteredStoreOptions layout;
  PlantedCorpusOptions planted;
};

absl::Status Synth(const SynthFlags& flags) {
  ASSIGN_OR_RETURN(const EmbeddingStore store, MakeClusteredStore(flags.layout));
  if (!flags.embeddings_out.empty()) {
    RETURN_IF_ERROR(WriteTextEmbeddings(store, flags.embeddings_out));
  }
  if (!flags.corpus_out.empty()) {
    std::vector<Document> docs;
    if (flags.corpus_kind == "planted") {
      docs = MakePlantedCorpus(store, flags.layout, flags.planted);
    } else if (flags.corpus_kind == "uniform") {
      docs = MakeUniformCorpus(store, flags.planted.corpus);
    } else {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown corpus kind \"%s\"", flags.corpus_kind));
    }
    RETURN_IF_ERROR(WriteDocuments(docs, flags.corpus_out));
  }
  return absl::OkStatus();
}

void AddCommonFlags(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config_path, "Run config JSON");
  app->add_option("--embeddings", flags.embeddings,
                  "Text embeddings (token v1 ... vd per line)");
  app->add_option("--cache", flags.cache, "Binary cache for the embeddings");
  app->add_flag("--lowercase", flags.lowercase, "Fold vocabulary to lowercase");
  app->add_option("--gazetteer", flags.gazetteers,
                  "category=path word list for the detector (repeatable)");
  app->add_option("--workers", flags.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
}

int Report(const absl::Status& status) {
  if (status.ok()) return 0;
  std::fprintf(stderr, "error: %s\n", status.ToString().c_str());
  return 1;
}

}  // namespace
}  // namespace stamp

int main(int argc, char** argv) {
  using namespace stamp;
  CLI::App app{"Task-aware local differential privacy for text"};
  app.require_subcommand(1);

  CommonFlags privatize_flags;
  std::string privatize_in, privatize_out;
  CLI::App* privatize = app.add_subcommand("privatize", "Privatize a JSONL corpus");
  AddCommonFlags(privatize, privatize_flags);
  privatize->add_option("--in", privatize_in, "Input documents (JSONL)");
  privatize->add_option("--out", privatize_out, "Output contexts (JSONL)")
      ->required();

  CommonFlags sweep_flags;
  std::string grid_path, sweep_in, sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a budget sweep to CSV");
  AddCommonFlags(sweep, sweep_flags);
  sweep->add_option("--grid", grid_path, "Sweep grid JSON");
  sweep->add_option("--in", sweep_in, "Input documents (JSONL)");
  sweep->add_option("--out", sweep_out, "CSV output (default stdout)");

  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "Timing benchmarks to CSV");
  bench->add_option("--embeddings", bench_flags.embeddings,
                    "Text embeddings; a Gaussian store is used otherwise");
  bench->add_option("--vocab", bench_flags.vocab, "Synthetic vocabulary size");
  bench->add_option("--dim", bench_flags.dim, "Synthetic dimension");
  bench->add_option("--tokens", bench_flags.tokens, "Token counts");
  bench->add_option("--mechanisms", bench_flags.mechanisms, "Mechanisms");
  bench->add_option("--epsilon", bench_flags.epsilon, "Per-token budget");
  bench->add_option("--repetitions", bench_flags.repetitions,
                    "Runs per timing (minimum is reported)");
  bench->add_option("--min-sample-seconds", bench_flags.min_sample_seconds,
                    "Wall time each timing sample spans");
  bench->add_option("--seed", bench_flags.seed, "Seed");
  bench->add_option("--decode-vocab", bench_flags.decode_vocab,
                    "Vocabulary sizes for the decode scaling run");
  bench->add_option("--decode-queries", bench_flags.decode_queries,
                    "Queries per decode scaling point");
  bench->add_option("--backend-queries", bench_flags.backend_queries,
                    "Queries for the backend recall run (0 skips it)");
  bench->add_option("--backend-k", bench_flags.backend_k,
                    "Candidates per backend query");
  bench->add_option("--out", bench_flags.out, "Timing CSV (default stdout)");
  bench->add_option("--backend-out", bench_flags.backend_out,
                    "Backend CSV (default stdout)");

  std::string inspect_in;
  CLI::App* inspect = app.add_subcommand("inspect", "Summarize an output JSONL");
  inspect->add_option("--in", inspect_in, "Output contexts (JSONL)")->required();

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic store and corpus");
  synth->add_option("--embeddings-out", synth_flags.embeddings_out,
                    "Where to write the clustered store");
  synth->add_option("--corpus-out", synth_flags.corpus_out,
                    "Where to write the corpus (JSONL)");
  synth->add_option("--corpus-kind", synth_flags.corpus_kind, "planted | uniform");
  synth->add_option("--clusters", synth_flags.layout.clusters, "Clusters");
  synth->add_option("--per-cluster", synth_flags.layout.per_cluster,
                    "Tokens per cluster");
  synth->add_option("--dim", synth_flags.layout.dim, "Dimension");
  synth->add_option("--radius", synth_flags.layout.radius, "Embedding norm");
  synth->add_option("--documents", synth_flags.planted.corpus.documents,
                    "Documents");
  synth->add_option("--tokens-per-doc", synth_flags.planted.corpus.tokens_per_doc,
                    "Tokens per document");
  synth->add_option("--seed", synth_flags.planted.corpus.seed, "Corpus seed");

  CLI11_PARSE(app, argc, argv);

  if (privatize->parsed()) {
    return Report(Privatize(privatize_flags, privatize_in, privatize_out));
  }
  if (sweep->parsed()) {
    return Report(Sweep(sweep_flags, grid_path, sweep_in, sweep_out));
  }
  if (bench->parsed()) return Report(Bench(bench_flags));
  if (inspect->parsed()) return Report(Inspect(inspect_in));
  if (synth->parsed()) return Report(Synth(synth_flags));
  return 0;
}
