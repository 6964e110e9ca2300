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

#ifndef STAMP_SYNTHETIC_H_
#define STAMP_SYNTHETIC_H_

// Synthetic vocabularies and corpora for benchmarks, sweeps and tests.

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "stamp/embedding_store.h"
#include "stamp/pipeline.h"

namespace stamp {

// Tokens come in clusters of near-synonyms: each row is a random cluster
// direction plus Gaussian noise of norm ~`spread`, renormalized, then scaled
// to a radius drawn uniformly from radius +- radius_jitter. Token i is named
// `prefix` followed by i zero-padded to 6 digits; rows of cluster k are
// k * per_cluster ... (k + 1) * per_cluster - 1.
struct ClusteredStoreOptions {
  size_t clusters = 100;
  size_t per_cluster = 10;
  size_t dim = 64;
  double spread = 0.2;
  double radius = 0.35;
  double radius_jitter = 0.05;
  uint64_t seed = 1;
  std::string prefix = "t";
};

absl::StatusOr<EmbeddingStore> MakeClusteredStore(
    const ClusteredStoreOptions& options);

// Rows with i.i.d. standard normal entries.
absl::StatusOr<EmbeddingStore> MakeGaussianStore(size_t vocab, size_t dim,
                                                 uint64_t seed);

std::string SyntheticTokenName(const std::string& prefix, size_t index);

struct SyntheticCorpusOptions {
  size_t documents = 50;
  size_t tokens_per_doc = 100;
  uint64_t seed = 7;
};

// Documents of uniformly drawn vocabulary tokens, no query, no spans.
std::vector<Document> MakeUniformCorpus(const EmbeddingStore& store,
                                        const SyntheticCorpusOptions& options);

// Documents for a clustered store with a topic cluster per document. A
// fraction `topic_fraction` of positions is drawn from the topic cluster and
// the rest from the other clusters; the query vector is the normalized mean
// of the topic cluster's unit rows. Single-token sensitive spans are planted
// at a `sensitive_fraction` of positions.
struct PlantedCorpusOptions {
  SyntheticCorpusOptions corpus;
  double topic_fraction = 0.3;
  double sensitive_fraction = 0.3;
};

std::vector<Document> MakePlantedCorpus(const EmbeddingStore& store,
                                        const ClusteredStoreOptions& layout,
                                        const PlantedCorpusOptions& options);

}  // namespace stamp

#endif  // STAMP_SYNTHETIC_H_
