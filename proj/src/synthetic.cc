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

#include "stamp/synthetic.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "stamp/sphere_geometry.h"

namespace stamp {
namespace {

size_t UniformIndex(RandomSource& rng, size_t n) {
  return std::min(n - 1, static_cast<size_t>(rng.Uniform01() * n));
}

}  // namespace

std::string SyntheticTokenName(const std::string& prefix, size_t index) {
  // Base-26 letters: digits would trip the numeric-identifier rule.
  std::string suffix(5, 'a');
  for (size_t k = suffix.size(); k-- > 0 && index > 0; index /= 26) {
    suffix[k] = static_cast<char>('a' + index % 26);
  }
  while (index > 0) {
    suffix.insert(suffix.begin(), static_cast<char>('a' + index % 26));
    index /= 26;
  }
  return prefix + suffix;
}

absl::StatusOr<EmbeddingStore> MakeClusteredStore(
    const ClusteredStoreOptions& options) {
  if (options.dim < 2 || options.clusters == 0 || options.per_cluster == 0) {
    return absl::InvalidArgumentError("empty clustered store layout");
  }
  RandomSource rng(options.seed, 0xc1u);
  const size_t dim = options.dim;
  const size_t vocab = options.clusters * options.per_cluster;
  std::vector<std::string> tokens;
  tokens.reserve(vocab);
  std::vector<double> matrix(vocab * dim);
  std::vector<double> center(dim);
  std::vector<double> row(dim);
  const double noise_scale = options.spread / std::sqrt(static_cast<double>(dim));
  for (size_t k = 0; k < options.clusters; ++k) {
    SampleUniformSphereInto(rng, center);
    for (size_t m = 0; m < options.per_cluster; ++m) {
      const size_t i = k * options.per_cluster + m;
      for (size_t j = 0; j < dim; ++j) {
        row[j] = center[j] + noise_scale * rng.Normal();
      }
      const double norm = L2Norm(row);
      const double radius =
          options.radius +
          options.radius_jitter * (2.0 * rng.Uniform01() - 1.0);
      for (size_t j = 0; j < dim; ++j) {
        matrix[i * dim + j] = radius * row[j] / norm;
      }
      tokens.push_back(SyntheticTokenName(options.prefix, i));
    }
  }
  return EmbeddingStore::Create(std::move(tokens), std::move(matrix), dim);
}

absl::StatusOr<EmbeddingStore> MakeGaussianStore(size_t vocab, size_t dim,
                                                 uint64_t seed) {
  RandomSource rng(seed, 0x9au);
  std::vector<std::string> tokens;
  tokens.reserve(vocab);
  std::vector<double> matrix(vocab * dim);
  for (size_t i = 0; i < vocab; ++i) {
    tokens.push_back(SyntheticTokenName("g", i));
    for (size_t j = 0; j < dim; ++j) matrix[i * dim + j] = rng.Normal();
  }
  return EmbeddingStore::Create(std::move(tokens), std::move(matrix), dim);
}

std::vector<Document> MakeUniformCorpus(const EmbeddingStore& store,
                                        const SyntheticCorpusOptions& options) {
  RandomSource rng(options.seed, 0xd0u);
  std::vector<Document> docs;
  docs.reserve(options.documents);
  for (size_t d = 0; d < options.documents; ++d) {
    std::vector<std::string> words;
    words.reserve(options.tokens_per_doc);
    for (size_t i = 0; i < options.tokens_per_doc; ++i) {
      words.push_back(store.token(UniformIndex(rng, store.size())));
    }
    Document doc;
    doc.id = absl::StrFormat("doc-%05d", d);
    doc.text = absl::StrJoin(words, " ");
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> MakePlantedCorpus(const EmbeddingStore& store,
                                        const ClusteredStoreOptions& layout,
                                        const PlantedCorpusOptions& options) {
  RandomSource rng(options.corpus.seed, 0xd1u);
  const size_t per = layout.per_cluster;
  std::vector<Document> docs;
  docs.reserve(options.corpus.documents);
  for (size_t d = 0; d < options.corpus.documents; ++d) {
    const size_t topic = UniformIndex(rng, layout.clusters);
    std::vector<double> query(store.dim(), 0.0);
    for (size_t m = 0; m < per; ++m) {
      const auto u = store.unit_row(topic * per + m);
      for (size_t j = 0; j < u.size(); ++j) query[j] += u[j];
    }
    const double norm = L2Norm(query);
    for (double& x : query) x /= norm;

    std::vector<std::string> words;
    std::vector<Span> spans;
    for (size_t i = 0; i < options.corpus.tokens_per_doc; ++i) {
      size_t row = 0;
      if (layout.clusters == 1 || rng.Uniform01() < options.topic_fraction) {
        row = topic * per + UniformIndex(rng, per);
      } else {
        size_t cluster = UniformIndex(rng, layout.clusters - 1);
        if (cluster >= topic) ++cluster;
        row = cluster * per + UniformIndex(rng, per);
      }
      words.push_back(store.token(row));
      if (rng.Uniform01() < options.sensitive_fraction) {
        spans.push_back(Span{i, i + 1, kCategoryPerson});
      }
    }
    Document doc;
    doc.id = absl::StrFormat("planted-%05d", d);
    doc.text = absl::StrJoin(words, " ");
    doc.query_vector = std::move(query);
    doc.sensitive_spans = std::move(spans);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace stamp
