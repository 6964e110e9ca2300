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

#ifndef STAMP_EMBEDDING_STORE_H_
#define STAMP_EMBEDDING_STORE_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace stamp {

struct TokenEmbedding {
  std::span<const double> vector;
  std::span<const double> unit;
  size_t index;
};

struct LoadOptions {
  // When set, every row must have exactly this many components.
  std::optional<size_t> expected_dim;
  // Fold tokens to ASCII lowercase at load time. On a collision after folding
  // the first row wins.
  bool lowercase = false;
};

// Read-only vocabulary of token embeddings together with their ell-2 norms and
// a row-normalized copy. Immutable once built, so a single instance can be
// shared by any number of threads.
class EmbeddingStore {
 public:
  // `matrix` is row-major |vocab| x dim. Rejects duplicate tokens, fewer than
  // two rows, non-finite values and zero-norm rows.
  static absl::StatusOr<EmbeddingStore> Create(std::vector<std::string> vocab,
                                               std::vector<double> matrix,
                                               size_t dim);

  size_t size() const { return vocab_.size(); }
  size_t dim() const { return dim_; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::string& token(size_t i) const { return vocab_[i]; }
  std::span<const double> row(size_t i) const {
    return std::span<const double>(matrix_).subspan(i * dim_, dim_);
  }
  std::span<const double> unit_row(size_t i) const {
    return std::span<const double>(unit_matrix_).subspan(i * dim_, dim_);
  }
  double norm(size_t i) const { return norms_[i]; }
  std::span<const double> matrix() const { return matrix_; }
  std::span<const double> unit_matrix() const { return unit_matrix_; }

  std::optional<size_t> IndexOf(absl::string_view token) const;

  // NotFound for out-of-vocabulary tokens.
  absl::StatusOr<TokenEmbedding> Lookup(absl::string_view token) const;

 private:
  EmbeddingStore() = default;

  std::vector<std::string> vocab_;
  absl::flat_hash_map<std::string, size_t> index_;
  std::vector<double> matrix_;
  std::vector<double> unit_matrix_;
  std::vector<double> norms_;
  size_t dim_ = 0;
};

// Parses `token v1 ... vd` lines (GloVe layout). A leading `|V| d` header
// line is recognised and checked against the body.
absl::StatusOr<EmbeddingStore> ParseTextEmbeddings(std::istream& in,
                                                   const LoadOptions& options);
absl::StatusOr<EmbeddingStore> LoadTextEmbeddings(
    const std::string& path, const LoadOptions& options = {});

// Writes the text format with 17 significant digits, so reloading is exact.
absl::Status WriteTextEmbeddings(const EmbeddingStore& store,
                                 const std::string& path,
                                 bool with_header = false);

// FNV-1a 64 over the file bytes.
absl::StatusOr<uint64_t> FileChecksum(const std::string& path);

// Binary cache: magic, format version, key, |V|, d, tokens, row-major matrix.
// `key` identifies the source the cache was built from.
absl::Status WriteBinaryCache(const EmbeddingStore& store, uint64_t key,
                              const std::string& path);
absl::StatusOr<EmbeddingStore> ReadBinaryCache(const std::string& path,
                                               uint64_t expected_key);

// Loads `text_path`, going through `cache_path` when it holds a cache built
// from the same file bytes and options; otherwise parses the text and
// refreshes the cache.
absl::StatusOr<EmbeddingStore> LoadEmbeddingsWithCache(
    const std::string& text_path, const std::string& cache_path,
    const LoadOptions& options = {});

}  // namespace stamp

#endif  // STAMP_EMBEDDING_STORE_H_
