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

#include "stamp/embedding_store.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "stamp/sphere_geometry.h"
#include "stamp/status_macros.h"

namespace stamp {
namespace {

constexpr char kCacheMagic[8] = {'S', 'T', 'M', 'P', 'E', 'M', 'B', '\0'};
constexpr uint32_t kCacheVersion = 1;

bool ParseDouble(absl::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool ParseSize(absl::string_view s, size_t& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <typename T>
void WritePod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool ReadPod(std::istream& in, T& value) {
  return static_cast<bool>(
      in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

uint64_t CacheKey(uint64_t checksum, const LoadOptions& options) {
  uint64_t key = checksum;
  if (options.lowercase) key = CombineStreamIds(key, 1);
  if (options.expected_dim) key = CombineStreamIds(key, *options.expected_dim);
  return key;
}

}  // namespace

absl::StatusOr<EmbeddingStore> EmbeddingStore::Create(
    std::vector<std::string> vocab, std::vector<double> matrix, size_t dim) {
  if (dim == 0) return absl::InvalidArgumentError("embedding dim must be > 0");
  if (vocab.size() < 2) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "vocabulary needs at least 2 tokens, got %d", vocab.size()));
  }
  if (matrix.size() != vocab.size() * dim) {
    return absl::InvalidArgumentError(
        absl::StrFormat("matrix has %d values, expected %d x %d",
                        matrix.size(), vocab.size(), dim));
  }
  EmbeddingStore store;
  store.dim_ = dim;
  store.index_.reserve(vocab.size());
  for (size_t i = 0; i < vocab.size(); ++i) {
    if (!store.index_.emplace(vocab[i], i).second) {
      return absl::InvalidArgumentError(
          absl::StrFormat("duplicate token \"%s\"", vocab[i]));
    }
  }
  store.norms_.resize(vocab.size());
  store.unit_matrix_.resize(matrix.size());
  for (size_t i = 0; i < vocab.size(); ++i) {
    std::span<const double> row(matrix.data() + i * dim, dim);
    for (double x : row) {
      if (!std::isfinite(x)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "non-finite value in embedding of \"%s\"", vocab[i]));
      }
    }
    const double norm = L2Norm(row);
    if (!(norm > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("zero-norm embedding for token \"%s\"", vocab[i]));
    }
    store.norms_[i] = norm;
    for (size_t k = 0; k < dim; ++k) {
      store.unit_matrix_[i * dim + k] = row[k] / norm;
    }
  }
  store.vocab_ = std::move(vocab);
  store.matrix_ = std::move(matrix);
  return store;
}

std::optional<size_t> EmbeddingStore::IndexOf(absl::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<TokenEmbedding> EmbeddingStore::Lookup(
    absl::string_view token) const {
  auto index = IndexOf(token);
  if (!index) {
    return absl::NotFoundError(
        absl::StrFormat("out-of-vocabulary token \"%s\"", token));
  }
  return TokenEmbedding{row(*index), unit_row(*index), *index};
}

absl::StatusOr<EmbeddingStore> ParseTextEmbeddings(std::istream& in,
                                                   const LoadOptions& options) {
  std::vector<std::string> vocab;
  std::vector<double> matrix;
  absl::flat_hash_map<std::string, size_t> seen;
  std::optional<size_t> dim = options.expected_dim;
  std::optional<size_t> header_rows;
  std::string line;
  size_t line_no = 0;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    std::vector<absl::string_view> fields =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    if (fields.empty()) continue;

    if (first_content_line) {
      first_content_line = false;
      size_t rows = 0, cols = 0;
      if (fields.size() == 2 && ParseSize(fields[0], rows) &&
          ParseSize(fields[1], cols) && cols > 0) {
        if (dim && *dim != cols) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "dimension mismatch: header says %d, expected %d", cols, *dim));
        }
        header_rows = rows;
        dim = cols;
        continue;
      }
    }

    const size_t row_dim = fields.size() - 1;
    if (!dim) dim = row_dim;
    if (row_dim != *dim || row_dim == 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("dimension mismatch at line %d: %d values, expected %d",
                          line_no, row_dim, *dim));
    }
    std::string token(fields[0]);
    if (options.lowercase) absl::AsciiStrToLower(&token);
    std::vector<double> values(row_dim);
    for (size_t k = 0; k < row_dim; ++k) {
      if (!ParseDouble(fields[k + 1], values[k]) ||
          !std::isfinite(values[k])) {
        return absl::InvalidArgumentError(
            absl::StrFormat("non-finite or malformed value \"%s\" at line %d",
                            fields[k + 1], line_no));
      }
    }
    if (!(L2Norm(values) > 0.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "zero-norm embedding for token \"%s\" at line %d", token, line_no));
    }
    if (seen.contains(token)) {
      if (options.lowercase) continue;
      return absl::InvalidArgumentError(absl::StrFormat(
          "duplicate token \"%s\" at line %d", token, line_no));
    }
    seen.emplace(token, vocab.size());
    vocab.push_back(std::move(token));
    matrix.insert(matrix.end(), values.begin(), values.end());
  }

  if (vocab.empty()) return absl::InvalidArgumentError("empty embedding file");
  if (header_rows && *header_rows != vocab.size() && !options.lowercase) {
    return absl::InvalidArgumentError(
        absl::StrFormat("header declares %d rows, file has %d", *header_rows,
                        vocab.size()));
  }
  return EmbeddingStore::Create(std::move(vocab), std::move(matrix), *dim);
}

absl::StatusOr<EmbeddingStore> LoadTextEmbeddings(const std::string& path,
                                                  const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open embedding file %s", path));
  }
  return ParseTextEmbeddings(in, options);
}

absl::Status WriteTextEmbeddings(const EmbeddingStore& store,
                                 const std::string& path, bool with_header) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) {
    return absl::UnavailableError(absl::StrFormat("cannot write %s", path));
  }
  if (with_header) absl::FPrintF(f, "%d %d\n", store.size(), store.dim());
  for (size_t i = 0; i < store.size(); ++i) {
    absl::FPrintF(f, "%s", store.token(i));
    for (double x : store.row(i)) absl::FPrintF(f, " %.17g", x);
    absl::FPrintF(f, "\n");
  }
  if (std::fclose(f) != 0) {
    return absl::DataLossError(absl::StrFormat("failed to close %s", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> FileChecksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

absl::Status WriteBinaryCache(const EmbeddingStore& store, uint64_t key,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrFormat("cannot write %s", path));
  }
  out.write(kCacheMagic, sizeof(kCacheMagic));
  WritePod(out, kCacheVersion);
  WritePod(out, key);
  WritePod(out, static_cast<uint64_t>(store.size()));
  WritePod(out, static_cast<uint64_t>(store.dim()));
  for (const std::string& token : store.vocab()) {
    WritePod(out, static_cast<uint64_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
  }
  out.write(reinterpret_cast<const char*>(store.matrix().data()),
            static_cast<std::streamsize>(store.matrix().size_bytes()));
  if (!out) return absl::DataLossError(absl::StrFormat("short write to %s", path));
  return absl::OkStatus();
}

absl::StatusOr<EmbeddingStore> ReadBinaryCache(const std::string& path,
                                               uint64_t expected_key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrFormat("no cache at %s", path));
  char magic[sizeof(kCacheMagic)];
  uint32_t version = 0;
  uint64_t key = 0, rows = 0, dim = 0;
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0 ||
      !ReadPod(in, version) || version != kCacheVersion) {
    return absl::DataLossError(
        absl::StrFormat("%s is not a supported embedding cache", path));
  }
  if (!ReadPod(in, key) || key != expected_key) {
    return absl::FailedPreconditionError("stale embedding cache");
  }
  if (!ReadPod(in, rows) || !ReadPod(in, dim) || dim == 0) {
    return absl::DataLossError("truncated embedding cache header");
  }
  std::vector<std::string> vocab(rows);
  for (auto& token : vocab) {
    uint64_t len = 0;
    if (!ReadPod(in, len) || len > (1u << 20)) {
      return absl::DataLossError("corrupt token in embedding cache");
    }
    token.resize(len);
    if (!in.read(token.data(), static_cast<std::streamsize>(len))) {
      return absl::DataLossError("truncated embedding cache");
    }
  }
  std::vector<double> matrix(rows * dim);
  if (!in.read(reinterpret_cast<char*>(matrix.data()),
               static_cast<std::streamsize>(matrix.size() * sizeof(double)))) {
    return absl::DataLossError("truncated embedding cache matrix");
  }
  return EmbeddingStore::Create(std::move(vocab), std::move(matrix), dim);
}

absl::StatusOr<EmbeddingStore> LoadEmbeddingsWithCache(
    const std::string& text_path, const std::string& cache_path,
    const LoadOptions& options) {
  ASSIGN_OR_RETURN(uint64_t checksum, FileChecksum(text_path));
  const uint64_t key = CacheKey(checksum, options);
  if (auto cached = ReadBinaryCache(cache_path, key); cached.ok()) {
    return cached;
  }
  ASSIGN_OR_RETURN(EmbeddingStore store,
                   LoadTextEmbeddings(text_path, options));
  // Best effort; a missing cache only means re-parsing next time.
  WriteBinaryCache(store, key, cache_path).IgnoreError();
  return store;
}

}  // namespace stamp
