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

#ifndef STAMP_DECODER_H_
#define STAMP_DECODER_H_

// Maps a privatized vector back to a vocabulary token by cosine nearest
// neighbour. The four rules below rank candidates identically on the unit
// sphere; all of them are kept so that they can be cross-checked.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "stamp/embedding_store.h"

namespace stamp {

enum class DecodeRule {
  kCosineArgmax,     // argmax e'.v / (|e'| |v|) over raw rows
  kNormalizedDot,    // argmax e^.v^ over unit rows
  kGeodesicArgmin,   // argmin arccos(e^.v^)
  kEuclideanArgmin,  // argmin |e^ - v^|
};

absl::string_view DecodeRuleName(DecodeRule rule);

struct DecodeResult {
  std::string token;
  size_t index = 0;
  // Cosine similarity between the query and the decoded row.
  double score = 0.0;
  // Cosine of the winner minus cosine of the runner-up, floored at 0.
  double runner_up_margin = 0.0;

  bool operator==(const DecodeResult&) const = default;
};

// Exhaustive search. Ties go to the lowest vocabulary index.
absl::StatusOr<DecodeResult> Decode(
    std::span<const double> e_priv, const EmbeddingStore& store,
    DecodeRule rule = DecodeRule::kNormalizedDot);

// `vectors` is m x d row-major. Element-wise identical to Decode; the
// normalized-dot rule runs blocked over the vocabulary so each block of unit
// rows is reused from cache across all queries.
absl::StatusOr<std::vector<DecodeResult>> DecodeBatch(
    std::span<const double> vectors, const EmbeddingStore& store,
    DecodeRule rule = DecodeRule::kNormalizedDot);

// Candidate generator for nearest-neighbour decoding. Implementations are
// built over one store and must be safe for concurrent Query calls.
class NearestNeighborBackend {
 public:
  virtual ~NearestNeighborBackend() = default;
  virtual absl::string_view name() const = 0;
  // Returns at least one and at most k candidate row indices for a unit
  // query vector.
  virtual absl::StatusOr<std::vector<size_t>> Query(
      std::span<const double> unit_query, size_t k) const = 0;
};

// Reference backend: the exact top-k by cosine.
class ExactBackend : public NearestNeighborBackend {
 public:
  static std::unique_ptr<ExactBackend> Build(const EmbeddingStore& store);
  absl::string_view name() const override { return "exact"; }
  absl::StatusOr<std::vector<size_t>> Query(std::span<const double> unit_query,
                                            size_t k) const override;

 private:
  explicit ExactBackend(const EmbeddingStore& store) : store_(store) {}
  const EmbeddingStore& store_;
};

// Scans int8-quantized unit rows (per-row symmetric scale) and returns the
// top-k by approximate score. Cheaper per row than the exact scan; recall
// depends on k and the quantization error.
class Int8ScanBackend : public NearestNeighborBackend {
 public:
  static std::unique_ptr<Int8ScanBackend> Build(const EmbeddingStore& store);
  absl::string_view name() const override { return "int8_scan"; }
  absl::StatusOr<std::vector<size_t>> Query(std::span<const double> unit_query,
                                            size_t k) const override;

 private:
  Int8ScanBackend(size_t rows, size_t dim) : rows_(rows), dim_(dim) {}
  size_t rows_;
  size_t dim_;
  std::vector<int8_t> codes_;
  std::vector<float> scales_;
};

// Asks `backend` for k candidates and re-ranks them by exact cosine. The
// answer can only differ from Decode when the true neighbour is missing from
// the candidates.
absl::StatusOr<DecodeResult> DecodeWithBackend(
    std::span<const double> e_priv, const EmbeddingStore& store,
    const NearestNeighborBackend& backend, size_t k);

}  // namespace stamp

#endif  // STAMP_DECODER_H_
