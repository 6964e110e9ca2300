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

#include "stamp/decoder.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_format.h"
#include "stamp/sphere_geometry.h"
#include "stamp/status_macros.h"

namespace stamp {
namespace {

constexpr size_t kBlockRows = 512;
constexpr double kLowest = -std::numeric_limits<double>::infinity();

// Best and runner-up under a "larger key wins, earlier index wins ties" order.
struct TopTwo {
  double best_key = kLowest;
  double second_key = kLowest;
  size_t best = 0;
  size_t second = std::numeric_limits<size_t>::max();

  void Offer(double key, size_t index) {
    if (key > best_key) {
      second_key = best_key;
      second = best;
      best_key = key;
      best = index;
      if (second_key == kLowest) second = std::numeric_limits<size_t>::max();
    } else if (key > second_key) {
      second_key = key;
      second = index;
    }
  }
};

absl::StatusOr<std::vector<double>> UnitQuery(std::span<const double> e,
                                              const EmbeddingStore& store) {
  if (e.size() != store.dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: vector %d vs store %d", e.size(), store.dim()));
  }
  const double norm = L2Norm(e);
  if (!std::isfinite(norm)) {
    return absl::InvalidArgumentError("non-finite vector to decode");
  }
  if (!(norm > 0.0)) {
    return absl::InvalidArgumentError("cannot decode a zero-norm vector");
  }
  std::vector<double> unit(e.begin(), e.end());
  for (double& x : unit) x /= norm;
  return unit;
}

DecodeResult MakeResult(const EmbeddingStore& store,
                        std::span<const double> unit_query,
                        const TopTwo& top) {
  DecodeResult result;
  result.index = top.best;
  result.token = store.token(top.best);
  const double best_cos = Dot(unit_query, store.unit_row(top.best));
  result.score = std::clamp(best_cos, -1.0, 1.0);
  if (top.second != std::numeric_limits<size_t>::max()) {
    const double second_cos = Dot(unit_query, store.unit_row(top.second));
    result.runner_up_margin = std::max(0.0, best_cos - second_cos);
  }
  return result;
}

}  // namespace

absl::string_view DecodeRuleName(DecodeRule rule) {
  switch (rule) {
    case DecodeRule::kCosineArgmax:
      return "cosine_argmax";
    case DecodeRule::kNormalizedDot:
      return "normalized_dot";
    case DecodeRule::kGeodesicArgmin:
      return "geodesic_argmin";
    case DecodeRule::kEuclideanArgmin:
      return "euclidean_argmin";
  }
  return "unknown";
}

absl::StatusOr<DecodeResult> Decode(std::span<const double> e_priv,
                                    const EmbeddingStore& store,
                                    DecodeRule rule) {
  ASSIGN_OR_RETURN(const std::vector<double> q, UnitQuery(e_priv, store));
  const double e_norm = L2Norm(e_priv);
  TopTwo top;
  for (size_t i = 0; i < store.size(); ++i) {
    double key = 0.0;
    switch (rule) {
      case DecodeRule::kCosineArgmax:
        key = Dot(e_priv, store.row(i)) / (e_norm * store.norm(i));
        break;
      case DecodeRule::kNormalizedDot:
        key = Dot(q, store.unit_row(i));
        break;
      case DecodeRule::kGeodesicArgmin:
        key = -std::acos(std::clamp(Dot(q, store.unit_row(i)), -1.0, 1.0));
        break;
      case DecodeRule::kEuclideanArgmin: {
        const auto v = store.unit_row(i);
        double sum = 0.0;
        for (size_t k = 0; k < q.size(); ++k) {
          const double diff = q[k] - v[k];
          sum += diff * diff;
        }
        key = -std::sqrt(sum);
        break;
      }
    }
    top.Offer(key, i);
  }
  return MakeResult(store, q, top);
}

absl::StatusOr<std::vector<DecodeResult>> DecodeBatch(
    std::span<const double> vectors, const EmbeddingStore& store,
    DecodeRule rule) {
  const size_t dim = store.dim();
  if (vectors.size() % dim != 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "batch of %d values is not a multiple of d=%d", vectors.size(), dim));
  }
  const size_t m = vectors.size() / dim;
  std::vector<DecodeResult> results;
  results.reserve(m);
  if (rule != DecodeRule::kNormalizedDot) {
    for (size_t j = 0; j < m; ++j) {
      ASSIGN_OR_RETURN(DecodeResult r,
                       Decode(vectors.subspan(j * dim, dim), store, rule));
      results.push_back(std::move(r));
    }
    return results;
  }

  std::vector<double> queries(m * dim);
  for (size_t j = 0; j < m; ++j) {
    auto unit = UnitQuery(vectors.subspan(j * dim, dim), store);
    if (!unit.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d: %s", j, unit.status().message()));
    }
    std::copy(unit->begin(), unit->end(), queries.begin() + j * dim);
  }
  std::vector<TopTwo> tops(m);
  const std::span<const double> all_queries(queries);
  for (size_t block = 0; block < store.size(); block += kBlockRows) {
    const size_t end = std::min(block + kBlockRows, store.size());
    for (size_t j = 0; j < m; ++j) {
      const auto q = all_queries.subspan(j * dim, dim);
      TopTwo& top = tops[j];
      for (size_t i = block; i < end; ++i) {
        top.Offer(Dot(q, store.unit_row(i)), i);
      }
    }
  }
  for (size_t j = 0; j < m; ++j) {
    results.push_back(
        MakeResult(store, all_queries.subspan(j * dim, dim), tops[j]));
  }
  return results;
}

std::unique_ptr<ExactBackend> ExactBackend::Build(
    const EmbeddingStore& store) {
  return std::unique_ptr<ExactBackend>(new ExactBackend(store));
}

namespace {

std::vector<size_t> TopK(const std::vector<double>& scores, size_t k) {
  k = std::clamp<size_t>(k, 1, scores.size());
  std::vector<size_t> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](size_t a, size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

}  // namespace

absl::StatusOr<std::vector<size_t>> ExactBackend::Query(
    std::span<const double> unit_query, size_t k) const {
  if (unit_query.size() != store_.dim()) {
    return absl::InvalidArgumentError("query dimension mismatch");
  }
  std::vector<double> scores(store_.size());
  for (size_t i = 0; i < store_.size(); ++i) {
    scores[i] = Dot(unit_query, store_.unit_row(i));
  }
  return TopK(scores, k);
}

std::unique_ptr<Int8ScanBackend> Int8ScanBackend::Build(
    const EmbeddingStore& store) {
  auto backend = std::unique_ptr<Int8ScanBackend>(
      new Int8ScanBackend(store.size(), store.dim()));
  backend->codes_.resize(store.size() * store.dim());
  backend->scales_.resize(store.size());
  for (size_t i = 0; i < store.size(); ++i) {
    const auto row = store.unit_row(i);
    double max_abs = 0.0;
    for (double x : row) max_abs = std::max(max_abs, std::abs(x));
    const double scale = max_abs > 0.0 ? max_abs / 127.0 : 1.0;
    backend->scales_[i] = static_cast<float>(scale);
    for (size_t k = 0; k < row.size(); ++k) {
      backend->codes_[i * store.dim() + k] =
          static_cast<int8_t>(std::lround(row[k] / scale));
    }
  }
  return backend;
}

absl::StatusOr<std::vector<size_t>> Int8ScanBackend::Query(
    std::span<const double> unit_query, size_t k) const {
  if (unit_query.size() != dim_) {
    return absl::InvalidArgumentError("query dimension mismatch");
  }
  std::vector<float> q(unit_query.begin(), unit_query.end());
  std::vector<double> scores(rows_);
  for (size_t i = 0; i < rows_; ++i) {
    const int8_t* code = codes_.data() + i * dim_;
    float sum = 0.0f;
    for (size_t j = 0; j < dim_; ++j) sum += static_cast<float>(code[j]) * q[j];
    scores[i] = static_cast<double>(sum * scales_[i]);
  }
  return TopK(scores, k);
}

absl::StatusOr<DecodeResult> DecodeWithBackend(
    std::span<const double> e_priv, const EmbeddingStore& store,
    const NearestNeighborBackend& backend, size_t k) {
  ASSIGN_OR_RETURN(const std::vector<double> q, UnitQuery(e_priv, store));
  ASSIGN_OR_RETURN(std::vector<size_t> candidates, backend.Query(q, k));
  if (candidates.empty()) {
    return absl::InternalError(absl::StrFormat(
        "backend %s returned no candidates", backend.name()));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  TopTwo top;
  for (size_t i : candidates) {
    if (i >= store.size()) {
      return absl::InternalError(absl::StrFormat(
          "backend %s returned out-of-range index %d", backend.name(), i));
    }
    top.Offer(Dot(q, store.unit_row(i)), i);
  }
  return MakeResult(store, q, top);
}

}  // namespace stamp
