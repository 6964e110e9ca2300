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

#ifndef STAMP_PIPELINE_H_
#define STAMP_PIPELINE_H_

// End-to-end privatization of documents: tokenize, group, allocate budgets,
// perturb each token embedding independently, decode, and attach a receipt.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "stamp/budget_allocator.h"
#include "stamp/decoder.h"
#include "stamp/embedding_store.h"
#include "stamp/grouping.h"
#include "stamp/mechanisms.h"
#include "stamp/sphere_geometry.h"
#include "stamp/tokenizer.h"

namespace stamp {

enum class Framework { kStamp, kUniform };
enum class OovPolicy { kMask, kPassthrough, kError };

absl::string_view FrameworkName(Framework framework);
absl::StatusOr<Framework> ParseFramework(absl::string_view name);
absl::string_view OovPolicyName(OovPolicy policy);
absl::StatusOr<OovPolicy> ParseOovPolicy(absl::string_view name);

inline constexpr char kDefaultMaskToken[] = "[MASK]";

struct RunConfig {
  MechanismConfig mechanism;
  AllocationStrategy strategy;
  double base_eps = 50.0;
  double tau = 0.5;
  Framework framework = Framework::kStamp;
  uint64_t seed = 0;
  std::string mask_token = kDefaultMaskToken;
  OovPolicy oov_policy = OovPolicy::kMask;
  // Uniform framework only. When set, each document's single budget is the
  // mean budget the stamp allocation would spend on it, so both frameworks
  // spend the same total.
  bool match_stamp_budget = false;
  DecodeRule decode_rule = DecodeRule::kNormalizedDot;

  absl::Status Validate() const;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> query;
  std::optional<std::vector<double>> query_vector;
  // Precomputed sensitive spans; when present they replace the detector.
  std::optional<std::vector<Span>> sensitive_spans;
};

struct PrivatizedContext {
  std::string id;
  std::vector<std::string> tokens_original;
  std::vector<std::string> tokens_private;
  std::vector<GroupLabel> labels;
  PrivacyReceipt receipt;
  std::string text_private;
};

// Privatizes one token. Sees nothing but its own embedding, budget and
// random stream, so positions are independent by construction.
absl::StatusOr<std::string> PrivatizeToken(std::span<const double> embedding,
                                           double epsilon,
                                           const MechanismConfig& mechanism,
                                           DecodeRule rule,
                                           const EmbeddingStore& store,
                                           RandomSource& rng);

// Stream id of token `position` in document `doc_id`.
uint64_t TokenStreamId(absl::string_view doc_id, size_t position);

absl::StatusOr<PrivatizedContext> PrivatizeDocument(
    const Document& doc, const EmbeddingStore& store,
    const SensitivityOracle& oracle, const RunConfig& config);

// Runs PrivatizeDocument over `docs` on `workers` threads. Output order and
// content do not depend on the worker count.
absl::StatusOr<std::vector<PrivatizedContext>> PrivatizeCorpus(
    std::span<const Document> docs, const EmbeddingStore& store,
    const SensitivityOracle& oracle, const RunConfig& config, int workers = 1);

struct UtilityReport {
  size_t documents = 0;
  size_t tokens = 0;
  // Fraction of positions with w'_i == w_i, pooled over all tokens.
  double self_recovery = 0.0;
  // Same, per group; NaN for groups with no tokens.
  std::array<double, 4> group_recovery = {0.0, 0.0, 0.0, 0.0};
  std::array<size_t, 4> group_tokens = {0, 0, 0, 0};
  // Per-document cosine between the normalized mean unit embeddings of the
  // original and private tokens, averaged over documents.
  double context_cosine = 0.0;
  double mask_rate = 0.0;
};

absl::StatusOr<UtilityReport> EvaluateRun(
    std::span<const PrivatizedContext> contexts, const EmbeddingStore& store,
    absl::string_view mask_token = kDefaultMaskToken);

}  // namespace stamp

#endif  // STAMP_PIPELINE_H_
