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

#ifndef STAMP_GROUPING_H_
#define STAMP_GROUPING_H_

// The public grouping map: which tokens are privacy sensitive, which are
// important for the task, and the resulting 2x2 group label per token.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "stamp/embedding_store.h"
#include "stamp/sphere_geometry.h"

namespace stamp {

// Values match the group numbers used in budget vectors and receipts.
enum class GroupLabel : int {
  kSensitiveImportant = 1,
  kSensitiveUnimportant = 2,
  kPublicImportant = 3,
  kPublicUnimportant = 4,
};

inline constexpr std::array<GroupLabel, 4> kAllGroups = {
    GroupLabel::kSensitiveImportant, GroupLabel::kSensitiveUnimportant,
    GroupLabel::kPublicImportant, GroupLabel::kPublicUnimportant};

GroupLabel LabelFor(bool sensitive, bool important);
inline int GroupNumber(GroupLabel label) { return static_cast<int>(label); }
// 0-based slot for per-group arrays.
inline size_t GroupSlot(GroupLabel label) {
  return static_cast<size_t>(label) - 1;
}
absl::StatusOr<GroupLabel> GroupFromNumber(int number);

// Token range [start, end) flagged as sensitive.
struct Span {
  size_t start = 0;
  size_t end = 0;
  std::string category;

  bool operator==(const Span&) const = default;
};

inline constexpr char kCategoryPerson[] = "person";
inline constexpr char kCategoryLocation[] = "location";
inline constexpr char kCategoryOrganization[] = "organization";
inline constexpr char kCategoryNumericId[] = "numeric_id";

class SensitivityOracle {
 public:
  virtual ~SensitivityOracle() = default;
  // Must be deterministic and return spans inside [0, tokens.size()).
  virtual std::vector<Span> DetectSpans(
      std::span<const std::string> tokens) const = 0;
};

// Word lists by category. Entries may span several space-separated tokens.
class Gazetteers {
 public:
  void Add(absl::string_view category, absl::string_view entry);
  // One entry per line; blank lines are skipped.
  absl::Status LoadFile(absl::string_view category, const std::string& path);

  // Longest entry that matches tokens starting at `start`, if any.
  std::optional<Span> LongestMatchAt(std::span<const std::string> tokens,
                                     size_t start) const;
  bool empty() const { return by_first_token_.empty(); }

 private:
  struct Entry {
    std::vector<std::string> tokens;
    std::string category;
  };
  absl::flat_hash_map<std::string, std::vector<Entry>> by_first_token_;
};

// Default detector:
//  * numeric identifiers: a token with >= 4 consecutive digits, or digit
//    groups joined by '-' or '/';
//  * gazetteer entries, greedy longest match;
//  * runs of capitalized tokens that do not start a sentence (person).
// Overlaps are resolved longest first, then earliest start; for identical
// extents numeric beats gazetteer beats capitalization.
class RuleBasedDetector : public SensitivityOracle {
 public:
  explicit RuleBasedDetector(Gazetteers gazetteers = {})
      : gazetteers_(std::move(gazetteers)) {}

  std::vector<Span> DetectSpans(
      std::span<const std::string> tokens) const override;

 private:
  Gazetteers gazetteers_;
};

// Spans supplied by an external annotator. Out-of-range spans are dropped.
class FixedSpanOracle : public SensitivityOracle {
 public:
  explicit FixedSpanOracle(std::vector<Span> spans)
      : spans_(std::move(spans)) {}

  std::vector<Span> DetectSpans(
      std::span<const std::string> tokens) const override;

 private:
  std::vector<Span> spans_;
};

bool LooksLikeNumericId(absl::string_view token);

// Greedy non-overlapping selection: longest first, ties to earlier start,
// remaining ties to lower position in `candidates`. Output sorted by start.
std::vector<Span> ResolveOverlaps(std::vector<Span> candidates);

struct ImportanceConfig {
  double tau = 0.5;
  // Task or query direction. Without one no token counts as important.
  std::optional<UnitVector> query;

  static absl::StatusOr<ImportanceConfig> Create(
      double tau, std::optional<std::span<const double>> query_vector);
};

struct ImportanceResult {
  double score = 0.0;
  bool important = false;
};

// score = token_unit . query, important iff score >= tau.
absl::StatusOr<ImportanceResult> ImportanceScore(
    std::span<const double> token_unit, const ImportanceConfig& config);

// Unit-normalized mean of the unit embeddings of the in-vocabulary tokens.
absl::StatusOr<UnitVector> QueryVectorFromTokens(
    std::span<const std::string> tokens, const EmbeddingStore& store);

// Combines sensitivity spans with per-token importance. A span takes the
// logical OR of its members' importance, and every member gets that label.
std::vector<GroupLabel> AssignGroupLabels(size_t num_tokens,
                                          std::span<const Span> spans,
                                          const std::vector<bool>& important);

// Full grouping map over in-vocabulary tokens. NotFound on an OOV token.
absl::StatusOr<std::vector<GroupLabel>> AssignGroups(
    std::span<const std::string> tokens, const EmbeddingStore& store,
    const SensitivityOracle& oracle, const ImportanceConfig& config);

}  // namespace stamp

#endif  // STAMP_GROUPING_H_
