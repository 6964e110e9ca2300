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

#include "stamp/grouping.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "stamp/status_macros.h"

namespace stamp {
namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsCapitalized(absl::string_view token) {
  return token.size() >= 2 && token[0] >= 'A' && token[0] <= 'Z';
}

bool EndsSentence(absl::string_view token) {
  if (token.empty()) return false;
  const char last = token.back();
  return last == '.' || last == '!' || last == '?';
}

bool IsSentenceInitial(std::span<const std::string> tokens, size_t i) {
  return i == 0 || EndsSentence(tokens[i - 1]);
}

}  // namespace

GroupLabel LabelFor(bool sensitive, bool important) {
  if (sensitive) {
    return important ? GroupLabel::kSensitiveImportant
                     : GroupLabel::kSensitiveUnimportant;
  }
  return important ? GroupLabel::kPublicImportant
                   : GroupLabel::kPublicUnimportant;
}

absl::StatusOr<GroupLabel> GroupFromNumber(int number) {
  if (number < 1 || number > 4) {
    return absl::InvalidArgumentError(
        absl::StrFormat("group label must be in 1..4, got %d", number));
  }
  return static_cast<GroupLabel>(number);
}

void Gazetteers::Add(absl::string_view category, absl::string_view entry) {
  std::vector<std::string> tokens =
      absl::StrSplit(entry, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
  if (tokens.empty()) return;
  const std::string first = tokens.front();
  by_first_token_[first].push_back(
      Entry{std::move(tokens), std::string(category)});
}

absl::Status Gazetteers::LoadFile(absl::string_view category,
                                  const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open gazetteer %s", path));
  }
  std::string line;
  while (std::getline(in, line)) Add(category, line);
  return absl::OkStatus();
}

std::optional<Span> Gazetteers::LongestMatchAt(
    std::span<const std::string> tokens, size_t start) const {
  auto it = by_first_token_.find(tokens[start]);
  if (it == by_first_token_.end()) return std::nullopt;
  const Entry* best = nullptr;
  for (const Entry& entry : it->second) {
    if (start + entry.tokens.size() > tokens.size()) continue;
    if (best != nullptr && entry.tokens.size() <= best->tokens.size()) continue;
    if (std::equal(entry.tokens.begin(), entry.tokens.end(),
                   tokens.begin() + start)) {
      best = &entry;
    }
  }
  if (best == nullptr) return std::nullopt;
  return Span{start, start + best->tokens.size(), best->category};
}

bool LooksLikeNumericId(absl::string_view token) {
  size_t run = 0;
  for (char c : token) {
    run = IsDigit(c) ? run + 1 : 0;
    if (run >= 4) return true;
  }
  // Digit groups joined by '-' or '/', e.g. 123-45-6789 or 10/16/26.
  bool saw_separator = false;
  bool in_group = false;
  for (char c : token) {
    if (IsDigit(c)) {
      in_group = true;
    } else if ((c == '-' || c == '/') && in_group) {
      saw_separator = true;
      in_group = false;
    } else {
      return false;
    }
  }
  return saw_separator && in_group;
}

std::vector<Span> ResolveOverlaps(std::vector<Span> candidates) {
  std::vector<size_t> order(candidates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const Span& x = candidates[a];
    const Span& y = candidates[b];
    const size_t len_x = x.end - x.start;
    const size_t len_y = y.end - y.start;
    if (len_x != len_y) return len_x > len_y;
    return x.start < y.start;
  });
  std::vector<Span> chosen;
  for (size_t i : order) {
    const Span& span = candidates[i];
    const bool overlaps =
        std::any_of(chosen.begin(), chosen.end(), [&](const Span& c) {
          return span.start < c.end && c.start < span.end;
        });
    if (!overlaps) chosen.push_back(std::move(candidates[i]));
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  return chosen;
}

std::vector<Span> RuleBasedDetector::DetectSpans(
    std::span<const std::string> tokens) const {
  std::vector<Span> candidates;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (LooksLikeNumericId(tokens[i])) {
      candidates.push_back(Span{i, i + 1, kCategoryNumericId});
    }
  }
  if (!gazetteers_.empty()) {
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (auto match = gazetteers_.LongestMatchAt(tokens, i)) {
        candidates.push_back(*std::move(match));
      }
    }
  }
  for (size_t i = 0; i < tokens.size();) {
    if (!IsCapitalized(tokens[i]) || IsSentenceInitial(tokens, i)) {
      ++i;
      continue;
    }
    size_t end = i + 1;
    while (end < tokens.size() && IsCapitalized(tokens[end])) ++end;
    candidates.push_back(Span{i, end, kCategoryPerson});
    i = end;
  }
  return ResolveOverlaps(std::move(candidates));
}

std::vector<Span> FixedSpanOracle::DetectSpans(
    std::span<const std::string> tokens) const {
  std::vector<Span> valid;
  for (const Span& span : spans_) {
    if (span.start < span.end && span.end <= tokens.size()) {
      valid.push_back(span);
    }
  }
  return ResolveOverlaps(std::move(valid));
}

absl::StatusOr<ImportanceConfig> ImportanceConfig::Create(
    double tau, std::optional<std::span<const double>> query_vector) {
  if (!std::isfinite(tau)) {
    return absl::InvalidArgumentError("tau must be finite");
  }
  ImportanceConfig config;
  config.tau = tau;
  if (query_vector) {
    ASSIGN_OR_RETURN(UnitVector query, UnitVector::Normalize(*query_vector));
    config.query = std::move(query);
  }
  return config;
}

absl::StatusOr<ImportanceResult> ImportanceScore(
    std::span<const double> token_unit, const ImportanceConfig& config) {
  if (!config.query) return ImportanceResult{0.0, false};
  if (token_unit.size() != config.query->dim()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension mismatch: token %d vs query %d",
                        token_unit.size(), config.query->dim()));
  }
  const double score = Dot(token_unit, config.query->components());
  return ImportanceResult{score, score >= config.tau};
}

absl::StatusOr<UnitVector> QueryVectorFromTokens(
    std::span<const std::string> tokens, const EmbeddingStore& store) {
  std::vector<double> sum(store.dim(), 0.0);
  size_t found = 0;
  for (const std::string& token : tokens) {
    auto index = store.IndexOf(token);
    if (!index) continue;
    ++found;
    auto unit = store.unit_row(*index);
    for (size_t k = 0; k < sum.size(); ++k) sum[k] += unit[k];
  }
  if (found == 0) {
    return absl::NotFoundError("no query token is in the vocabulary");
  }
  return UnitVector::Normalize(sum);
}

std::vector<GroupLabel> AssignGroupLabels(size_t num_tokens,
                                          std::span<const Span> spans,
                                          const std::vector<bool>& important) {
  std::vector<bool> sensitive(num_tokens, false);
  std::vector<bool> token_importance = important;
  token_importance.resize(num_tokens, false);
  std::vector<bool> effective_importance = token_importance;
  for (const Span& span : spans) {
    const size_t end = std::min(span.end, num_tokens);
    bool any_important = false;
    for (size_t i = span.start; i < end; ++i) {
      any_important = any_important || token_importance[i];
    }
    for (size_t i = span.start; i < end; ++i) {
      sensitive[i] = true;
      effective_importance[i] = any_important;
    }
  }
  std::vector<GroupLabel> labels(num_tokens);
  for (size_t i = 0; i < num_tokens; ++i) {
    labels[i] = LabelFor(sensitive[i], effective_importance[i]);
  }
  return labels;
}

absl::StatusOr<std::vector<GroupLabel>> AssignGroups(
    std::span<const std::string> tokens, const EmbeddingStore& store,
    const SensitivityOracle& oracle, const ImportanceConfig& config) {
  std::vector<bool> important(tokens.size(), false);
  for (size_t i = 0; i < tokens.size(); ++i) {
    ASSIGN_OR_RETURN(const TokenEmbedding embedding, store.Lookup(tokens[i]));
    ASSIGN_OR_RETURN(const ImportanceResult result,
                     ImportanceScore(embedding.unit, config));
    important[i] = result.important;
  }
  const std::vector<Span> spans = oracle.DetectSpans(tokens);
  return AssignGroupLabels(tokens.size(), spans, important);
}

}  // namespace stamp
