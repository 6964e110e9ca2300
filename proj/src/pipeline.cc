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

#include "stamp/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "absl/strings/str_format.h"
#include "stamp/status_macros.h"

namespace stamp {
namespace {

uint64_t HashString(absl::string_view s) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : s) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

absl::StatusOr<ImportanceConfig> ResolveImportance(const Document& doc,
                                                   const EmbeddingStore& store,
                                                   double tau) {
  if (doc.query_vector) {
    if (doc.query_vector->size() != store.dim()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "document %s: query_vector has %d components, store d=%d", doc.id,
          doc.query_vector->size(), store.dim()));
    }
    return ImportanceConfig::Create(
        tau, std::span<const double>(*doc.query_vector));
  }
  if (doc.query) {
    const std::vector<std::string> query_tokens =
        TokenTexts(Tokenize(*doc.query));
    auto query = QueryVectorFromTokens(query_tokens, store);
    if (query.ok()) {
      ASSIGN_OR_RETURN(ImportanceConfig config,
                       ImportanceConfig::Create(tau, std::nullopt));
      config.query = *std::move(query);
      return config;
    }
    if (!absl::IsNotFound(query.status())) return query.status();
  }
  return ImportanceConfig::Create(tau, std::nullopt);
}

// Mean stamp budget over the positions that will actually be privatized.
double MatchedBudget(std::span<const GroupLabel> labels,
                     std::span<const std::optional<size_t>> rows,
                     const BudgetVector& stamp_budgets, double fallback) {
  double total = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!rows[i]) continue;
    total += stamp_budgets[labels[i]];
    ++count;
  }
  return count == 0 ? fallback : total / static_cast<double>(count);
}

}  // namespace

absl::string_view FrameworkName(Framework framework) {
  return framework == Framework::kStamp ? "stamp" : "uniform";
}

absl::StatusOr<Framework> ParseFramework(absl::string_view name) {
  if (name == "stamp") return Framework::kStamp;
  if (name == "uniform") return Framework::kUniform;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown framework \"%s\"", name));
}

absl::string_view OovPolicyName(OovPolicy policy) {
  switch (policy) {
    case OovPolicy::kMask:
      return "mask";
    case OovPolicy::kPassthrough:
      return "passthrough";
    case OovPolicy::kError:
      return "error";
  }
  return "unknown";
}

absl::StatusOr<OovPolicy> ParseOovPolicy(absl::string_view name) {
  for (OovPolicy policy :
       {OovPolicy::kMask, OovPolicy::kPassthrough, OovPolicy::kError}) {
    if (name == OovPolicyName(policy)) return policy;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown oov_policy \"%s\"", name));
}

absl::Status RunConfig::Validate() const {
  RETURN_IF_ERROR(mechanism.Validate());
  RETURN_IF_ERROR(strategy.Validate());
  if (!std::isfinite(base_eps) || base_eps < 0.0) {
    return absl::InvalidArgumentError("base_eps must be finite and >= 0");
  }
  if (!std::isfinite(tau)) return absl::InvalidArgumentError("tau must be finite");
  if (mask_token.empty()) {
    return absl::InvalidArgumentError("mask_token must be nonempty");
  }
  return absl::OkStatus();
}

uint64_t TokenStreamId(absl::string_view doc_id, size_t position) {
  return CombineStreamIds(HashString(doc_id), position);
}

absl::StatusOr<std::string> PrivatizeToken(std::span<const double> embedding,
                                           double epsilon,
                                           const MechanismConfig& mechanism,
                                           DecodeRule rule,
                                           const EmbeddingStore& store,
                                           RandomSource& rng) {
  ASSIGN_OR_RETURN(const PrivatizedVector noisy,
                   Privatize(embedding, mechanism, epsilon, rng));
  ASSIGN_OR_RETURN(const DecodeResult decoded,
                   Decode(noisy.components, store, rule));
  return decoded.token;
}

absl::StatusOr<PrivatizedContext> PrivatizeDocument(
    const Document& doc, const EmbeddingStore& store,
    const SensitivityOracle& oracle, const RunConfig& config) {
  if (doc.id.empty()) return absl::InvalidArgumentError("document id is empty");
  if (!IsValidUtf8(doc.text)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("document %s: text is not valid UTF-8", doc.id));
  }
  RETURN_IF_ERROR(config.Validate());

  const std::vector<Token> tokens = Tokenize(doc.text);
  const size_t n = tokens.size();
  PrivatizedContext context;
  context.id = doc.id;
  context.tokens_original = TokenTexts(tokens);

  std::vector<std::optional<size_t>> rows(n);
  for (size_t i = 0; i < n; ++i) {
    rows[i] = store.IndexOf(context.tokens_original[i]);
    if (!rows[i] && config.oov_policy == OovPolicy::kError) {
      return absl::NotFoundError(
          absl::StrFormat("document %s: out-of-vocabulary token \"%s\"",
                          doc.id, context.tokens_original[i]));
    }
  }

  // Grouping map.
  ASSIGN_OR_RETURN(const ImportanceConfig importance,
                   ResolveImportance(doc, store, config.tau));
  std::vector<bool> important(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (!rows[i]) continue;
    ASSIGN_OR_RETURN(const ImportanceResult r,
                     ImportanceScore(store.unit_row(*rows[i]), importance));
    important[i] = r.important;
  }
  const std::vector<Span> spans =
      doc.sensitive_spans
          ? FixedSpanOracle(*doc.sensitive_spans)
                .DetectSpans(context.tokens_original)
          : oracle.DetectSpans(context.tokens_original);
  context.labels = AssignGroupLabels(n, spans, important);

  // Budgets.
  ASSIGN_OR_RETURN(const BudgetVector stamp_budgets,
                   Allocate(config.base_eps, config.strategy));
  BudgetVector budgets = stamp_budgets;
  if (config.framework == Framework::kUniform) {
    const double uniform_eps =
        config.match_stamp_budget
            ? MatchedBudget(context.labels, rows, stamp_budgets,
                            config.base_eps)
            : config.base_eps;
    budgets.eps.fill(uniform_eps);
  }
  context.receipt = BuildReceipt(context.labels, budgets, config.mechanism);

  // Per-position release.
  context.tokens_private.resize(n);
  for (size_t i = 0; i < n; ++i) {
    if (!rows[i]) {
      if (config.oov_policy == OovPolicy::kPassthrough) {
        context.tokens_private[i] = context.tokens_original[i];
        MarkUnprotected(context.receipt, i);
      } else {
        context.tokens_private[i] = config.mask_token;
        MarkMasked(context.receipt, i);
      }
      continue;
    }
    const double eps = budgets[context.labels[i]];
    if (eps == 0.0) {
      context.tokens_private[i] = config.mask_token;
      MarkMasked(context.receipt, i);
      continue;
    }
    RandomSource rng(config.seed, TokenStreamId(doc.id, i));
    ASSIGN_OR_RETURN(context.tokens_private[i],
                     PrivatizeToken(store.row(*rows[i]), eps, config.mechanism,
                                    config.decode_rule, store, rng));
  }
  context.text_private =
      Detokenize(doc.text, tokens, context.tokens_private);
  return context;
}

absl::StatusOr<std::vector<PrivatizedContext>> PrivatizeCorpus(
    std::span<const Document> docs, const EmbeddingStore& store,
    const SensitivityOracle& oracle, const RunConfig& config, int workers) {
  RETURN_IF_ERROR(config.Validate());
  std::vector<absl::StatusOr<PrivatizedContext>> results(
      docs.size(), absl::UnknownError("not processed"));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < docs.size(); i = next.fetch_add(1)) {
      results[i] = PrivatizeDocument(docs[i], store, oracle, config);
    }
  };
  const size_t threads =
      std::clamp<size_t>(static_cast<size_t>(std::max(workers, 1)), 1,
                         std::max<size_t>(docs.size(), 1));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  std::vector<PrivatizedContext> out;
  out.reserve(docs.size());
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

absl::StatusOr<UtilityReport> EvaluateRun(
    std::span<const PrivatizedContext> contexts, const EmbeddingStore& store,
    absl::string_view mask_token) {
  if (contexts.empty()) {
    return absl::InvalidArgumentError("nothing to evaluate");
  }
  UtilityReport report;
  report.documents = contexts.size();
  size_t recovered = 0;
  size_t masked = 0;
  std::array<size_t, 4> group_recovered = {0, 0, 0, 0};
  double cosine_sum = 0.0;

  for (const PrivatizedContext& c : contexts) {
    const size_t n = c.tokens_original.size();
    if (c.tokens_private.size() != n || c.labels.size() != n) {
      return absl::InvalidArgumentError(
          absl::StrFormat("context %s is not aligned", c.id));
    }
    std::vector<double> mean_original(store.dim(), 0.0);
    std::vector<double> mean_private(store.dim(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      const size_t slot = GroupSlot(c.labels[i]);
      ++report.group_tokens[slot];
      if (c.tokens_private[i] == c.tokens_original[i]) {
        ++recovered;
        ++group_recovered[slot];
      }
      if (c.tokens_private[i] == mask_token) ++masked;
      if (auto row = store.IndexOf(c.tokens_original[i])) {
        const auto u = store.unit_row(*row);
        for (size_t k = 0; k < u.size(); ++k) mean_original[k] += u[k];
      }
      if (auto row = store.IndexOf(c.tokens_private[i])) {
        const auto u = store.unit_row(*row);
        for (size_t k = 0; k < u.size(); ++k) mean_private[k] += u[k];
      }
    }
    report.tokens += n;
    const double norms = L2Norm(mean_original) * L2Norm(mean_private);
    if (norms > 0.0) {
      cosine_sum += Dot(mean_original, mean_private) / norms;
    }
  }

  const double total = static_cast<double>(report.tokens);
  report.self_recovery = report.tokens == 0 ? 0.0 : recovered / total;
  report.mask_rate = report.tokens == 0 ? 0.0 : masked / total;
  for (size_t g = 0; g < 4; ++g) {
    report.group_recovery[g] =
        report.group_tokens[g] == 0
            ? std::nan("")
            : static_cast<double>(group_recovered[g]) /
                  static_cast<double>(report.group_tokens[g]);
  }
  report.context_cosine = cosine_sum / static_cast<double>(contexts.size());
  return report;
}

}  // namespace stamp
