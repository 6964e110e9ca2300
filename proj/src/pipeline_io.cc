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

#include "stamp/pipeline_io.h"

#include <cstdlib>
#include <fstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "stamp/status_macros.h"

namespace stamp {
namespace {

absl::Status JsonError(const std::exception& e, absl::string_view where) {
  return absl::InvalidArgumentError(
      absl::StrFormat("%s: %s", where, e.what()));
}

std::array<double, 4> ReadFour(const Json& j, absl::string_view name) {
  const auto values = j.get<std::vector<double>>();
  if (values.size() != 4) {
    throw std::invalid_argument(
        absl::StrFormat("%s must have exactly 4 entries", name));
  }
  return {values[0], values[1], values[2], values[3]};
}

absl::StatusOr<DecodeRule> ParseDecodeRule(absl::string_view name) {
  for (DecodeRule rule :
       {DecodeRule::kCosineArgmax, DecodeRule::kNormalizedDot,
        DecodeRule::kGeodesicArgmin, DecodeRule::kEuclideanArgmin}) {
    if (name == DecodeRuleName(rule)) return rule;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown decode_rule \"%s\"", name));
}

}  // namespace

absl::StatusOr<Document> DocumentFromJson(const Json& j) {
  try {
    Document doc;
    doc.id = j.at("id").get<std::string>();
    doc.text = j.at("text").get<std::string>();
    if (j.contains("query") && !j["query"].is_null()) {
      doc.query = j["query"].get<std::string>();
    }
    if (j.contains("query_vector") && !j["query_vector"].is_null()) {
      doc.query_vector = j["query_vector"].get<std::vector<double>>();
    }
    if (j.contains("sensitive_spans") && !j["sensitive_spans"].is_null()) {
      std::vector<Span> spans;
      for (const Json& s : j["sensitive_spans"]) {
        Span span;
        span.start = s.at("start").get<size_t>();
        span.end = s.at("end").get<size_t>();
        span.category = s.value("category", std::string(kCategoryPerson));
        if (span.start >= span.end) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "document %s: span [%d, %d) is empty", doc.id, span.start,
              span.end));
        }
        spans.push_back(std::move(span));
      }
      doc.sensitive_spans = std::move(spans);
    }
    if (doc.id.empty()) return absl::InvalidArgumentError("empty document id");
    return doc;
  } catch (const std::exception& e) {
    return JsonError(e, "document");
  }
}

Json DocumentToJson(const Document& doc) {
  Json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  if (doc.query) j["query"] = *doc.query;
  if (doc.query_vector) j["query_vector"] = *doc.query_vector;
  if (doc.sensitive_spans) {
    Json spans = Json::array();
    for (const Span& s : *doc.sensitive_spans) {
      spans.push_back(
          {{"start", s.start}, {"end", s.end}, {"category", s.category}});
    }
    j["sensitive_spans"] = std::move(spans);
  }
  return j;
}

absl::StatusOr<std::vector<Json>> ReadJsonLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  std::vector<Json> lines;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lines.push_back(Json::parse(line));
    } catch (const std::exception& e) {
      return JsonError(e, absl::StrFormat("%s:%d", path, line_no));
    }
  }
  return lines;
}

absl::StatusOr<std::vector<Document>> ReadDocuments(const std::string& path) {
  ASSIGN_OR_RETURN(const std::vector<Json> lines, ReadJsonLines(path));
  std::vector<Document> docs;
  docs.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    auto doc = DocumentFromJson(lines[i]);
    if (!doc.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s record %d: %s", path, i + 1, doc.status().message()));
    }
    docs.push_back(*std::move(doc));
  }
  return docs;
}

absl::Status WriteDocuments(const std::vector<Document>& docs,
                            const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrFormat("cannot write %s", path));
  for (const Document& doc : docs) out << DocumentToJson(doc).dump() << '\n';
  if (!out) return absl::DataLossError(absl::StrFormat("short write to %s", path));
  return absl::OkStatus();
}

Json ReceiptToJson(const PrivacyReceipt& receipt) {
  Json mechanism;
  mechanism["kind"] = MechanismKindName(receipt.mechanism.kind);
  if (receipt.mechanism.kind == MechanismKind::kFullPolar) {
    mechanism["radial_epsilon"] = receipt.mechanism.radial_epsilon;
    mechanism["radial_sensitivity"] = receipt.mechanism.radial_sensitivity;
  }
  Json j;
  j["per_token_eps"] = receipt.per_token_eps;
  j["group_counts"] = receipt.group_counts;
  j["mean_eps"] = receipt.mean_eps;
  j["total_eps"] = receipt.total_eps;
  j["delta"] = 0;
  j["metric"] = PrivacyMetricName(receipt.metric);
  j["composed_exponent_form"] = receipt.composed_exponent_form;
  j["masked_positions"] = receipt.masked_positions;
  j["unprotected_positions"] = receipt.unprotected_positions;
  j["guarantee_void"] = receipt.guarantee_void();
  j["mechanism"] = std::move(mechanism);
  return j;
}

Json ContextToJson(const PrivatizedContext& context) {
  std::vector<int> labels;
  labels.reserve(context.labels.size());
  for (GroupLabel label : context.labels) labels.push_back(GroupNumber(label));
  Json j;
  j["id"] = context.id;
  j["text_private"] = context.text_private;
  j["tokens_private"] = context.tokens_private;
  j["labels"] = labels;
  j["receipt"] = ReceiptToJson(context.receipt);
  return j;
}

absl::Status WriteContexts(const std::vector<PrivatizedContext>& contexts,
                           const std::string& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrFormat("cannot write %s", path));
  for (const PrivatizedContext& c : contexts) {
    out << ContextToJson(c).dump() << '\n';
  }
  if (!out) return absl::DataLossError(absl::StrFormat("short write to %s", path));
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> RunConfigFromJson(const Json& j) {
  RunConfig config;
  try {
    if (j.contains("mechanism")) {
      const Json& m = j["mechanism"];
      if (m.is_string()) {
        ASSIGN_OR_RETURN(config.mechanism.kind,
                         ParseMechanismKind(m.get<std::string>()));
      } else {
        ASSIGN_OR_RETURN(config.mechanism.kind,
                         ParseMechanismKind(m.at("kind").get<std::string>()));
        config.mechanism.radial_epsilon = m.value("radial_epsilon", 0.0);
        config.mechanism.radial_sensitivity =
            m.value("radial_sensitivity", 0.0);
      }
    }
    if (j.contains("strategy")) {
      const Json& s = j["strategy"];
      if (s.is_string()) {
        ASSIGN_OR_RETURN(config.strategy.kind,
                         ParseAllocationKind(s.get<std::string>()));
      } else {
        ASSIGN_OR_RETURN(config.strategy.kind,
                         ParseAllocationKind(s.at("kind").get<std::string>()));
        if (s.contains("ratio")) {
          config.strategy.ratio = ReadFour(s["ratio"], "ratio");
        }
        if (s.contains("offsets")) {
          config.strategy.offsets = ReadFour(s["offsets"], "offsets");
        }
        if (s.contains("explicit")) {
          config.strategy.explicit_eps = ReadFour(s["explicit"], "explicit");
        }
      }
    }
    config.base_eps = j.value("base_eps", config.base_eps);
    config.tau = j.value("tau", config.tau);
    if (j.contains("framework")) {
      ASSIGN_OR_RETURN(config.framework,
                       ParseFramework(j["framework"].get<std::string>()));
    }
    config.seed = j.value("seed", config.seed);
    config.mask_token = j.value("mask_token", config.mask_token);
    if (j.contains("oov_policy")) {
      ASSIGN_OR_RETURN(config.oov_policy,
                       ParseOovPolicy(j["oov_policy"].get<std::string>()));
    }
    config.match_stamp_budget =
        j.value("match_stamp_budget", config.match_stamp_budget);
    if (j.contains("decode_rule")) {
      ASSIGN_OR_RETURN(config.decode_rule,
                       ParseDecodeRule(j["decode_rule"].get<std::string>()));
    }
  } catch (const std::exception& e) {
    return JsonError(e, "config");
  }
  RETURN_IF_ERROR(config.Validate());
  return config;
}

Json RunConfigToJson(const RunConfig& config) {
  Json j;
  j["mechanism"] = {
      {"kind", MechanismKindName(config.mechanism.kind)},
      {"radial_epsilon", config.mechanism.radial_epsilon},
      {"radial_sensitivity", config.mechanism.radial_sensitivity}};
  j["strategy"] = {{"kind", AllocationKindName(config.strategy.kind)},
                   {"ratio", config.strategy.ratio},
                   {"offsets", config.strategy.offsets},
                   {"explicit", config.strategy.explicit_eps}};
  j["base_eps"] = config.base_eps;
  j["tau"] = config.tau;
  j["framework"] = FrameworkName(config.framework);
  j["seed"] = config.seed;
  j["mask_token"] = config.mask_token;
  j["oov_policy"] = OovPolicyName(config.oov_policy);
  j["match_stamp_budget"] = config.match_stamp_budget;
  j["decode_rule"] = DecodeRuleName(config.decode_rule);
  return j;
}

absl::StatusOr<Json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    return JsonError(e, path);
  }
}

absl::Status ApplyEnvironmentOverrides(RunConfig& config) {
  const char* seed = std::getenv("STAMP_SEED");
  if (seed == nullptr) return absl::OkStatus();
  uint64_t value = 0;
  if (!absl::SimpleAtoi(seed, &value)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("STAMP_SEED=\"%s\" is not an unsigned integer", seed));
  }
  config.seed = value;
  return absl::OkStatus();
}

}  // namespace stamp
