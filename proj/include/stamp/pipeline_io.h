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

#ifndef STAMP_PIPELINE_IO_H_
#define STAMP_PIPELINE_IO_H_

// JSON and JSONL encodings of documents, run configs, receipts and
// privatized contexts.

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "stamp/pipeline.h"

namespace stamp {

using Json = nlohmann::ordered_json;

// {"id", "text", "query"?, "query_vector"?, "sensitive_spans"?}
absl::StatusOr<Document> DocumentFromJson(const Json& j);
absl::StatusOr<std::vector<Document>> ReadDocuments(const std::string& path);
absl::Status WriteDocuments(const std::vector<Document>& docs,
                            const std::string& path);
Json DocumentToJson(const Document& doc);

Json ReceiptToJson(const PrivacyReceipt& receipt);
// {"id", "text_private", "tokens_private", "labels", "receipt"}
Json ContextToJson(const PrivatizedContext& context);
absl::Status WriteContexts(const std::vector<PrivatizedContext>& contexts,
                           const std::string& path);
// Reads the output JSONL back as raw JSON objects (for inspection).
absl::StatusOr<std::vector<Json>> ReadJsonLines(const std::string& path);

// Every RunConfig field is optional in the JSON; missing ones keep their
// defaults. Unknown keys are ignored.
absl::StatusOr<RunConfig> RunConfigFromJson(const Json& j);
Json RunConfigToJson(const RunConfig& config);
absl::StatusOr<Json> ReadJsonFile(const std::string& path);

// Applies STAMP_SEED from the environment, if set.
absl::Status ApplyEnvironmentOverrides(RunConfig& config);

}  // namespace stamp

#endif  // STAMP_PIPELINE_IO_H_
