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

#ifndef STAMP_STATUS_MACROS_H_
#define STAMP_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define STAMP_MACROS_CONCAT_INNER_(x, y) x##y
#define STAMP_MACROS_CONCAT_(x, y) STAMP_MACROS_CONCAT_INNER_(x, y)

// Returns early from the enclosing function if `expr` is not OK.
#define RETURN_IF_ERROR(expr)                  \
  do {                                         \
    const absl::Status _status = (expr);       \
    if (!_status.ok()) return _status;         \
  } while (0)

#define STAMP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                 \
  if (!statusor.ok()) return statusor.status();            \
  lhs = *std::move(statusor)

// Evaluates `rexpr` (an absl::StatusOr<T>), returning its status on error and
// otherwise moving the value into `lhs`.
#define ASSIGN_OR_RETURN(lhs, rexpr) \
  STAMP_ASSIGN_OR_RETURN_IMPL_(      \
      STAMP_MACROS_CONCAT_(_statusor_, __LINE__), lhs, rexpr)

#endif  // STAMP_STATUS_MACROS_H_
