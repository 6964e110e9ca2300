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

#include "stamp/budget_allocator.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_format.h"

namespace stamp {
namespace {

void RecomputeTotals(PrivacyReceipt& receipt) {
  receipt.total_eps = std::accumulate(receipt.per_token_eps.begin(),
                                      receipt.per_token_eps.end(), 0.0);
  receipt.mean_eps =
      receipt.per_token_eps.empty()
          ? 0.0
          : receipt.total_eps / static_cast<double>(receipt.per_token_eps.size());
}

absl::Status CheckAllNonNegative(const std::array<double, 4>& values,
                                 absl::string_view what) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s entries must be finite and >= 0", what));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status BudgetVector::Validate() const {
  return CheckAllNonNegative(eps, "budget");
}

absl::string_view AllocationKindName(AllocationKind kind) {
  switch (kind) {
    case AllocationKind::kRatio:
      return "ratio";
    case AllocationKind::kOffset:
      return "offset";
    case AllocationKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

absl::StatusOr<AllocationKind> ParseAllocationKind(absl::string_view name) {
  for (AllocationKind kind : {AllocationKind::kRatio, AllocationKind::kOffset,
                              AllocationKind::kExplicit}) {
    if (name == AllocationKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown allocation strategy \"%s\"", name));
}

absl::Status AllocationStrategy::Validate() const {
  switch (kind) {
    case AllocationKind::kRatio:
      for (double r : ratio) {
        if (!std::isfinite(r) || r <= 0.0) {
          return absl::InvalidArgumentError("ratio entries must be > 0");
        }
      }
      return absl::OkStatus();
    case AllocationKind::kOffset:
      return CheckAllNonNegative(offsets, "offset");
    case AllocationKind::kExplicit:
      return CheckAllNonNegative(explicit_eps, "explicit budget");
  }
  return absl::InvalidArgumentError("unknown allocation kind");
}

absl::StatusOr<BudgetVector> Allocate(double base_eps,
                                      const AllocationStrategy& strategy) {
  if (!std::isfinite(base_eps) || base_eps < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("base epsilon must be finite and >= 0, got %g",
                        base_eps));
  }
  if (auto status = strategy.Validate(); !status.ok()) return status;

  BudgetVector budgets;
  const size_t anchor = GroupSlot(GroupLabel::kSensitiveUnimportant);
  for (size_t c = 0; c < 4; ++c) {
    switch (strategy.kind) {
      case AllocationKind::kRatio:
        budgets.eps[c] = base_eps * strategy.ratio[c] / strategy.ratio[anchor];
        break;
      case AllocationKind::kOffset:
        budgets.eps[c] = base_eps + strategy.offsets[c];
        break;
      case AllocationKind::kExplicit:
        budgets.eps[c] = strategy.explicit_eps[c];
        break;
    }
  }
  if (auto status = budgets.Validate(); !status.ok()) return status;
  return budgets;
}

PrivacyReceipt BuildReceipt(std::span<const GroupLabel> labels,
                            const BudgetVector& budgets,
                            const MechanismConfig& mechanism) {
  PrivacyReceipt receipt;
  receipt.per_token_eps.reserve(labels.size());
  for (GroupLabel label : labels) {
    receipt.per_token_eps.push_back(budgets[label]);
    ++receipt.group_counts[GroupSlot(label)];
  }
  receipt.composed_exponent_form = kComposedExponentForm;
  receipt.mechanism = mechanism;
  receipt.metric = mechanism.metric();
  RecomputeTotals(receipt);
  return receipt;
}

void MarkMasked(PrivacyReceipt& receipt, size_t i) {
  receipt.per_token_eps[i] = 0.0;
  receipt.masked_positions.push_back(i);
  RecomputeTotals(receipt);
}

void MarkUnprotected(PrivacyReceipt& receipt, size_t i) {
  receipt.per_token_eps[i] = std::numeric_limits<double>::infinity();
  receipt.unprotected_positions.push_back(i);
  RecomputeTotals(receipt);
}

double MatchedUniformBudget(const PrivacyReceipt& receipt) {
  return receipt.mean_eps;
}

}  // namespace stamp
