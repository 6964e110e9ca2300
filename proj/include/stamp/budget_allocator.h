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

#ifndef STAMP_BUDGET_ALLOCATOR_H_
#define STAMP_BUDGET_ALLOCATOR_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "stamp/grouping.h"
#include "stamp/mechanisms.h"

namespace stamp {

// One epsilon per group, indexed by GroupSlot(label).
struct BudgetVector {
  std::array<double, 4> eps = {0.0, 0.0, 0.0, 0.0};

  double operator[](GroupLabel label) const { return eps[GroupSlot(label)]; }
  absl::Status Validate() const;
  bool operator==(const BudgetVector&) const = default;
};

enum class AllocationKind { kRatio, kOffset, kExplicit };

absl::string_view AllocationKindName(AllocationKind kind);
absl::StatusOr<AllocationKind> ParseAllocationKind(absl::string_view name);

struct AllocationStrategy {
  AllocationKind kind = AllocationKind::kOffset;
  // eps[c] = base * ratio[c] / ratio[group 2].
  std::array<double, 4> ratio = {2.0, 1.0, 4.0, 3.0};
  // eps[c] = base + offsets[c].
  std::array<double, 4> offsets = {100.0, 0.0, 400.0, 300.0};
  // eps[c] = explicit_eps[c]; base is ignored.
  std::array<double, 4> explicit_eps = {0.0, 0.0, 0.0, 0.0};

  absl::Status Validate() const;
};

absl::StatusOr<BudgetVector> Allocate(double base_eps,
                                      const AllocationStrategy& strategy);

// Per-document privacy accounting. delta is always 0.
struct PrivacyReceipt {
  std::vector<double> per_token_eps;
  std::array<size_t, 4> group_counts = {0, 0, 0, 0};
  double mean_eps = 0.0;
  // Sum of per-token budgets: the coefficient of the composed sequence bound
  // when every position moves by distance at most 1.
  double total_eps = 0.0;
  // Positions whose budget was overridden to 0 (masked regardless of group).
  std::vector<size_t> masked_positions;
  // Positions released without privatization; any such position voids the
  // guarantee for the document.
  std::vector<size_t> unprotected_positions;
  std::string composed_exponent_form;
  MechanismConfig mechanism;
  PrivacyMetric metric = PrivacyMetric::kChordal;

  bool guarantee_void() const { return !unprotected_positions.empty(); }
};

inline constexpr char kComposedExponentForm[] =
    "sum_i eps^(c_i) * d_u(w_i, w'_i)";

// per_token_eps[i] = budgets[labels[i]], with counts and the mean.
PrivacyReceipt BuildReceipt(std::span<const GroupLabel> labels,
                            const BudgetVector& budgets,
                            const MechanismConfig& mechanism);

// Marks position `i` as masked: its budget becomes 0 and the mean is updated.
void MarkMasked(PrivacyReceipt& receipt, size_t i);
// Marks position `i` as released in the clear (budget +inf).
void MarkUnprotected(PrivacyReceipt& receipt, size_t i);

// The single per-token budget that gives a uniform run the same total spend
// as `receipt`, i.e. its mean budget.
double MatchedUniformBudget(const PrivacyReceipt& receipt);

}  // namespace stamp

#endif  // STAMP_BUDGET_ALLOCATOR_H_
