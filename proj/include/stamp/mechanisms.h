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

#ifndef STAMP_MECHANISMS_H_
#define STAMP_MECHANISMS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "stamp/sphere_geometry.h"

namespace stamp {

enum class MechanismKind {
  // Direction-only vMF on the normalized embedding. Released norm is 1.
  kNormalizedPolar,
  // Laplace noise on the radius and vMF noise on the direction.
  kFullPolar,
  // Multivariate Laplace in R^d with density ~ exp(-eps ||z - e||_2).
  kIsotropicLaplace,
};

enum class PrivacyMetric { kChordal, kEuclidean };

absl::string_view MechanismKindName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanismKind(absl::string_view name);
absl::string_view PrivacyMetricName(PrivacyMetric metric);

struct MechanismConfig {
  MechanismKind kind = MechanismKind::kNormalizedPolar;
  // Radial budget and sensitivity; read only by kFullPolar, which requires
  // both to be positive. There is deliberately no default sensitivity.
  double radial_epsilon = 0.0;
  double radial_sensitivity = 0.0;

  absl::Status Validate() const;
  PrivacyMetric metric() const {
    return kind == MechanismKind::kIsotropicLaplace ? PrivacyMetric::kEuclidean
                                                    : PrivacyMetric::kChordal;
  }
};

// The (radial, angular) metric-LDP parameters a single call satisfied, with
// delta = 0. For the isotropic mechanism `radial_eps` is empty and
// `angular_eps` holds its single epsilon.
struct Guarantee {
  std::optional<double> radial_eps;
  double angular_eps = 0.0;
  PrivacyMetric metric = PrivacyMetric::kChordal;
};

struct PrivatizedVector {
  std::vector<double> components;
  Guarantee guarantee;
  // Released signed radius r' for full polar (the output is r' u', so a
  // negative r' flips the direction); 1 for normalized polar; the output norm
  // for isotropic Laplace.
  double radius = 1.0;
};

// e / ||e|| perturbed by vMF(kappa = epsilon_u). Guarantee (0, epsilon_u).
absl::StatusOr<PrivatizedVector> PrivatizeNormalizedPolar(
    std::span<const double> e, double epsilon_u, RandomSource& rng);

// r' u' with r' ~ Laplace(||e||, radial_sensitivity / radial_epsilon) and
// u' ~ vMF(e / ||e||, epsilon_u), drawn independently.
absl::StatusOr<PrivatizedVector> PrivatizeFullPolar(
    std::span<const double> e, const MechanismConfig& config, double epsilon_u,
    RandomSource& rng);

absl::StatusOr<PrivatizedVector> PrivatizeIsotropicLaplace(
    std::span<const double> e, double epsilon, RandomSource& rng);

// Dispatches on config.kind; `epsilon` is the per-call angular (or
// isotropic) budget.
absl::StatusOr<PrivatizedVector> Privatize(std::span<const double> e,
                                           const MechanismConfig& config,
                                           double epsilon, RandomSource& rng);

// b_r = radial_sensitivity / radial_epsilon.
absl::StatusOr<double> RadialNoiseScale(const MechanismConfig& config);

}  // namespace stamp

#endif  // STAMP_MECHANISMS_H_
