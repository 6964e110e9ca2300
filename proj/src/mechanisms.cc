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

#include "stamp/mechanisms.h"

#include <cmath>

#include "absl/strings/str_format.h"
#include "stamp/status_macros.h"

namespace stamp {
namespace {

absl::StatusOr<double> CheckedNorm(std::span<const double> e) {
  if (e.size() < 2) {
    return absl::InvalidArgumentError("embedding must have dimension >= 2");
  }
  const double norm = L2Norm(e);
  if (!std::isfinite(norm)) {
    return absl::InvalidArgumentError("non-finite embedding");
  }
  if (!(norm > 0.0)) {
    return absl::InvalidArgumentError("zero-norm embedding");
  }
  return norm;
}

}  // namespace

absl::string_view MechanismKindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kNormalizedPolar:
      return "normalized_polar";
    case MechanismKind::kFullPolar:
      return "full_polar";
    case MechanismKind::kIsotropicLaplace:
      return "isotropic_laplace";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseMechanismKind(absl::string_view name) {
  for (MechanismKind kind :
       {MechanismKind::kNormalizedPolar, MechanismKind::kFullPolar,
        MechanismKind::kIsotropicLaplace}) {
    if (name == MechanismKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown mechanism \"%s\"", name));
}

absl::string_view PrivacyMetricName(PrivacyMetric metric) {
  return metric == PrivacyMetric::kChordal ? "chordal" : "euclidean";
}

absl::Status MechanismConfig::Validate() const {
  if (kind != MechanismKind::kFullPolar) return absl::OkStatus();
  if (!std::isfinite(radial_epsilon) || radial_epsilon <= 0.0) {
    return absl::InvalidArgumentError(
        "full_polar requires radial_epsilon > 0");
  }
  if (!std::isfinite(radial_sensitivity) || radial_sensitivity <= 0.0) {
    return absl::InvalidArgumentError(
        "full_polar requires radial_sensitivity > 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> RadialNoiseScale(const MechanismConfig& config) {
  if (config.kind != MechanismKind::kFullPolar) {
    return absl::InvalidArgumentError("radial noise is full_polar only");
  }
  RETURN_IF_ERROR(config.Validate());
  return config.radial_sensitivity / config.radial_epsilon;
}

absl::StatusOr<PrivatizedVector> PrivatizeNormalizedPolar(
    std::span<const double> e, double epsilon_u, RandomSource& rng) {
  ASSIGN_OR_RETURN(const double norm, CheckedNorm(e));
  ASSIGN_OR_RETURN(const Concentration kappa, Concentration::Create(epsilon_u));
  std::vector<double> direction(e.begin(), e.end());
  for (double& x : direction) x /= norm;

  PrivatizedVector out;
  out.components.resize(e.size());
  SampleVmfInto(direction, kappa.kappa(), rng, out.components);
  out.guarantee = {0.0, epsilon_u, PrivacyMetric::kChordal};
  out.radius = 1.0;
  return out;
}

absl::StatusOr<PrivatizedVector> PrivatizeFullPolar(
    std::span<const double> e, const MechanismConfig& config, double epsilon_u,
    RandomSource& rng) {
  if (config.kind != MechanismKind::kFullPolar) {
    return absl::InvalidArgumentError("config kind must be full_polar");
  }
  ASSIGN_OR_RETURN(const double scale, RadialNoiseScale(config));
  ASSIGN_OR_RETURN(const double norm, CheckedNorm(e));
  ASSIGN_OR_RETURN(const Concentration kappa, Concentration::Create(epsilon_u));

  ASSIGN_OR_RETURN(const double radius, SampleLaplace(norm, scale, rng));
  std::vector<double> direction(e.begin(), e.end());
  for (double& x : direction) x /= norm;

  PrivatizedVector out;
  out.components.resize(e.size());
  SampleVmfInto(direction, kappa.kappa(), rng, out.components);
  for (double& x : out.components) x *= radius;
  out.guarantee = {config.radial_epsilon, epsilon_u, PrivacyMetric::kChordal};
  out.radius = radius;
  return out;
}

absl::StatusOr<PrivatizedVector> PrivatizeIsotropicLaplace(
    std::span<const double> e, double epsilon, RandomSource& rng) {
  if (!std::isfinite(L2Norm(e))) {
    return absl::InvalidArgumentError("non-finite embedding");
  }
  ASSIGN_OR_RETURN(std::vector<double> z,
                   SampleMultivariateLaplace(e, epsilon, rng));
  PrivatizedVector out;
  out.radius = L2Norm(z);
  out.components = std::move(z);
  out.guarantee = {std::nullopt, epsilon, PrivacyMetric::kEuclidean};
  return out;
}

absl::StatusOr<PrivatizedVector> Privatize(std::span<const double> e,
                                           const MechanismConfig& config,
                                           double epsilon, RandomSource& rng) {
  switch (config.kind) {
    case MechanismKind::kNormalizedPolar:
      return PrivatizeNormalizedPolar(e, epsilon, rng);
    case MechanismKind::kFullPolar:
      return PrivatizeFullPolar(e, config, epsilon, rng);
    case MechanismKind::kIsotropicLaplace:
      return PrivatizeIsotropicLaplace(e, epsilon, rng);
  }
  return absl::InvalidArgumentError("unknown mechanism kind");
}

}  // namespace stamp
