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

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "stamp/sphere_geometry.h"

namespace stamp {
namespace {

MechanismConfig FullPolar(double radial_eps, double sensitivity = 1.0) {
  MechanismConfig config;
  config.kind = MechanismKind::kFullPolar;
  config.radial_epsilon = radial_eps;
  config.radial_sensitivity = sensitivity;
  return config;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  return Dot(a, b) / (L2Norm(a) * L2Norm(b));
}

double KsStatistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / a.size() -
                                     static_cast<double>(j) / b.size()));
  }
  return worst;
}

TEST(MechanismKindTest, NamesRoundTrip) {
  for (MechanismKind kind :
       {MechanismKind::kNormalizedPolar, MechanismKind::kFullPolar,
        MechanismKind::kIsotropicLaplace}) {
    EXPECT_EQ(*ParseMechanismKind(MechanismKindName(kind)), kind);
  }
  EXPECT_FALSE(ParseMechanismKind("gaussian").ok());
}

TEST(NormalizedPolarTest, ZeroBudgetIsUniform) {
  RandomSource rng(1, 0);
  std::vector<double> e(16, 0.0);
  e[3] = 2.0;
  std::vector<double> mean(16, 0.0);
  constexpr int kSamples = 100000;
  for (int s = 0; s < kSamples; ++s) {
    const PrivatizedVector out = *PrivatizeNormalizedPolar(e, 0.0, rng);
    for (size_t i = 0; i < 16; ++i) mean[i] += out.components[i] / kSamples;
  }
  EXPECT_LT(L2Norm(mean), 0.02);
}

TEST(NormalizedPolarTest, HugeBudgetConcentrates) {
  RandomSource rng(2, 0);
  std::vector<double> e(8, 0.0);
  e[0] = 5.0;
  int close = 0;
  constexpr int kSamples = 20000;
  for (int s = 0; s < kSamples; ++s) {
    const PrivatizedVector out = *PrivatizeNormalizedPolar(e, 1e6, rng);
    close += std::acos(std::min(1.0, out.components[0])) < 0.05;
  }
  EXPECT_GT(static_cast<double>(close) / kSamples, 0.999);
}

TEST(NormalizedPolarTest, UnitOutputAndGuarantee) {
  RandomSource rng(3, 0);
  const std::vector<double> e = {0.3, -1.2, 4.0, 0.1};
  for (double eps : {0.0, 1.0, 50.0, 1e5}) {
    const PrivatizedVector out = *PrivatizeNormalizedPolar(e, eps, rng);
    EXPECT_NEAR(L2Norm(out.components), 1.0, 1e-6);
    EXPECT_EQ(out.radius, 1.0);
    EXPECT_EQ(out.guarantee.radial_eps, 0.0);
    EXPECT_EQ(out.guarantee.angular_eps, eps);
    EXPECT_EQ(out.guarantee.metric, PrivacyMetric::kChordal);
  }
}

TEST(NormalizedPolarTest, InvariantToInputScale) {
  const std::vector<double> e = {0.3, -1.2, 4.0, 0.1, 0.7, -0.4};
  std::vector<double> scaled = e;
  for (double& x : scaled) x *= 37.0;
  constexpr int kSamples = 10000;
  RandomSource rng_a(4, 0), rng_b(4, 1);
  std::vector<double> a, b;
  for (int s = 0; s < kSamples; ++s) {
    a.push_back(Cosine(PrivatizeNormalizedPolar(e, 15.0, rng_a)->components, e));
    b.push_back(
        Cosine(PrivatizeNormalizedPolar(scaled, 15.0, rng_b)->components, e));
  }
  EXPECT_LT(KsStatistic(a, b), 1.95 * std::sqrt(2.0 / kSamples));

  // With a shared stream the outputs coincide up to rounding.
  RandomSource same_a(5, 0), same_b(5, 0);
  const auto out_a = PrivatizeNormalizedPolar(e, 15.0, same_a);
  const auto out_b = PrivatizeNormalizedPolar(scaled, 15.0, same_b);
  for (size_t i = 0; i < e.size(); ++i) {
    EXPECT_NEAR(out_a->components[i], out_b->components[i], 1e-12);
  }
}

TEST(NormalizedPolarTest, RejectsBadInput) {
  RandomSource rng(6, 0);
  EXPECT_FALSE(PrivatizeNormalizedPolar(std::vector<double>{0, 0}, 1, rng).ok());
  EXPECT_FALSE(PrivatizeNormalizedPolar(std::vector<double>{1}, 1, rng).ok());
  EXPECT_FALSE(
      PrivatizeNormalizedPolar(std::vector<double>{1, NAN}, 1, rng).ok());
  EXPECT_FALSE(PrivatizeNormalizedPolar(std::vector<double>{1, 1}, -1, rng).ok());
}

TEST(FullPolarTest, RadialNoiseScale) {
  EXPECT_DOUBLE_EQ(*RadialNoiseScale(FullPolar(2.0, 1.0)), 0.5);
  EXPECT_FALSE(RadialNoiseScale(FullPolar(0.0, 1.0)).ok());
  EXPECT_FALSE(RadialNoiseScale(FullPolar(1.0, 0.0)).ok());
  EXPECT_FALSE(RadialNoiseScale(MechanismConfig{}).ok());
}

TEST(FullPolarTest, VanishingNoiseReturnsInput) {
  RandomSource rng(7, 0);
  const std::vector<double> e = {1.0, -2.0, 0.5, 0.3, 2.2, -0.7, 0.0, 1.1};
  const double norm = L2Norm(e);
  for (int t = 0; t < 100; ++t) {
    const PrivatizedVector out =
        *PrivatizeFullPolar(e, FullPolar(1e6), 1e6, rng);
    std::vector<double> diff(e.size());
    for (size_t i = 0; i < e.size(); ++i) diff[i] = out.components[i] - e[i];
    EXPECT_LT(L2Norm(diff), 0.01 * norm);
  }
}

TEST(FullPolarTest, RadiusUnbiasedAndIndependentOfDirection) {
  RandomSource rng(8, 0);
  const std::vector<double> e = {0.6, 0.8, 0.0, 0.0};
  const MechanismConfig config = FullPolar(2.0);
  constexpr int kSamples = 100000;
  std::vector<double> radii(kSamples), cosines(kSamples);
  for (int s = 0; s < kSamples; ++s) {
    const PrivatizedVector out = *PrivatizeFullPolar(e, config, 5.0, rng);
    radii[s] = out.radius;
    // Direction u' recovered from r' u'.
    cosines[s] = Dot(out.components, e) / out.radius;
    EXPECT_EQ(out.guarantee.radial_eps, 2.0);
  }
  double mr = 0, mc = 0;
  for (int s = 0; s < kSamples; ++s) {
    mr += radii[s] / kSamples;
    mc += cosines[s] / kSamples;
  }
  double srr = 0, scc = 0, src = 0;
  for (int s = 0; s < kSamples; ++s) {
    srr += (radii[s] - mr) * (radii[s] - mr);
    scc += (cosines[s] - mc) * (cosines[s] - mc);
    src += (radii[s] - mr) * (cosines[s] - mc);
  }
  const double se = std::sqrt(2.0 * 0.5 * 0.5 / kSamples);
  EXPECT_LT(std::abs(mr - 1.0), 5.0 * se);
  EXPECT_LT(std::abs(src / std::sqrt(srr * scc)), 0.01);
}

TEST(FullPolarTest, RejectsInvalidConfig) {
  RandomSource rng(9, 0);
  const std::vector<double> e = {1.0, 1.0};
  EXPECT_FALSE(PrivatizeFullPolar(e, FullPolar(0.0), 1.0, rng).ok());
  EXPECT_FALSE(PrivatizeFullPolar(e, MechanismConfig{}, 1.0, rng).ok());
  EXPECT_FALSE(
      PrivatizeFullPolar(std::vector<double>{0, 0}, FullPolar(1), 1, rng).ok());
}

TEST(IsotropicLaplaceTest, VanishingNoise) {
  RandomSource rng(10, 0);
  const std::vector<double> e = {1.0, -2.0, 0.5, 0.3, 2.2, -0.7, 0.0, 1.1};
  for (int t = 0; t < 100; ++t) {
    const PrivatizedVector out = *PrivatizeIsotropicLaplace(e, 1e6, rng);
    std::vector<double> diff(e.size());
    for (size_t i = 0; i < e.size(); ++i) diff[i] = out.components[i] - e[i];
    EXPECT_LT(L2Norm(diff), 1e-4 * e.size());
  }
}

TEST(IsotropicLaplaceTest, CenteredOnInput) {
  RandomSource rng(11, 0);
  const std::vector<double> e = {1.0, -2.0, 0.5};
  const double eps = 3.0;
  constexpr int kSamples = 100000;
  std::vector<double> mean(3, 0.0);
  for (int s = 0; s < kSamples; ++s) {
    const PrivatizedVector out = *PrivatizeIsotropicLaplace(e, eps, rng);
    for (size_t i = 0; i < 3; ++i) mean[i] += out.components[i] / kSamples;
    EXPECT_FALSE(out.guarantee.radial_eps.has_value());
  }
  // Per-coordinate variance E[R^2] / d = (d + 1) / eps^2.
  const double se = std::sqrt(4.0 / (eps * eps) / kSamples);
  for (size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(mean[i] - e[i]), 5 * se);
}

TEST(IsotropicLaplaceTest, GuaranteeAndValidation) {
  RandomSource rng(12, 0);
  const std::vector<double> e = {1.0, 2.0};
  const PrivatizedVector out = *PrivatizeIsotropicLaplace(e, 4.0, rng);
  EXPECT_EQ(out.guarantee.angular_eps, 4.0);
  EXPECT_EQ(out.guarantee.metric, PrivacyMetric::kEuclidean);
  EXPECT_DOUBLE_EQ(out.radius, L2Norm(out.components));
  EXPECT_FALSE(PrivatizeIsotropicLaplace(e, 0.0, rng).ok());
  EXPECT_FALSE(PrivatizeIsotropicLaplace(e, -1.0, rng).ok());
}

TEST(PrivatizeTest, DispatchesOnKind) {
  const std::vector<double> e = {1.0, 2.0, 3.0};
  for (MechanismConfig config :
       {MechanismConfig{}, FullPolar(3.0),
        MechanismConfig{MechanismKind::kIsotropicLaplace, 0.0, 0.0}}) {
    RandomSource a(13, 0), b(13, 0);
    const PrivatizedVector via_dispatch = *Privatize(e, config, 7.0, a);
    PrivatizedVector direct;
    switch (config.kind) {
      case MechanismKind::kNormalizedPolar:
        direct = *PrivatizeNormalizedPolar(e, 7.0, b);
        break;
      case MechanismKind::kFullPolar:
        direct = *PrivatizeFullPolar(e, config, 7.0, b);
        break;
      case MechanismKind::kIsotropicLaplace:
        direct = *PrivatizeIsotropicLaplace(e, 7.0, b);
        break;
    }
    EXPECT_EQ(via_dispatch.components, direct.components);
    EXPECT_EQ(config.metric(), via_dispatch.guarantee.metric);
  }
}

}  // namespace
}  // namespace stamp
