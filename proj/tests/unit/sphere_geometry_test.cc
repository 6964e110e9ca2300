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


#include "stamp/sphere_geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "boost/math/special_functions/bessel.hpp"
#include "gtest/gtest.h"

namespace stamp {
namespace {

UnitVector Unit(std::vector<double> v) { return *UnitVector::Normalize(v); }

UnitVector Basis(size_t dim, size_t axis, double sign = 1.0) {
  std::vector<double> v(dim, 0.0);
  v[axis] = sign;
  return Unit(v);
}

UnitVector RandomUnit(size_t dim, RandomSource& rng) {
  std::vector<double> v(dim);
  SampleUniformSphereInto(rng, v);
  return Unit(v);
}

// Two-sample Kolmogorov-Smirnov statistic.
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

TEST(ChordalDistanceTest, Examples) {
  const UnitVector e1 = Basis(3, 0);
  EXPECT_DOUBLE_EQ(*ChordalDistance(e1, e1), 0.0);
  EXPECT_DOUBLE_EQ(*ChordalDistance(e1, Basis(3, 0, -1.0)), 2.0);
  EXPECT_NEAR(*ChordalDistance(e1, Basis(3, 1)), std::sqrt(2.0), 1e-15);
}

TEST(ChordalDistanceTest, DimensionMismatch) {
  EXPECT_FALSE(ChordalDistance(Basis(3, 0), Basis(4, 0)).ok());
  EXPECT_FALSE(GeodesicDistance(Basis(3, 0), Basis(4, 0)).ok());
}

TEST(ChordalDistanceTest, MetricAxiomsOnRandomTriples) {
  RandomSource rng(11, 0);
  for (int t = 0; t < 2000; ++t) {
    const size_t dim = 2 + t % 30;
    const UnitVector a = RandomUnit(dim, rng);
    const UnitVector b = RandomUnit(dim, rng);
    const UnitVector c = RandomUnit(dim, rng);
    const double ab = *ChordalDistance(a, b);
    EXPECT_EQ(ab, *ChordalDistance(b, a));
    EXPECT_LE(*ChordalDistance(a, c),
              ab + *ChordalDistance(b, c) + 1e-12);
  }
}

TEST(GeodesicDistanceTest, Examples) {
  const UnitVector u = Unit({0.3, -0.2, 0.9});
  EXPECT_NEAR(*GeodesicDistance(u, u), 0.0, 1e-7);
  EXPECT_NEAR(*GeodesicDistance(Basis(5, 1), Basis(5, 3)),
              std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(*GeodesicDistance(Basis(2, 0), Basis(2, 0, -1.0)),
              std::numbers::pi, 1e-15);
}

TEST(GeodesicDistanceTest, ChordalIdentityAndOrdering) {
  RandomSource rng(12, 0);
  for (int t = 0; t < 10000; ++t) {
    const size_t dim = 2 + t % 17;
    const UnitVector u = RandomUnit(dim, rng);
    const UnitVector v = RandomUnit(dim, rng);
    const double chord = *ChordalDistance(u, v);
    const double geo = *GeodesicDistance(u, v);
    EXPECT_LT(std::abs(chord - 2.0 * std::sin(geo / 2.0)), 1e-9);
    EXPECT_LE(chord, geo + 1e-15);
  }
}

TEST(UnitVectorTest, RejectsDegenerateInput) {
  EXPECT_FALSE(UnitVector::Normalize(std::vector<double>{}).ok());
  EXPECT_FALSE(UnitVector::Normalize(std::vector<double>{0.0, 0.0}).ok());
  EXPECT_FALSE(UnitVector::Normalize(std::vector<double>{1.0, NAN}).ok());
  EXPECT_FALSE(UnitVector::Normalize(std::vector<double>{INFINITY, 0}).ok());
  EXPECT_FALSE(UnitVector::FromUnit({1.0, 1.0}).ok());
  EXPECT_TRUE(UnitVector::FromUnit({0.6, 0.8}).ok());
  const UnitVector u = Unit({3.0, 4.0});
  EXPECT_DOUBLE_EQ(u[0], 0.6);
  EXPECT_DOUBLE_EQ(u[1], 0.8);
}

TEST(ConcentrationTest, Validates) {
  EXPECT_TRUE(Concentration::Create(0.0).ok());
  EXPECT_FALSE(Concentration::Create(-1.0).ok());
  EXPECT_FALSE(Concentration::Create(INFINITY).ok());
  EXPECT_FALSE(Concentration::Create(NAN).ok());
}

TEST(VmfLogDensityTest, Examples) {
  const Concentration kappa = *Concentration::Create(7.5);
  const UnitVector mu = Unit({1.0, 2.0, -2.0});
  EXPECT_NEAR(*VmfLogDensityUnnormalized(mu, mu, kappa), 7.5, 1e-12);
  EXPECT_NEAR(*VmfLogDensityUnnormalized(Unit({2.0, -1.0, 0.0}), mu, kappa),
              0.0, 1e-12);
  EXPECT_FALSE(VmfLogDensityUnnormalized(Basis(2, 0), mu, kappa).ok());
}

TEST(VmfLogDensityTest, RatioBoundedByChordalDistance) {
  RandomSource rng(13, 0);
  for (int t = 0; t < 20000; ++t) {
    const size_t dim = std::array<size_t, 3>{2, 8, 64}[t % 3];
    const Concentration kappa =
        *Concentration::Create(std::array<double, 3>{1, 50, 650}[t / 3 % 3]);
    const UnitVector mu = RandomUnit(dim, rng);
    const UnitVector nu = RandomUnit(dim, rng);
    const UnitVector y = RandomUnit(dim, rng);
    const double gap = *VmfLogDensityUnnormalized(y, mu, kappa) -
                       *VmfLogDensityUnnormalized(y, nu, kappa);
    EXPECT_LE(gap, kappa.kappa() * *ChordalDistance(mu, nu) + 1e-9);
  }
}

TEST(BesselRatioTest, ZeroConcentrationIsZero) {
  for (int d : {2, 3, 8, 768}) EXPECT_EQ(*BesselRatio(d, 0.0), 0.0);
}

TEST(BesselRatioTest, MatchesClosedFormInThreeDimensions) {
  EXPECT_NEAR(*BesselRatio(3, 2.0), 0.5373147207275480, 1e-12);
  for (double k : {0.01, 0.5, 1.0, 2.0, 10.0, 100.0, 1000.0}) {
    const double closed = 1.0 / std::tanh(k) - 1.0 / k;
    EXPECT_NEAR(*BesselRatio(3, k), closed, 1e-10 * closed) << k;
  }
}

TEST(BesselRatioTest, MatchesBoostBesselFunctions) {
  for (int d : {2, 4, 5, 16, 64, 200}) {
    for (double k : {0.1, 1.0, 10.0, 100.0, 500.0}) {
      const double nu = 0.5 * d;
      const double expected = boost::math::cyl_bessel_i(nu, k) /
                              boost::math::cyl_bessel_i(nu - 1.0, k);
      if (!std::isfinite(expected)) continue;
      EXPECT_NEAR(*BesselRatio(d, k), expected, 1e-10 * expected)
          << "d=" << d << " kappa=" << k;
    }
  }
}

TEST(BesselRatioTest, MonotoneInConcentration) {
  for (int d : {2, 3, 8, 16, 64, 768}) {
    double previous = 0.0;
    for (double k = 0.1; k <= 1000.0; k *= 1.25) {
      const double a = *BesselRatio(d, k);
      EXPECT_GT(a, previous) << "d=" << d << " kappa=" << k;
      EXPECT_LT(a, 1.0);
      previous = a;
    }
  }
}

TEST(BesselRatioTest, ApproachesOneForLargeConcentration) {
  EXPECT_LT(1.0 - *BesselRatio(8, 1e6), 1e-5);
}

TEST(BesselRatioTest, RejectsInvalidArguments) {
  EXPECT_FALSE(BesselRatio(1, 1.0).ok());
  EXPECT_FALSE(BesselRatio(3, -1.0).ok());
  EXPECT_FALSE(BesselRatio(3, NAN).ok());
}

TEST(SampleVmfTest, ZeroConcentrationIsUniform) {
  RandomSource rng(21, 0);
  const UnitVector mu = Basis(16, 4);
  const Concentration kappa = *Concentration::Create(0.0);
  std::vector<double> mean(16, 0.0);
  constexpr int kSamples = 100000;
  for (int s = 0; s < kSamples; ++s) {
    const UnitVector y = *SampleVmf(mu, kappa, rng);
    for (size_t i = 0; i < 16; ++i) mean[i] += y[i] / kSamples;
  }
  EXPECT_LT(L2Norm(mean), 0.02);
}

TEST(SampleVmfTest, MeanCosineMatchesBesselRatio) {
  for (auto [dim, k] : std::vector<std::pair<int, double>>{
           {3, 2.0}, {16, 10.0}, {16, 100.0}, {64, 300.0}}) {
    RandomSource rng(22, dim);
    RandomSource dir_rng(23, dim);
    const UnitVector mu = RandomUnit(dim, dir_rng);
    const Concentration kappa = *Concentration::Create(k);
    constexpr int kSamples = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < kSamples; ++s) {
      const double w = Dot(SampleVmf(mu, kappa, rng)->components(),
                           mu.components());
      sum += w;
      sum_sq += w * w;
    }
    const double mean = sum / kSamples;
    const double se =
        std::sqrt((sum_sq / kSamples - mean * mean) / (kSamples - 1));
    EXPECT_LT(std::abs(mean - *BesselRatio(dim, k)), 3.0 * se)
        << "d=" << dim << " kappa=" << k;
  }
}

TEST(SampleVmfTest, HugeConcentrationStaysNearMean) {
  RandomSource rng(24, 0);
  const UnitVector mu = Unit({1, -1, 2, 0.5, 0, 3, -2, 1});
  const Concentration kappa = *Concentration::Create(1e6);
  for (int s = 0; s < 100000; ++s) {
    const UnitVector y = *SampleVmf(mu, kappa, rng);
    ASSERT_GT(Dot(y.components(), mu.components()), 0.999);
  }
}

TEST(SampleVmfTest, OutputIsUnit) {
  RandomSource rng(25, 0);
  for (int s = 0; s < 1000; ++s) {
    const size_t dim = 2 + s % 100;
    std::vector<double> out(dim);
    SampleVmfInto(RandomUnit(dim, rng).components(), 0.5 * s, rng, out);
    EXPECT_NEAR(L2Norm(out), 1.0, 1e-12);
  }
}

TEST(SampleVmfTest, RotationallyEquivariant) {
  // The law of mu.y must not depend on where mu points.
  constexpr int kSamples = 10000;
  const Concentration kappa = *Concentration::Create(20.0);
  const UnitVector mu_a = Basis(10, 0);
  RandomSource dir_rng(26, 0);
  const UnitVector mu_b = RandomUnit(10, dir_rng);
  RandomSource rng_a(27, 0), rng_b(27, 1);
  std::vector<double> a, b;
  for (int s = 0; s < kSamples; ++s) {
    a.push_back(Dot(SampleVmf(mu_a, kappa, rng_a)->components(),
                    mu_a.components()));
    b.push_back(Dot(SampleVmf(mu_b, kappa, rng_b)->components(),
                    mu_b.components()));
  }
  // Critical value at alpha = 0.001.
  EXPECT_LT(KsStatistic(a, b), 1.95 * std::sqrt(2.0 / kSamples));
}

TEST(SampleVmfTest, RejectsOneDimension) {
  RandomSource rng(28, 0);
  EXPECT_FALSE(
      SampleVmf(Basis(1, 0), *Concentration::Create(1.0), rng).ok());
}

TEST(RandomSourceTest, ReproducibleStreams) {
  RandomSource a(5, 9), b(5, 9), c(5, 10);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.Normal();
    EXPECT_EQ(x, b.Normal());
    differs |= x != c.Normal();
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(CombineStreamIds(1, 2), CombineStreamIds(2, 1));
}

TEST(SampleLaplaceTest, MeanAndMedianAbsoluteDeviation) {
  RandomSource rng(31, 0);
  constexpr int kSamples = 100000;
  const double loc = 1.5, scale = 0.7;
  double sum = 0.0;
  int beyond = 0;
  for (int s = 0; s < kSamples; ++s) {
    const double x = *SampleLaplace(loc, scale, rng);
    sum += x;
    beyond += std::abs(x - loc) > scale * std::log(2.0);
  }
  const double se = std::sqrt(2.0 * scale * scale / kSamples);
  EXPECT_LT(std::abs(sum / kSamples - loc), 5.0 * se);
  EXPECT_NEAR(static_cast<double>(beyond) / kSamples, 0.5, 0.01);
}

TEST(SampleLaplaceTest, RejectsNonPositiveScale) {
  RandomSource rng(32, 0);
  EXPECT_FALSE(SampleLaplace(0.0, 0.0, rng).ok());
  EXPECT_FALSE(SampleLaplace(0.0, -1.0, rng).ok());
}

TEST(SampleMultivariateLaplaceTest, MeanRadiusIsDimensionOverEpsilon) {
  RandomSource rng(33, 0);
  constexpr int kSamples = 100000;
  const std::vector<double> center = {1.0, -2.0, 0.5, 0.0, 3.0, 1.0};
  const double eps = 4.0;
  const double d = static_cast<double>(center.size());
  double sum = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    std::vector<double> z = *SampleMultivariateLaplace(center, eps, rng);
    for (size_t i = 0; i < z.size(); ++i) z[i] -= center[i];
    sum += L2Norm(z);
  }
  const double se = std::sqrt(d) / eps / std::sqrt(kSamples);
  EXPECT_LT(std::abs(sum / kSamples - d / eps), 3.0 * se);
}

TEST(SampleMultivariateLaplaceTest, DensityRatioBound) {
  // log p(z | c) - log p(z | c') = eps (|z - c'| - |z - c|).
  RandomSource rng(34, 0);
  for (int t = 0; t < 100000; ++t) {
    const size_t dim = 1 + t % 8;
    const double eps = 0.1 + (t % 7);
    std::vector<double> c(dim), c2(dim);
    for (size_t i = 0; i < dim; ++i) {
      c[i] = rng.Normal();
      c2[i] = rng.Normal();
    }
    const std::vector<double> z = *SampleMultivariateLaplace(c, eps, rng);
    std::vector<double> dz(dim), dz2(dim), dc(dim);
    for (size_t i = 0; i < dim; ++i) {
      dz[i] = z[i] - c[i];
      dz2[i] = z[i] - c2[i];
      dc[i] = c[i] - c2[i];
    }
    EXPECT_LE(eps * (L2Norm(dz2) - L2Norm(dz)), eps * L2Norm(dc) + 1e-9);
  }
}

TEST(SampleMultivariateLaplaceTest, LargeEpsilonCollapsesToCenter) {
  RandomSource rng(35, 0);
  const std::vector<double> center = {0.2, 0.4, -0.1};
  for (int s = 0; s < 100; ++s) {
    const std::vector<double> z = *SampleMultivariateLaplace(center, 1e9, rng);
    for (size_t i = 0; i < 3; ++i) EXPECT_NEAR(z[i], center[i], 1e-6);
  }
}

TEST(SampleMultivariateLaplaceTest, RejectsInvalidEpsilon) {
  RandomSource rng(36, 0);
  const std::vector<double> center = {1.0};
  EXPECT_FALSE(SampleMultivariateLaplace(center, 0.0, rng).ok());
  EXPECT_FALSE(SampleMultivariateLaplace(center, -2.0, rng).ok());
  EXPECT_FALSE(SampleMultivariateLaplace(center, INFINITY, rng).ok());
}

}  // namespace
}  // namespace stamp
