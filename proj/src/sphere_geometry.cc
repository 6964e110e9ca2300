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
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace stamp {
namespace {

constexpr int kMaxContinuedFractionTerms = 100'000'000;

absl::Status CheckSameDim(size_t a, size_t b) {
  if (a != b) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension mismatch: %d vs %d", a, b));
  }
  return absl::OkStatus();
}

// Returns 1 - w for a vMF cosine draw. Working with 1 - w keeps full relative
// precision when kappa is large and w is within ulps of 1.
double SampleOneMinusCosine(size_t dim, double kappa, RandomSource& rng) {
  const double m = static_cast<double>(dim) - 1.0;
  // b = (-2k + sqrt(4k^2 + m^2)) / m, in a form without cancellation.
  const double b = m / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m));
  // x0 = (1 - b) / (1 + b); keep 1 - x0 and log(1 - x0^2) directly.
  const double one_minus_x0 = 2.0 * b / (1.0 + b);
  const double log_one_minus_x0_sq = std::log(4.0 * b) - 2.0 * std::log1p(b);
  const double half_m = 0.5 * m;
  for (;;) {
    const double z = rng.Beta(half_m, half_m);
    const double one_minus_w = 2.0 * b * z / (1.0 - (1.0 - b) * z);
    // 1 - x0 * w = (1 - x0) + (1 - w) - (1 - x0)(1 - w)
    const double one_minus_x0w =
        one_minus_x0 + one_minus_w - one_minus_x0 * one_minus_w;
    // kappa * (w - x0) + m * log(1 - x0 w) - m * log(1 - x0^2)
    const double log_accept = kappa * (one_minus_x0 - one_minus_w) +
                              m * (std::log(one_minus_x0w) -
                                   log_one_minus_x0_sq);
    if (std::log(rng.Uniform01()) <= log_accept) return one_minus_w;
  }
}

}  // namespace

double Dot(std::span<const double> a, std::span<const double> b) {
  // Four independent accumulators; the summation order is fixed, so results
  // are reproducible across calls.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const size_t n = a.size();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double L2Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t CombineStreamIds(uint64_t a, uint64_t b) {
  return MixBits(MixBits(a) ^ (b + 0x632be59bd9b4e019ULL));
}

RandomSource::RandomSource(uint64_t seed, uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(CombineStreamIds(seed, stream_id)) {}

double RandomSource::Uniform01() {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(engine_);
    if (u > 0.0) return u;
  }
}

double RandomSource::Normal() { return normal_(engine_); }

double RandomSource::Gamma(double shape, double scale) {
  return std::gamma_distribution<double>(shape, scale)(engine_);
}

double RandomSource::Beta(double a, double b) {
  const double x = Gamma(a, 1.0);
  const double y = Gamma(b, 1.0);
  return x / (x + y);
}

absl::StatusOr<UnitVector> UnitVector::Normalize(std::span<const double> v) {
  if (v.empty()) return absl::InvalidArgumentError("empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) {
      return absl::InvalidArgumentError("non-finite vector component");
    }
  }
  const double norm = L2Norm(v);
  if (!(norm > 0.0)) return absl::InvalidArgumentError("zero-norm vector");
  std::vector<double> unit(v.begin(), v.end());
  for (double& x : unit) x /= norm;
  return UnitVector(std::move(unit));
}

absl::StatusOr<UnitVector> UnitVector::FromUnit(std::vector<double> v) {
  const double norm = L2Norm(v);
  if (v.empty() || !std::isfinite(norm) ||
      std::abs(norm - 1.0) > kUnitNormTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("not a unit vector (norm %.9g)", norm));
  }
  return UnitVector(std::move(v));
}

absl::StatusOr<Concentration> Concentration::Create(double kappa) {
  if (!std::isfinite(kappa) || kappa < 0.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "concentration must be finite and nonnegative, got %g", kappa));
  }
  return Concentration(kappa);
}

absl::StatusOr<double> ChordalDistance(const UnitVector& u,
                                       const UnitVector& v) {
  if (auto s = CheckSameDim(u.dim(), v.dim()); !s.ok()) return s;
  double sum = 0.0;
  for (size_t i = 0; i < u.dim(); ++i) {
    const double diff = u[i] - v[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

absl::StatusOr<double> GeodesicDistance(const UnitVector& u,
                                        const UnitVector& v) {
  if (auto s = CheckSameDim(u.dim(), v.dim()); !s.ok()) return s;
  return std::acos(
      std::clamp(Dot(u.components(), v.components()), -1.0, 1.0));
}

absl::StatusOr<double> VmfLogDensityUnnormalized(const UnitVector& y,
                                                 const UnitVector& mu,
                                                 Concentration kappa) {
  if (auto s = CheckSameDim(y.dim(), mu.dim()); !s.ok()) return s;
  return kappa.kappa() * Dot(mu.components(), y.components());
}

double SampleVmfCosine(size_t dim, double kappa, RandomSource& rng) {
  return 1.0 - SampleOneMinusCosine(dim, kappa, rng);
}

void SampleUniformSphereInto(RandomSource& rng, std::span<double> out) {
  for (;;) {
    for (double& x : out) x = rng.Normal();
    const double norm = L2Norm(out);
    if (norm > 1e-12) {
      for (double& x : out) x /= norm;
      return;
    }
  }
}

void SampleVmfInto(std::span<const double> mu, double kappa,
                   RandomSource& rng, std::span<double> out) {
  const size_t dim = mu.size();
  const double one_minus_w = SampleOneMinusCosine(dim, kappa, rng);
  const double w = 1.0 - one_minus_w;
  const double s = std::sqrt(one_minus_w * (2.0 - one_minus_w));

  // Uniform direction in the tangent space at mu: project a Gaussian vector.
  double tangent_norm = 0.0;
  do {
    for (double& x : out) x = rng.Normal();
    const double along = Dot(out, mu);
    for (size_t i = 0; i < dim; ++i) out[i] -= along * mu[i];
    tangent_norm = L2Norm(out);
  } while (!(tangent_norm > 1e-12));

  const double t = s / tangent_norm;
  for (size_t i = 0; i < dim; ++i) out[i] = w * mu[i] + t * out[i];
  const double norm = L2Norm(out);
  for (double& x : out) x /= norm;
}

absl::StatusOr<UnitVector> SampleVmf(const UnitVector& mu, Concentration kappa,
                                     RandomSource& rng) {
  if (mu.dim() < 2) {
    return absl::InvalidArgumentError("vMF sampling requires d >= 2");
  }
  std::vector<double> out(mu.dim());
  SampleVmfInto(mu.components(), kappa.kappa(), rng, out);
  return UnitVector::FromUnit(std::move(out));
}

absl::StatusOr<double> BesselRatio(int dim, double kappa) {
  if (dim < 2) return absl::InvalidArgumentError("BesselRatio requires d >= 2");
  if (!std::isfinite(kappa) || kappa < 0.0) {
    return absl::InvalidArgumentError("BesselRatio requires finite kappa >= 0");
  }
  if (kappa == 0.0) return 0.0;

  // I_nu / I_{nu-1} = 1 / (2nu/x + 1 / (2(nu+1)/x + ...)), nu = d/2.
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double nu = 0.5 * dim;
  double f = kTiny;
  double c = f;
  double d = 0.0;
  for (int j = 0; j < kMaxContinuedFractionTerms; ++j) {
    const double b = 2.0 * (nu + j) / kappa;
    d = b + d;
    if (d == 0.0) d = kTiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) return f;
  }
  return absl::InternalError(absl::StrFormat(
      "Bessel ratio continued fraction did not converge after %d terms "
      "(d=%d, kappa=%g)",
      kMaxContinuedFractionTerms, dim, kappa));
}

absl::StatusOr<double> SampleLaplace(double loc, double scale,
                                     RandomSource& rng) {
  if (!std::isfinite(scale) || scale <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale must be positive, got %g", scale));
  }
  const double u = rng.Uniform01() - 0.5;
  const double sign = (u > 0.0) - (u < 0.0);
  return loc + scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

absl::StatusOr<std::vector<double>> SampleMultivariateLaplace(
    std::span<const double> center, double epsilon, RandomSource& rng) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  if (center.empty()) return absl::InvalidArgumentError("empty center");
  std::vector<double> out(center.size());
  SampleUniformSphereInto(rng, out);
  const double radius =
      rng.Gamma(static_cast<double>(center.size()), 1.0 / epsilon);
  for (size_t i = 0; i < out.size(); ++i) out[i] = center[i] + radius * out[i];
  return out;
}

}  // namespace stamp
