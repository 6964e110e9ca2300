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

#ifndef STAMP_SPHERE_GEOMETRY_H_
#define STAMP_SPHERE_GEOMETRY_H_

// Geometry on the unit sphere S^{d-1} and the random samplers the privacy
// mechanisms are built from: von Mises-Fisher directions, scalar Laplace and
// the multivariate (metric) Laplace.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace stamp {

// Absolute tolerance on ||u||_2 - 1 for anything treated as a unit vector.
inline constexpr double kUnitNormTolerance = 1e-6;

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> v);

// SplitMix64 finalizer. Used to derive independent stream ids, e.g. from
// (document hash, token position).
uint64_t MixBits(uint64_t x);
uint64_t CombineStreamIds(uint64_t a, uint64_t b);

// A reproducible random stream. Two sources built from the same
// (seed, stream_id) produce bit-identical draw sequences.
class RandomSource {
 public:
  RandomSource(uint64_t seed, uint64_t stream_id);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0, 1).
  double Uniform01();
  double Normal();
  double Gamma(double shape, double scale);
  double Beta(double a, double b);

 private:
  uint64_t seed_;
  uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// A point of S^{d-1}. Construction enforces the unit-norm invariant.
class UnitVector {
 public:
  // Divides `v` by its norm. Fails on empty, zero-norm or non-finite input.
  static absl::StatusOr<UnitVector> Normalize(std::span<const double> v);
  // Accepts `v` only if it is already unit within kUnitNormTolerance.
  static absl::StatusOr<UnitVector> FromUnit(std::vector<double> v);

  std::span<const double> components() const { return components_; }
  size_t dim() const { return components_.size(); }
  double operator[](size_t i) const { return components_[i]; }

 private:
  explicit UnitVector(std::vector<double> components)
      : components_(std::move(components)) {}

  std::vector<double> components_;
};

// vMF concentration kappa. Nonnegative and finite.
class Concentration {
 public:
  static absl::StatusOr<Concentration> Create(double kappa);
  double kappa() const { return kappa_; }

 private:
  explicit Concentration(double kappa) : kappa_(kappa) {}
  double kappa_;
};

// ||u - v||_2, in [0, 2].
absl::StatusOr<double> ChordalDistance(const UnitVector& u,
                                       const UnitVector& v);
// arccos(u.v) with the inner product clamped to [-1, 1]; in [0, pi].
absl::StatusOr<double> GeodesicDistance(const UnitVector& u,
                                        const UnitVector& v);

// kappa * mu.y. The normalizer C_d(kappa) is omitted; only differences of
// this quantity at a shared kappa are meaningful.
absl::StatusOr<double> VmfLogDensityUnnormalized(const UnitVector& y,
                                                 const UnitVector& mu,
                                                 Concentration kappa);

// Draws y ~ vMF(mu, kappa). kappa = 0 gives the uniform distribution.
absl::StatusOr<UnitVector> SampleVmf(const UnitVector& mu, Concentration kappa,
                                     RandomSource& rng);

// Allocation-free form of SampleVmf for inner loops. Preconditions (not
// checked): mu is unit, mu.size() >= 2, out.size() == mu.size(), kappa >= 0.
void SampleVmfInto(std::span<const double> mu, double kappa,
                   RandomSource& rng, std::span<double> out);

// The cosine component w = mu.y of a vMF(mu, kappa) draw in dimension `dim`,
// by Wood's rejection scheme. Envelope constants are evaluated in log space so
// that large kappa does not overflow.
double SampleVmfCosine(size_t dim, double kappa, RandomSource& rng);

// Uniform direction on S^{d-1}, d = out.size() >= 1.
void SampleUniformSphereInto(RandomSource& rng, std::span<double> out);

// Mean resultant length A_d(kappa) = I_{d/2}(kappa) / I_{d/2-1}(kappa) of a
// vMF distribution on S^{d-1}, by Lentz's method on the Gauss continued
// fraction. Relative accuracy ~1e-14; errors out (reporting the iteration
// count) if the fraction does not converge.
absl::StatusOr<double> BesselRatio(int dim, double kappa);

// loc + scale * sign(U) * ln(1 - 2|U|), U ~ Uniform(-1/2, 1/2).
absl::StatusOr<double> SampleLaplace(double loc, double scale,
                                     RandomSource& rng);

// center + R * U with U uniform on S^{d-1} and R ~ Gamma(d, rate epsilon).
// The density is proportional to exp(-epsilon * ||z - center||_2).
absl::StatusOr<std::vector<double>> SampleMultivariateLaplace(
    std::span<const double> center, double epsilon, RandomSource& rng);

}  // namespace stamp

#endif  // STAMP_SPHERE_GEOMETRY_H_
