/*
   Copyright 2026 the sbbm authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

namespace sbbm {

namespace rng {

/// Philox-4x32-10 block: 128-bit counter, 64-bit key, 128 bits out.
/// Counter-based so that draw (seed, stream, index) is pure and identical
/// regardless of evaluation order or thread scheduling.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::uint64_t key);

/// Uniform draw in (0,1), 53 random bits, never exactly 0 or 1.
double uniform53(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Inverse of the standard normal CDF (Wichura's AS241, double precision).
double inverse_normal_cdf(double p);

/// Standard normal draw at (seed, stream, index).
double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace rng

/// A Brownian increment sequence at base step k0, regenerated bit-identically
/// from (seed, sample_id). increments[i] ~ N(0, k0) independent.
struct WienerPath {
  double k0 = 0.0;
  double T = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t sample_id = 0;
  Eigen::VectorXd increments;
};

WienerPath generate_path(std::uint64_t seed, std::uint64_t sample_id, double T, double k0);

/// Block sums of the base increments at dyadic step k = m*k0. Implemented by
/// pairwise halving, so coarsening in stages produces bit-identical results
/// to coarsening in one shot and the coupled trajectories see exactly the
/// same cumulative noise at shared times.
Eigen::VectorXd coarsen(const WienerPath& path, double k);

/// Pairwise (balanced-tree) sum; association matches coarsen's.
double pairwise_sum(const Eigen::Ref<const Eigen::VectorXd>& values);

/// Pointwise diffusion coefficient G with its certified constants:
/// `lipschitz` is C_G with |G(a)-G(b)| <= C_G |a-b|, and `bound`, when
/// present, is L0 with |G(a)| <= L0.
struct NoiseCoefficient {
  enum class Kind { zero, linear, sin_shift, custom };
  Kind kind = Kind::zero;
  double alpha = 0.0;
  double lipschitz = 0.0;
  std::optional<double> bound;
  std::function<double(double)> custom;

  double operator()(double x) const;
};

NoiseCoefficient zero_noise();
NoiseCoefficient linear_noise(double alpha);      // G(u) = alpha * u
NoiseCoefficient sin_shift_noise(double alpha);   // G(u) = alpha * sin(1 + u)
NoiseCoefficient custom_noise(std::function<double(double)> g, double lipschitz,
                              std::optional<double> bound);

/// Pointwise application at the nodes; rejects non-finite input.
Eigen::VectorXd apply_noise(const NoiseCoefficient& g,
                            const Eigen::Ref<const Eigen::VectorXd>& u);

/// Monte Carlo certification of the declared constants on random scalar
/// pairs drawn from [-range, range]. Returns the worst excess over the
/// Lipschitz bound and over the uniform bound (0 when satisfied).
struct NoiseCertification {
  double lipschitz_violation = 0.0;
  double bound_violation = 0.0;
};

NoiseCertification certify_noise(const NoiseCoefficient& g, int pairs,
                                 std::uint64_t seed, double range = 10.0);

}  // namespace sbbm
