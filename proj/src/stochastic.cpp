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
#include "sbbm/stochastic.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace sbbm {

namespace rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
          static_cast<std::uint32_t>(p0)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::uint64_t key) {
  std::array<std::uint32_t, 4> state = counter;
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    state = philox_round(state, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return state;
}

double uniform53(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  const std::array<std::uint32_t, 4> out = philox4x32(counter, seed);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(out[0] >> 5) << 26) | (out[1] >> 6);
  // Centered in (0,1): never returns an endpoint, safe for the inverse CDF.
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double p) {
  // Wichura, Applied Statistics 37 (1988), algorithm AS241 (PPND16).
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) *
                 r +
             4.5921953931549871457e4) *
                r +
            1.3731693765509461125e4) *
               r +
           1.9715909503065514427e3) *
              r +
          1.3314166789178437745e2) *
             r +
         3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) *
                 r +
             2.1213794301586595867e4) *
                r +
            5.3941960214247511077e3) *
               r +
           6.8718700749205790830e2) *
              r +
          4.2313330701600911252e1) *
             r +
         1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-6) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
    value = num / den;
  }
  return (q < 0.0) ? -value : value;
}

double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return inverse_normal_cdf(uniform53(seed, stream, index));
}

}  // namespace rng

namespace {

bool is_pow2(std::uint64_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Integer ratio a/b when exact, 0 otherwise.
std::uint64_t exact_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) return 0;
  const double r = a / b;
  if (r < 1.0 || r > 9.0e15) return 0;
  const auto m = static_cast<std::uint64_t>(std::llround(r));
  return (static_cast<double>(m) * b == a) ? m : 0;
}

}  // namespace

WienerPath generate_path(std::uint64_t seed, std::uint64_t sample_id, double T, double k0) {
  const std::uint64_t n = exact_ratio(T, k0);
  if (n == 0 || !is_pow2(n)) {
    throw std::invalid_argument("generate_path: T/k0 must be a power-of-two integer");
  }
  WienerPath path;
  path.k0 = k0;
  path.T = T;
  path.seed = seed;
  path.sample_id = sample_id;
  path.increments.resize(static_cast<Eigen::Index>(n));
  const double scale = std::sqrt(k0);
  for (std::uint64_t i = 0; i < n; ++i) {
    path.increments[static_cast<Eigen::Index>(i)] =
        scale * rng::normal_draw(seed, sample_id, i);
  }
  return path;
}

Eigen::VectorXd coarsen(const WienerPath& path, double k) {
  const std::uint64_t m = exact_ratio(k, path.k0);
  if (m == 0 || !is_pow2(m)) {
    throw std::invalid_argument("coarsen: k/k0 must be a power-of-two integer");
  }
  if (static_cast<Eigen::Index>(m) > path.increments.size()) {
    throw std::invalid_argument("coarsen: k exceeds the path horizon");
  }
  Eigen::VectorXd current = path.increments;
  for (std::uint64_t width = 1; width < m; width *= 2) {
    Eigen::VectorXd next(current.size() / 2);
    for (Eigen::Index i = 0; i < next.size(); ++i) {
      next[i] = current[2 * i] + current[2 * i + 1];
    }
    current = std::move(next);
  }
  return current;
}

double pairwise_sum(const Eigen::Ref<const Eigen::VectorXd>& values) {
  Eigen::VectorXd current = values;
  while (current.size() > 1) {
    const Eigen::Index half = current.size() / 2;
    const bool odd = (current.size() % 2) != 0;
    Eigen::VectorXd next(half + (odd ? 1 : 0));
    for (Eigen::Index i = 0; i < half; ++i) next[i] = current[2 * i] + current[2 * i + 1];
    if (odd) next[half] = current[current.size() - 1];
    current = std::move(next);
  }
  return current.size() == 1 ? current[0] : 0.0;
}

double NoiseCoefficient::operator()(double x) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
      return alpha * x;
    case Kind::sin_shift:
      return alpha * std::sin(1.0 + x);
    case Kind::custom:
      return custom(x);
  }
  return 0.0;
}

NoiseCoefficient zero_noise() {
  NoiseCoefficient g;
  g.kind = NoiseCoefficient::Kind::zero;
  g.lipschitz = 0.0;
  g.bound = 0.0;
  return g;
}

NoiseCoefficient linear_noise(double alpha) {
  NoiseCoefficient g;
  g.kind = NoiseCoefficient::Kind::linear;
  g.alpha = alpha;
  g.lipschitz = std::abs(alpha);
  return g;
}

NoiseCoefficient sin_shift_noise(double alpha) {
  NoiseCoefficient g;
  g.kind = NoiseCoefficient::Kind::sin_shift;
  g.alpha = alpha;
  g.lipschitz = std::abs(alpha);
  g.bound = std::abs(alpha);
  return g;
}

NoiseCoefficient custom_noise(std::function<double(double)> g, double lipschitz,
                              std::optional<double> bound) {
  NoiseCoefficient out;
  out.kind = NoiseCoefficient::Kind::custom;
  out.custom = std::move(g);
  out.lipschitz = lipschitz;
  out.bound = bound;
  return out;
}

Eigen::VectorXd apply_noise(const NoiseCoefficient& g,
                            const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (!u.allFinite()) {
    throw std::invalid_argument("apply_noise: input has non-finite entries");
  }
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = g(u[i]);
  return out;
}

NoiseCertification certify_noise(const NoiseCoefficient& g, int pairs,
                                 std::uint64_t seed, double range) {
  NoiseCertification cert;
  for (int i = 0; i < pairs; ++i) {
    const double a = range * (2.0 * rng::uniform53(seed, 0, 2 * i) - 1.0);
    const double b = range * (2.0 * rng::uniform53(seed, 0, 2 * i + 1) - 1.0);
    const double lhs = std::abs(g(a) - g(b));
    cert.lipschitz_violation =
        std::max(cert.lipschitz_violation, lhs - g.lipschitz * std::abs(a - b));
    if (g.bound) {
      cert.bound_violation = std::max(cert.bound_violation, std::abs(g(a)) - *g.bound);
      cert.bound_violation = std::max(cert.bound_violation, std::abs(g(b)) - *g.bound);
    }
  }
  return cert;
}

}  // namespace sbbm
