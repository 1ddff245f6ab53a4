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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbbm/fem.hpp"
#include "sbbm/stochastic.hpp"

namespace sbbm {

/// One trajectory of the implicit Euler-Maruyama scheme
///
///   (u^{n+1}-u^n, phi) + (grad(u^{n+1}-u^n), grad phi) + nu k (u^{n+1}, phi)
///       = k (F(u^{n+1}), grad phi) + (G(u^n) dW_n, phi)
///
/// with F(u) = <u + u^2/2, u + u^2/2>^T. The step is implicit in the drift
/// and explicit in the noise; the implicit nonlinearity is resolved by
/// fixed-point (Picard) iteration with the convection term lagged.
struct SchemeConfig {
  double nu = 1.0;
  double T = 1.0;
  double k = 0.0;
  int level = 0;
  Bc bc = Bc::dirichlet;
  Eigen::VectorXd u0;  // dof vector; empty means zero
  double fp_tol = 1e-10;
  int fp_max_iter = 100;
  NoiseCoefficient noise;
  std::uint64_t seed = 0;
  double exp_moment_gamma = 0.0;  // > 0 records mean exp(gamma * |u|_H1^2)
  int checkpoint_stride = 0;      // 0: keep no states, s: keep every s-th and the last
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::string what, double residual, int iterations)
      : std::runtime_error(std::move(what)), residual(residual), iterations(iterations) {}
  double residual = 0.0;
  int iterations = 0;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  Eigen::VectorXd u;
  int iterations = 0;
};

/// Advance one step from u_n with Brownian increment dW. The returned iterate
/// satisfies the variational equation with residual below
/// fp_tol * (1 + |u|_2); throws NonConvergenceError when the iteration budget
/// is exhausted and DivergenceError on a non-finite iterate.
StepResult implicit_step(const FemOperators& ops, const SchemeConfig& cfg,
                         const Eigen::Ref<const Eigen::VectorXd>& u_n, double dW);

struct Trajectory {
  std::vector<Eigen::VectorXd> states;  // checkpointed dof vectors
  std::vector<int> checkpoint_steps;
  Eigen::VectorXd h1_norms;  // |u^n|_H1 for n = 0..M
  double sup_h1 = 0.0;       // max over n = 1..M
  Eigen::VectorXi fp_iters;  // per step
  // Ito pairings (G(u^n) dW_n, u^n) per step, plus the deliberately
  // anticipative variant (G(u^{n+1}) dW_n, u^n) used to measure the power of
  // the martingale test.
  Eigen::VectorXd noise_pairings;
  Eigen::VectorXd noise_pairings_anticipative;
  double exp_moment_mean = 0.0;  // mean exp(gamma |u^n|_H1^2), gamma > 0 only
};

/// Drive the scheme over M = T/k steps with increments coarsened from `path`.
/// Deterministic given (cfg, path).
Trajectory run_trajectory(const FemOperators& ops, const SchemeConfig& cfg,
                          const WienerPath& path);

/// (|u|_L2^2, |u|_H1^2) = (u^T M u, u^T (M+A) u).
std::pair<double, double> energy(const FemOperators& ops,
                                 const Eigen::Ref<const Eigen::VectorXd>& u);

/// Nodal interpolation load of the noise term: dW * P^T M_full G(P u).
Eigen::VectorXd noise_load(const FemOperators& ops, const NoiseCoefficient& g,
                           const Eigen::Ref<const Eigen::VectorXd>& u, double dW);

}  // namespace sbbm
