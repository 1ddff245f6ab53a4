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
#include "sbbm/scheme.hpp"

#include <cmath>
#include <limits>

namespace sbbm {

namespace {

Eigen::VectorXd convection_load(const FemOperators& ops,
                                const Eigen::Ref<const Eigen::VectorXd>& u_dof) {
  return restrict_load(ops.mesh, assemble_convection(ops.mesh, expand_to_nodes(ops.mesh, u_dof)));
}

long step_count(const SchemeConfig& cfg) {
  const double ratio = cfg.T / cfg.k;
  const long m = std::lround(ratio);
  if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9 * ratio) {
    throw std::invalid_argument("scheme: T/k must be a positive integer");
  }
  return m;
}

}  // namespace

Eigen::VectorXd noise_load(const FemOperators& ops, const NoiseCoefficient& g,
                           const Eigen::Ref<const Eigen::VectorXd>& u, double dW) {
  const Eigen::VectorXd g_nodal = apply_noise(g, expand_to_nodes(ops.mesh, u));
  return dW * restrict_load(ops.mesh, ops.M_full * g_nodal);
}

StepResult implicit_step(const FemOperators& ops, const SchemeConfig& cfg,
                         const Eigen::Ref<const Eigen::VectorXd>& u_n, double dW) {
  if (u_n.size() != ops.MA.rows()) {
    throw std::invalid_argument("implicit_step: state length mismatch");
  }
  if (cfg.k != ops.k || cfg.nu != ops.nu) {
    throw std::invalid_argument("implicit_step: config (nu,k) disagrees with operators");
  }
  if (!u_n.allFinite()) {
    throw DivergenceError("implicit_step: non-finite state");
  }

  // Constant part of the right-hand side; G is evaluated at u^n only.
  const Eigen::VectorXd rhs0 = ops.MA * u_n + noise_load(ops, cfg.noise, u_n, dW);

  Eigen::VectorXd u = u_n;
  double residual_norm = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= cfg.fp_max_iter; ++iter) {
    const Eigen::VectorXd rhs = rhs0 + ops.k * convection_load(ops, u);
    Eigen::VectorXd u_next = solve_implicit(ops, rhs);
    if (!u_next.allFinite()) {
      throw DivergenceError("implicit_step: fixed-point iterate diverged");
    }
    const double diff = h1_norm(ops, u_next - u);
    u = std::move(u_next);
    if (diff <= cfg.fp_tol) {
      // Contraction alone can stall short of the solution; confirm with the
      // true residual before accepting.
      const Eigen::VectorXd r = ops.S * u - (rhs0 + ops.k * convection_load(ops, u));
      residual_norm = r.norm();
      if (residual_norm <= cfg.fp_tol * (1.0 + u.norm())) {
        return {std::move(u), iter};
      }
    }
  }
  throw NonConvergenceError("implicit_step: fixed-point iteration did not converge",
                            residual_norm, cfg.fp_max_iter);
}

Trajectory run_trajectory(const FemOperators& ops, const SchemeConfig& cfg,
                          const WienerPath& path) {
  const long steps = step_count(cfg);
  Eigen::VectorXd increments;
  if (cfg.noise.kind == NoiseCoefficient::Kind::zero) {
    increments = Eigen::VectorXd::Zero(steps);
  } else {
    if (path.T != cfg.T) {
      throw std::invalid_argument("run_trajectory: path horizon differs from cfg.T");
    }
    increments = coarsen(path, cfg.k);
    if (increments.size() != steps) {
      throw std::invalid_argument("run_trajectory: path does not cover T/k steps");
    }
  }

  Trajectory traj;
  traj.h1_norms.resize(steps + 1);
  traj.fp_iters.resize(steps);
  traj.noise_pairings.resize(steps);
  traj.noise_pairings_anticipative.resize(steps);

  Eigen::VectorXd u = cfg.u0.size() == 0 ? Eigen::VectorXd::Zero(ops.MA.rows()).eval()
                                         : cfg.u0;
  if (u.size() != ops.MA.rows()) {
    throw std::invalid_argument("run_trajectory: u0 length mismatch");
  }

  traj.h1_norms[0] = h1_norm(ops, u);
  double exp_moment_acc = 0.0;
  if (cfg.checkpoint_stride > 0) {
    traj.states.push_back(u);
    traj.checkpoint_steps.push_back(0);
  }

  for (long n = 0; n < steps; ++n) {
    const double dW = increments[n];
    // Ito pairing (G(u^n) dW_n, u^n); its expectation vanishes.
    traj.noise_pairings[n] = noise_load(ops, cfg.noise, u, dW).dot(u);
    StepResult step;
    try {
      step = implicit_step(ops, cfg, u, dW);
    } catch (const NonConvergenceError& err) {
      throw NonConvergenceError(
          std::string(err.what()) + " at step " + std::to_string(n + 1), err.residual,
          err.iterations);
    } catch (const DivergenceError& err) {
      throw DivergenceError(std::string(err.what()) + " at step " + std::to_string(n + 1));
    }
    traj.noise_pairings_anticipative[n] = noise_load(ops, cfg.noise, step.u, dW).dot(u);
    u = std::move(step.u);
    traj.fp_iters[n] = step.iterations;
    traj.h1_norms[n + 1] = h1_norm(ops, u);
    if (cfg.exp_moment_gamma > 0.0) {
      exp_moment_acc += std::exp(cfg.exp_moment_gamma * traj.h1_norms[n + 1] *
                                 traj.h1_norms[n + 1]);
    }
    if (cfg.checkpoint_stride > 0 &&
        ((n + 1) % cfg.checkpoint_stride == 0 || n + 1 == steps)) {
      traj.states.push_back(u);
      traj.checkpoint_steps.push_back(static_cast<int>(n + 1));
    }
  }

  traj.sup_h1 = traj.h1_norms.tail(steps).maxCoeff();
  traj.exp_moment_mean =
      cfg.exp_moment_gamma > 0.0 ? exp_moment_acc / static_cast<double>(steps) : 0.0;
  return traj;
}

std::pair<double, double> energy(const FemOperators& ops,
                                 const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (u.size() != ops.M.rows()) {
    throw std::invalid_argument("energy: dof vector length mismatch");
  }
  const double l2_sq = u.dot(ops.M * u);
  return {l2_sq, l2_sq + u.dot(ops.A * u)};
}

}  // namespace sbbm
