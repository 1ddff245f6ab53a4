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

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "sbbm/scheme.hpp"

namespace sbbm {

/// Reference-solution time step: same grid as the coarse run (only the mesh
/// is refined) or four times finer, matching k = h^2 under one refinement.
enum class RefRule { same_k, k_over_4 };

/// Monte Carlo convergence study: for each level run coarse (h = 2^-level)
/// and reference (h/2) trajectories on the same Brownian path and estimate
/// the L^2_omega L^inf_t H^1_x distance between them.
struct StudyConfig {
  std::vector<int> levels = {1, 2, 3, 4, 5};
  bool couple_k_h2 = true;  // k = h^2 per level
  double k_fixed = 0.0;     // used when couple_k_h2 is false
  int samples = 400;
  RefRule ref_rule = RefRule::same_k;
  NoiseCoefficient noise;
  std::uint64_t seed = 0;
  double nu = 1.0;
  double T = 1.0;
  double k0 = 1.0 / 4096.0;  // base Brownian step, 2^-12
  Bc bc = Bc::dirichlet;
  double fp_tol = 1e-10;
  int fp_max_iter = 100;
  bool couple_paths = true;  // false: independent reference paths (negative control)
};

struct ConvergenceRow {
  double k = 0.0;
  double h = 0.0;
  double error = 0.0;                   // sqrt(mean of squared sup-errors)
  std::optional<double> order;          // log2(previous error / error)
  int samples = 0;
  double standard_error = 0.0;          // of `error`, delta-method propagated
};

/// Max over shared time points of |u_ref^n - u_h^n|_H1 on the fine mesh for
/// one sample path. Builds its operators on the fly; run_study amortizes them.
double sample_error(int level, const StudyConfig& cfg, int sample_id);

class StudyAborted : public std::runtime_error {
 public:
  StudyAborted(std::string what, std::vector<ConvergenceRow> partial, int level,
               int sample)
      : std::runtime_error(std::move(what)),
        partial_rows(std::move(partial)),
        failed_level(level),
        failed_sample(sample) {}
  std::vector<ConvergenceRow> partial_rows;
  int failed_level = -1;
  int failed_sample = -1;
};

/// One row per level, ordered; throws StudyAborted carrying completed rows if
/// any sample fails.
std::vector<ConvergenceRow> run_study(const StudyConfig& cfg);

/// CSV with header k,h,error,order,J,stderr; order blank on the first row.
void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// level,log2_error pairs for external plotting.
void write_plot_data(std::ostream& out, const std::vector<int>& levels,
                     const std::vector<ConvergenceRow>& rows);

/// Monte Carlo estimates of E[sup_n |u^n|_H1^{2^p}] at one level.
struct MomentReport {
  int power = 1;          // p, moment exponent is 2^p
  double estimate = 0.0;
  double standard_error = 0.0;
};

std::vector<MomentReport> moment_statistics(const StudyConfig& cfg, int level,
                                            const std::vector<int>& powers);

/// Growth flag between two levels of the same moment: true when the estimate
/// drifts by more than 50% under refinement, a boundedness violation signal.
bool moment_growth_flagged(const MomentReport& coarse, const MomentReport& fine);

/// Mean of exp(gamma |u^n|_H1^2) over steps and samples. The time-step
/// admissibility bound k <= 1/(32 L0^2 gamma) only applies to bounded noise.
struct ExpMomentReport {
  double gamma = 0.0;
  double mean = 0.0;
  bool k_admissible = true;
};

ExpMomentReport exp_moment_monitor(const StudyConfig& cfg, int level, double gamma);

/// Pooled z-score of the Ito pairings (G(u^n) dW_n, u^n) across steps and
/// samples; `anticipative` switches to the corrupted pairing that evaluates G
/// at u^{n+1}, used to measure the power of the test.
struct MartingaleReport {
  double mean = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  long count = 0;
};

MartingaleReport martingale_test(const StudyConfig& cfg, int level,
                                 bool anticipative = false);

/// Worker count for sample-parallel loops: SBBM_THREADS when set, otherwise
/// the hardware concurrency. Results are reduced in sample order, so the
/// outcome does not depend on scheduling.
int worker_count();

void parallel_samples(int count, const std::function<void(int)>& work);

}  // namespace sbbm
