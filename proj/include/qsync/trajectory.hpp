// Copyright 2026 The qsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Homodyne-conditioned evolution: Euler-Maruyama integration of the
// normalized stochastic master equation and trajectory ensembles.

#include <cstdint>
#include <optional>
#include <vector>

#include "qsync/model.hpp"

namespace qsync {

struct SdeConfig {
  double dt = 5e-4;
  double t_burn = 30.0;
  double t_end = 30.0;
  std::uint64_t seed = 0;
  bool renormalize_every_step = true;
  // Average S_k over [t_burn, t_end] instead of sampling once at t_end.
  // With t_end == t_burn the window is [t_burn, t_burn + 10].
  bool time_average = false;
  double sample_interval = 0.1;
  // Steps between positivity checks (one Hermitian eigensolve each).
  int positivity_interval = 2000;
  // Restart a trajectory at dt/2 (up to twice) when positivity trips.
  bool auto_halve_dt = true;

  static constexpr double kStiffnessBound = 0.05;
  static constexpr double kPositivityTol = 1e-4;
  static constexpr int kMaxHalvings = 2;

  // Default configuration for a parameter point: dt = 5e-4 unless the
  // stiffness bound requires a smaller step.
  static SdeConfig defaults_for(const ModelParams& p);

  // dt * max(gamma1, gamma2 * nbar, gamma3, E, |delta|, eta), with nbar the
  // semiclassical photon number max(1, gamma1 / (2 gamma2)).
  static double stiffness(const ModelParams& p, double dt);

  // Throws InvalidArgument if the configuration is unusable for p.
  void validate(const ModelParams& p) const;

  double window_end() const;

  bool operator==(const SdeConfig&) const = default;
};

struct TrajectoryResult {
  DensityMatrix rho_final;
  Complex S_k;
  double purity_k;
  double record_mean;  // time average of dY/dt over [0, t_end]
  std::uint64_t seed;
  double min_eig_seen;
  double dt_used;
};

struct StepResult {
  DensityMatrix rho;
  double dY;
};

// One Euler-Maruyama step, renormalized. dY is computed from the pre-step
// state. Throws StepFailure if the unnormalized trace is not positive.
StepResult sme_step(const Model& model, const DensityMatrix& rho, double dW,
                    double dt);
StepResult sme_step(const ModelParams& p, const DensityMatrix& rho, double dW,
                    double dt);

TrajectoryResult run_trajectory(const Model& model, const SdeConfig& cfg,
                                const DensityMatrix& rho0);
TrajectoryResult run_trajectory(const ModelParams& p, const SdeConfig& cfg,
                                const DensityMatrix& rho0);

struct EnsembleResult {
  Complex S_HD;
  double purity_HD;
  int n_traj;
  DensityMatrix rho_mean;
  double mc_stderr_S;
  double mc_stderr_purity;
  double min_eig_seen;
  std::vector<Complex> samples;  // S_k in trajectory order
  std::vector<double> purities;  // purity_k in trajectory order
};

// Fixed-order reduction of per-trajectory results.
EnsembleResult reduce_ensemble(const std::vector<TrajectoryResult>& results);

// Seed of trajectory k in an ensemble seeded with cfg.seed.
std::uint64_t trajectory_seed(std::uint64_t ensemble_seed, int index);

// Runs n_traj trajectories from rho0 (default: the unconditioned steady
// state). Any failure aborts with the failing trajectory's seed.
EnsembleResult run_ensemble(const Model& model, const SdeConfig& cfg,
                            int n_traj,
                            std::optional<DensityMatrix> rho0 = std::nullopt);
EnsembleResult run_ensemble(const ModelParams& p, const SdeConfig& cfg,
                            int n_traj);

}  // namespace qsync
