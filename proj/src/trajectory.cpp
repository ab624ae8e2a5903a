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

#include "qsync/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "qsync/master.hpp"
#include "qsync/metrics.hpp"
#include "qsync/parallel.hpp"
#include "qsync/rng.hpp"

namespace qsync {
namespace {

double max_rate(const ModelParams& p) {
  const double nbar = std::max(1.0, p.gamma1 / (2.0 * p.gamma2));
  return std::max({p.gamma1, p.gamma2 * nbar, p.gamma3, p.E, std::abs(p.delta),
                   p.eta});
}

long steps_for(double t, double dt) { return std::lround(t / dt); }

struct Integration {
  PaddedMatrix state;
  Complex S_k;
  double record_mean;
  double min_eig;
};

double min_eigenvalue(const Model& model, const PaddedMatrix& x) {
  return DensityMatrix::trusted(model.space(), x.to_matrix()).min_eigenvalue();
}

Integration integrate(const Model& model, const SdeConfig& cfg,
                      const DensityMatrix& rho0, double dt) {
  const Generator& gen = model.generator();
  const double strength = model.measurement_strength();
  const long total = steps_for(cfg.window_end(), dt);
  const long burn = steps_for(cfg.t_burn, dt);
  const long sample_every = std::max(1L, steps_for(cfg.sample_interval, dt));

  CounterRng rng(cfg.seed);
  std::normal_distribution<double> wiener(0.0, std::sqrt(dt));

  PaddedMatrix x = PaddedMatrix::from(rho0.matrix());
  PaddedMatrix y(model.dim());
  double record = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  Complex S_sum = 0.0;
  long S_count = 0;

  for (long step = 1; step <= total; ++step) {
    const double dW = wiener(rng);
    const Generator::StepInfo info = gen.euler_step(x, y, dt, dW);
    if (!(info.trace > 0.0)) {
      std::ostringstream os;
      os << "SME step " << step << " produced trace " << info.trace
         << " (dt = " << dt << " too large?)";
      throw StepFailure(os.str(), cfg.seed);
    }
    record += strength * info.quadrature * dt + dW;
    if (cfg.renormalize_every_step) y.scale(1.0 / info.trace);
    std::swap(x, y);

    if (step % cfg.positivity_interval == 0 || step == total) {
      min_eig = std::min(min_eig, min_eigenvalue(model, x));
    }
    if (cfg.time_average && step >= burn && (step - burn) % sample_every == 0) {
      PaddedMatrix normalized = x;
      normalized.scale(1.0 / x.trace().real());
      S_sum += phase_coherence(DensityMatrix::trusted(
                                   model.space(), normalized.to_matrix()))
                   .S;
      ++S_count;
    }
  }
  if (total == 0) min_eig = min_eigenvalue(model, x);

  x.scale(1.0 / x.trace().real());
  Complex S_k;
  if (cfg.time_average && S_count > 0) {
    S_k = S_sum / double(S_count);
  } else {
    S_k = phase_coherence(DensityMatrix::trusted(model.space(), x.to_matrix())).S;
  }
  const double horizon = double(total) * dt;
  return {std::move(x), S_k, horizon > 0.0 ? record / horizon : 0.0, min_eig};
}

}  // namespace

SdeConfig SdeConfig::defaults_for(const ModelParams& p) {
  SdeConfig cfg;
  cfg.dt = std::min(5e-4, kStiffnessBound / max_rate(p.resolved()));
  return cfg;
}

double SdeConfig::stiffness(const ModelParams& p, double dt) {
  return dt * max_rate(p);
}

void SdeConfig::validate(const ModelParams& p) const {
  if (!(dt > 0.0)) throw InvalidArgument("SdeConfig: dt must be > 0");
  if (!(t_burn >= 0.0)) throw InvalidArgument("SdeConfig: t_burn must be >= 0");
  if (!(t_end >= t_burn)) {
    throw InvalidArgument("SdeConfig: t_end must be >= t_burn");
  }
  if (!(sample_interval > 0.0)) {
    throw InvalidArgument("SdeConfig: sample_interval must be > 0");
  }
  if (positivity_interval < 1) {
    throw InvalidArgument("SdeConfig: positivity_interval must be >= 1");
  }
  const double s = stiffness(p, dt);
  if (s > kStiffnessBound) {
    std::ostringstream os;
    os << "SdeConfig: dt * max rate = " << s << " exceeds " << kStiffnessBound;
    throw InvalidArgument(os.str());
  }
}

double SdeConfig::window_end() const {
  if (time_average && t_end == t_burn) return t_burn + 10.0;
  return t_end;
}

StepResult sme_step(const Model& model, const DensityMatrix& rho, double dW,
                    double dt) {
  require_same_space(model.space(), rho.space(), "sme_step");
  const PaddedMatrix x = PaddedMatrix::from(rho.matrix());
  PaddedMatrix y(model.dim());
  const Generator::StepInfo info = model.generator().euler_step(x, y, dt, dW);
  if (!(info.trace > 0.0)) {
    throw StepFailure("sme_step: non-positive trace " +
                      std::to_string(info.trace));
  }
  y.scale(1.0 / info.trace);
  const double dY = model.measurement_strength() * info.quadrature * dt + dW;
  return {DensityMatrix::trusted(model.space(), y.to_matrix()), dY};
}

StepResult sme_step(const ModelParams& p, const DensityMatrix& rho, double dW,
                    double dt) {
  ModelParams q = p;
  if (q.dim == 0) q.dim = rho.dim();
  return sme_step(Model(q), rho, dW, dt);
}

TrajectoryResult run_trajectory(const Model& model, const SdeConfig& cfg,
                                const DensityMatrix& rho0) {
  require_same_space(model.space(), rho0.space(), "run_trajectory");
  cfg.validate(model.params());
  double dt = cfg.dt;
  const int attempts = cfg.auto_halve_dt ? SdeConfig::kMaxHalvings + 1 : 1;
  double worst = 0.0;
  for (int attempt = 0; attempt < attempts; ++attempt, dt *= 0.5) {
    Integration run = integrate(model, cfg, rho0, dt);
    worst = run.min_eig;
    if (run.min_eig >= -SdeConfig::kPositivityTol) {
      auto rho = DensityMatrix::trusted(model.space(), run.state.to_matrix());
      const double p = purity(rho);
      return {std::move(rho), run.S_k,     p,     run.record_mean,
              cfg.seed,       run.min_eig, dt};
    }
  }
  std::ostringstream os;
  os << "trajectory positivity gate failed: min eigenvalue " << worst
     << " at dt = " << dt * 2.0;
  throw StepFailure(os.str(), cfg.seed);
}

TrajectoryResult run_trajectory(const ModelParams& p, const SdeConfig& cfg,
                                const DensityMatrix& rho0) {
  ModelParams q = p;
  if (q.dim == 0) q.dim = rho0.dim();
  return run_trajectory(Model(q), cfg, rho0);
}

std::uint64_t trajectory_seed(std::uint64_t ensemble_seed, int index) {
  return derive_seed(ensemble_seed, std::uint64_t(index));
}

EnsembleResult reduce_ensemble(const std::vector<TrajectoryResult>& results) {
  if (results.empty()) {
    throw InvalidArgument("reduce_ensemble: no trajectories");
  }
  const int n = int(results.size());
  const FockSpace space = results.front().rho_final.space();
  Complex S_sum = 0.0;
  double P_sum = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  Matrix rho_sum = Matrix::Zero(space.dim(), space.dim());
  std::vector<Complex> samples;
  std::vector<double> purities;
  samples.reserve(n);
  purities.reserve(n);
  for (const TrajectoryResult& r : results) {
    S_sum += r.S_k;
    P_sum += r.purity_k;
    rho_sum += r.rho_final.matrix();
    min_eig = std::min(min_eig, r.min_eig_seen);
    samples.push_back(r.S_k);
    purities.push_back(r.purity_k);
  }
  const Complex S_mean = S_sum / double(n);
  const double P_mean = P_sum / double(n);
  double S_var = 0.0;
  double P_var = 0.0;
  for (int k = 0; k < n; ++k) {
    S_var += std::norm(samples[k] - S_mean);
    P_var += (purities[k] - P_mean) * (purities[k] - P_mean);
  }
  const double denom = n > 1 ? double(n - 1) : 1.0;
  const double root_n = std::sqrt(double(n));
  return {S_mean,
          P_mean,
          n,
          DensityMatrix::trusted(space, rho_sum / double(n)),
          n > 1 ? std::sqrt(S_var / denom) / root_n : 0.0,
          n > 1 ? std::sqrt(P_var / denom) / root_n : 0.0,
          min_eig,
          std::move(samples),
          std::move(purities)};
}

EnsembleResult run_ensemble(const Model& model, const SdeConfig& cfg,
                            int n_traj, std::optional<DensityMatrix> rho0) {
  if (n_traj < 1) throw InvalidArgument("run_ensemble: n_traj must be >= 1");
  cfg.validate(model.params());
  const DensityMatrix initial = rho0 ? *rho0 : steady_state(model).rho;
  std::vector<std::optional<TrajectoryResult>> slots(n_traj);
  parallel_for(std::size_t(n_traj), [&](std::size_t k) {
    SdeConfig local = cfg;
    local.seed = trajectory_seed(cfg.seed, int(k));
    try {
      slots[k] = run_trajectory(model, local, initial);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "trajectory " << k << " (seed " << local.seed
         << ") failed: " << e.what();
      throw StepFailure(os.str(), local.seed);
    }
  });
  std::vector<TrajectoryResult> results;
  results.reserve(n_traj);
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return reduce_ensemble(results);
}

EnsembleResult run_ensemble(const ModelParams& p, const SdeConfig& cfg,
                            int n_traj) {
  return run_ensemble(Model(p), cfg, n_traj);
}

}  // namespace qsync
