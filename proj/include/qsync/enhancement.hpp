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

// Enhancement of phase coherence and purity by homodyne monitoring, and
// run-to-run Monte Carlo statistics.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsync/master.hpp"
#include "qsync/metrics.hpp"
#include "qsync/trajectory.hpp"

namespace qsync {

// How per-trajectory coherence samples S_k are combined into |S_HD|.
//   kMagnitudeMean: mean_k |S_k|
//   kComplexMean:   |mean_k S_k|
// The complex mean of the numerators Tr[a rho_k] equals Tr[a rho_ss] for any
// diffusive unraveling, so under kComplexMean F differs from 1 only through
// the per-trajectory photon-number normalization.
enum class CoherenceEstimator { kMagnitudeMean, kComplexMean };

std::string_view to_string(CoherenceEstimator e);
CoherenceEstimator parse_estimator(std::string_view name);

struct EnhancementReport {
  double F;
  double F_purity;
  CoherenceSample S0;
  Complex S_HD;      // complex trajectory mean
  double S_HD_abs;   // estimator magnitude used in F
  double P0;
  double P_HD;
  double mc_stderr_F;
  int dim;
  double tail;
  double offdiag_ratio;  // band-2 / band-1 weight of rho_ss
  double min_eig_seen;
  std::vector<std::string> warnings;
};

// Assembles the report from a solved steady state and a finished ensemble.
EnhancementReport make_report(const TruncatedSteadyState& base,
                              const EnsembleResult& ensemble,
                              CoherenceEstimator estimator);

EnhancementReport enhancement(
    const ModelParams& p, const SdeConfig& cfg, int n_traj,
    CoherenceEstimator estimator = CoherenceEstimator::kMagnitudeMean);

EnhancementReport enhancement(
    const TruncatedSteadyState& base, const SdeConfig& cfg, int n_traj,
    CoherenceEstimator estimator = CoherenceEstimator::kMagnitudeMean);

struct RunStatistics {
  double mean_F;
  double std_F;  // sample standard deviation over runs
  std::vector<double> F;
};

// Seed of run r in a repeated-ensemble study.
std::uint64_t run_seed(std::uint64_t seed, int run);

// Repeats the ensemble n_runs times. With independent_seeds the runs use
// run_seed(cfg.seed, r); otherwise every run reuses cfg.seed.
RunStatistics sample_run_statistics(
    const ModelParams& p, const SdeConfig& cfg, int n_traj, int n_runs,
    CoherenceEstimator estimator = CoherenceEstimator::kMagnitudeMean,
    bool independent_seeds = true);

RunStatistics sample_run_statistics(
    const TruncatedSteadyState& base, const SdeConfig& cfg, int n_traj,
    int n_runs,
    CoherenceEstimator estimator = CoherenceEstimator::kMagnitudeMean,
    bool independent_seeds = true);

}  // namespace qsync
