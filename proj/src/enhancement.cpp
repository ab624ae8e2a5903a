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

#include "qsync/enhancement.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qsync/parallel.hpp"
#include "qsync/rng.hpp"

namespace qsync {

std::string_view to_string(CoherenceEstimator e) {
  switch (e) {
    case CoherenceEstimator::kMagnitudeMean:
      return "magnitude";
    case CoherenceEstimator::kComplexMean:
      return "complex";
  }
  return "magnitude";
}

CoherenceEstimator parse_estimator(std::string_view name) {
  if (name == "magnitude") return CoherenceEstimator::kMagnitudeMean;
  if (name == "complex") return CoherenceEstimator::kComplexMean;
  throw InvalidArgument("unknown coherence estimator '" + std::string(name) +
                        "' (expected 'magnitude' or 'complex')");
}

EnhancementReport make_report(const TruncatedSteadyState& base,
                              const EnsembleResult& ensemble,
                              CoherenceEstimator estimator) {
  const DensityMatrix& rho_ss = base.steady.rho;
  EnhancementReport r{};
  r.S0 = phase_coherence(rho_ss);
  r.P0 = purity(rho_ss);
  r.S_HD = ensemble.S_HD;
  r.P_HD = ensemble.purity_HD;
  r.dim = rho_ss.dim();
  r.tail = base.tail;
  r.min_eig_seen = ensemble.min_eig_seen;
  r.warnings = base.warnings;

  const auto& samples = ensemble.samples;
  const double n = double(samples.size());
  // Each estimator is a mean of scalar projections x_k; the standard error
  // of F follows from their sample variance (first-order delta method for
  // the complex mean, where x_k projects S_k onto the direction of S_HD).
  std::vector<double> x(samples.size());
  if (estimator == CoherenceEstimator::kMagnitudeMean) {
    for (std::size_t k = 0; k < samples.size(); ++k) x[k] = std::abs(samples[k]);
    r.S_HD_abs = std::accumulate(x.begin(), x.end(), 0.0) / n;
  } else {
    r.S_HD_abs = std::abs(ensemble.S_HD);
    const Complex dir =
        r.S_HD_abs > 0.0 ? std::conj(ensemble.S_HD) / r.S_HD_abs : 1.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      x[k] = (samples[k] * dir).real();
    }
  }
  double var = 0.0;
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  for (double v : x) var += (v - mean_x) * (v - mean_x);
  const double stderr_x = n > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;

  r.F = r.S_HD_abs / r.S0.magnitude;
  r.mc_stderr_F = stderr_x / r.S0.magnitude;
  r.F_purity = r.P_HD / r.P0;

  const std::vector<double> bands = coherence_profile(rho_ss, 2);
  r.offdiag_ratio = bands[0] > 0.0 ? bands[1] / bands[0] : 0.0;
  // The guard concerns squeezing; a driven limit cycle has a band-2 weight
  // of its own that says nothing about the measure's validity.
  if (base.params.eta > 0.0 && r.offdiag_ratio > kOffDiagonalWarnRatio) {
    std::ostringstream os;
    os << "second off-diagonal band is " << r.offdiag_ratio
       << " of the first; phase coherence may be unreliable";
    r.warnings.push_back(os.str());
  }
  return r;
}

EnhancementReport enhancement(const ModelParams& p, const SdeConfig& cfg,
                              int n_traj, CoherenceEstimator estimator) {
  return enhancement(adaptive_steady_state(p), cfg, n_traj, estimator);
}

EnhancementReport enhancement(const TruncatedSteadyState& base,
                              const SdeConfig& cfg, int n_traj,
                              CoherenceEstimator estimator) {
  const Model model(base.params);
  const EnsembleResult ens = run_ensemble(model, cfg, n_traj, base.steady.rho);
  return make_report(base, ens, estimator);
}

std::uint64_t run_seed(std::uint64_t seed, int run) {
  return derive_seed(mix64(seed ^ 0x72756e73ULL), std::uint64_t(run));
}

RunStatistics sample_run_statistics(const ModelParams& p, const SdeConfig& cfg,
                                    int n_traj, int n_runs,
                                    CoherenceEstimator estimator,
                                    bool independent_seeds) {
  return sample_run_statistics(adaptive_steady_state(p), cfg, n_traj, n_runs,
                               estimator, independent_seeds);
}

RunStatistics sample_run_statistics(const TruncatedSteadyState& base,
                                    const SdeConfig& cfg, int n_traj,
                                    int n_runs, CoherenceEstimator estimator,
                                    bool independent_seeds) {
  if (n_runs < 2) {
    throw InvalidArgument("sample_run_statistics: n_runs must be >= 2");
  }
  std::vector<double> F(n_runs, 0.0);
  parallel_for(std::size_t(n_runs), [&](std::size_t r) {
    SdeConfig local = cfg;
    if (independent_seeds) local.seed = run_seed(cfg.seed, int(r));
    F[r] = enhancement(base, local, n_traj, estimator).F;
  });
  const double mean = std::accumulate(F.begin(), F.end(), 0.0) / n_runs;
  double var = 0.0;
  for (double f : F) var += (f - mean) * (f - mean);
  return {mean, std::sqrt(var / double(n_runs - 1)), std::move(F)};
}

}  // namespace qsync
