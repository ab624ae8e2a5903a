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

#include "qsync/metrics.hpp"

#include <cmath>
#include <string>

namespace qsync {

CoherenceSample phase_coherence(const DensityMatrix& rho) {
  const int d = rho.dim();
  Complex a_mean = 0.0;
  double n_mean = 0.0;
  for (int n = 1; n < d; ++n) {
    a_mean += std::sqrt(double(n)) * rho(n, n - 1);
    n_mean += double(n) * rho(n, n).real();
  }
  if (!(n_mean > kVacuumGuard)) {
    throw UndefinedCoherence("phase_coherence: mean photon number " +
                             std::to_string(n_mean) +
                             " below vacuum guard");
  }
  const Complex S = a_mean / std::sqrt(n_mean);
  return {S, std::abs(S), std::arg(S)};
}

double purity(const DensityMatrix& rho) {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

std::vector<double> coherence_profile(const DensityMatrix& rho, int k_max) {
  const int d = rho.dim();
  if (k_max < 1 || k_max >= d) {
    throw InvalidArgument("coherence_profile: k_max must be in [1, dim)");
  }
  std::vector<double> bands(k_max, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    for (int n = 0; n + k < d; ++n) bands[k - 1] += std::abs(rho(n, n + k));
  }
  return bands;
}

}  // namespace qsync
