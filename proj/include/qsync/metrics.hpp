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

// Scalar observables of a single state.

#include <vector>

#include "qsync/fock.hpp"

namespace qsync {

struct CoherenceSample {
  Complex S;
  double magnitude;  // |S|
  double phi_avg;    // arg S
};

// Below this mean photon number the phase coherence is undefined.
inline constexpr double kVacuumGuard = 1e-10;

// S = Tr[a rho] / sqrt(Tr[a'a rho]). Throws UndefinedCoherence for
// vacuum-like states.
CoherenceSample phase_coherence(const DensityMatrix& rho);

// Tr[rho^2]
double purity(const DensityMatrix& rho);

// Total weight of each off-diagonal band: entry k-1 is sum_n |rho(n, n+k)|
// for k = 1..k_max.
std::vector<double> coherence_profile(const DensityMatrix& rho, int k_max);

// Band-2 over band-1 weight above which the phase-coherence measure is
// flagged as unreliable.
inline constexpr double kOffDiagonalWarnRatio = 0.1;

}  // namespace qsync
