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

// Unconditioned master equation: Liouvillian, steady state, and a
// deterministic RK4 integrator.

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "qsync/model.hpp"

namespace qsync {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

// Superoperator acting on column-stacked rho: vec(rho)[m + n*dim] = rho(m, n).
// Stored sparse; every term is a Kronecker product of banded matrices.
struct Liouvillian {
  FockSpace space;
  SparseMatrix matrix;

  Matrix apply(const Matrix& rho) const;
};

Liouvillian build_liouvillian(const ModelParams& p);

enum class SteadyStateMethod { kNullSpace, kLongTime };

struct SteadyState {
  static constexpr double kResidualTol = 1e-8;

  DensityMatrix rho;
  double residual;  // max |drift(rho)|
  SteadyStateMethod method;
};

SteadyState steady_state(const ModelParams& p);
SteadyState steady_state(const Model& model);

// Steady state with the truncation checked against the population of the two
// highest Fock levels. When params.dim is 0 the dimension starts from
// default_dimension() and is escalated by 25% (at most three times) until the
// tail drops below kTailTol; a pinned dimension is used as-is. A tail that
// stays above tolerance is reported as a warning, not an error.
struct TruncatedSteadyState {
  static constexpr double kTailTol = 1e-6;
  static constexpr int kTailLevels = 2;
  static constexpr int kMaxEscalations = 3;

  ModelParams params;  // dim resolved
  SteadyState steady;
  double tail;
  std::vector<std::string> warnings;
};

TruncatedSteadyState adaptive_steady_state(const ModelParams& p);

// 0 selects the default step 1e-3 / max(1, gamma2, gamma3, E, |delta|, eta).
double default_evolve_step(const ModelParams& p);

// Classic RK4 for drho/dt = drift(rho) over [0, T].
DensityMatrix evolve(const ModelParams& p, const DensityMatrix& rho0, double T,
                     double dt = 0.0);
DensityMatrix evolve(const Model& model, const DensityMatrix& rho0, double T,
                     double dt = 0.0);

// Max-norm of the generator applied to rho.
double drift_residual(const Model& model, const DensityMatrix& rho);

}  // namespace qsync
