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

// Physics of the driven, squeezed quantum Stuart-Landau oscillator under
// homodyne monitoring of the single-photon loss channel.
//
//   H = -delta a'a + i E (a - a') + i eta (a'^2 e^{2i phi} - a^2 e^{-2i phi})
//   drho = {-i[H,rho] + g1 D[a']rho + g2 D[a^2]rho + g3 D[a]rho} dt
//          + sqrt(eta_d g3) H[a e^{-i theta}]rho dW
//
// All rates are in units of gamma1 (hbar = 1).

#include <string>
#include <vector>

#include "qsync/fock.hpp"
#include "qsync/generator.hpp"

namespace qsync {

struct ModelParams {
  double delta = 0.0;   // detuning
  double E = 0.0;       // harmonic drive amplitude
  double eta = 0.0;     // squeezing amplitude
  double phi = 0.0;     // squeezing phase
  double gamma1 = 1.0;  // one-photon gain
  double gamma2 = 1.0;  // two-photon loss
  double gamma3 = 0.0;  // one-photon loss (monitored channel)
  double eta_d = 1.0;   // detector efficiency
  double theta = 0.0;   // homodyne quadrature angle
  int dim = 0;          // Fock truncation; 0 selects default_dimension()

  static constexpr double kSqueezingSoftLimit = 0.1;

  // Throws InvalidArgument on hard violations; returns soft warnings.
  std::vector<std::string> validate() const;

  // Copy with dim filled in from the truncation rule when it is 0.
  ModelParams resolved() const;

  bool operator==(const ModelParams&) const = default;
};

Operator hamiltonian(const ModelParams& p);

// D[L]rho = L rho L' - (L'L rho + rho L'L) / 2
Operator dissipator(const Operator& L, const DensityMatrix& rho);

// H[L]rho = L rho + rho L' - Tr[(L + L')rho] rho
Operator measurement_superop(const Operator& L, const DensityMatrix& rho);

// Immutable bundle of everything derived from one ModelParams: cached
// ladder operators, the Hamiltonian, and the banded generator used by the
// integrators. Safe to share across threads.
class Model {
 public:
  explicit Model(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  const FockSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const std::vector<std::string>& warnings() const noexcept {
    return warnings_;
  }

  const Operator& a() const noexcept { return a_; }
  const Operator& a_dag() const noexcept { return a_dag_; }
  const Operator& number() const noexcept { return number_; }
  const Operator& hamiltonian() const noexcept { return hamiltonian_; }
  // a e^{-i theta}
  Operator measurement_operator() const;
  // sqrt(eta_d * gamma3)
  double measurement_strength() const noexcept;

  const Generator& generator() const noexcept { return generator_; }

 private:
  ModelParams params_;
  FockSpace space_;
  std::vector<std::string> warnings_;
  Operator a_;
  Operator a_dag_;
  Operator number_;
  Operator hamiltonian_;
  Generator generator_;
};

// Deterministic part of the stochastic master equation (the dt coefficient).
Operator drift(const Model& model, const DensityMatrix& rho);
Operator drift(const ModelParams& p, const DensityMatrix& rho);

}  // namespace qsync
