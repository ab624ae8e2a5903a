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

// Truncated Fock-space linear algebra. Matrices are dense complex; the
// truncation keeps levels |0>..|dim-1>.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "qsync/errors.hpp"

namespace qsync {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class FockSpace {
 public:
  explicit FockSpace(int dim);

  int dim() const noexcept { return dim_; }
  bool operator==(const FockSpace&) const = default;

 private:
  int dim_;
};

class Operator {
 public:
  explicit Operator(FockSpace space);  // zero operator
  Operator(FockSpace space, Matrix entries);

  static Operator identity(FockSpace space);

  const FockSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const Matrix& matrix() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  // Largest elementwise modulus.
  double max_abs() const;

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(Complex scale) const;

 private:
  FockSpace space_;
  Matrix entries_;
};

Operator operator*(Complex scale, const Operator& op);

// Hermitian, unit-trace state. Construction validates both properties;
// positivity is monitored by callers, never enforced.
class DensityMatrix {
 public:
  static constexpr double kHermiticityTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;

  DensityMatrix(FockSpace space, Matrix entries);

  // Skips validation. Used by integrators that maintain the invariants
  // themselves.
  static DensityMatrix trusted(FockSpace space, Matrix entries);

  static DensityMatrix fock(FockSpace space, int n);
  static DensityMatrix maximally_mixed(FockSpace space);

  const FockSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const Matrix& matrix() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  Operator as_operator() const { return Operator(space_, entries_); }
  double min_eigenvalue() const;

 private:
  struct Unchecked {};
  DensityMatrix(FockSpace space, Matrix entries, Unchecked);

  FockSpace space_;
  Matrix entries_;
};

Operator annihilation(FockSpace space);
Operator creation(FockSpace space);
Operator number(FockSpace space);
Operator dagger(const Operator& op);

// Tr[op * rho].
Complex expectation(const Operator& op, const DensityMatrix& rho);

// Pure coherent state, amplitudes renormalized after truncation. Requires
// |alpha|^2 <= dim / 4.
DensityMatrix coherent_state(Complex alpha, FockSpace space);

// Total population of the top k Fock levels, 1 <= k < dim.
double fock_tail_population(const DensityMatrix& rho, int k);

// Truncation rule: max(12, ceil(8 gamma1 / (2 gamma2))) clamped to [12, 60].
int default_dimension(double gamma1, double gamma2);

// One escalation step of the truncation rule (+25%, at least +1).
int escalate_dimension(int dim);

void require_same_space(const FockSpace& a, const FockSpace& b,
                        const char* where);

}  // namespace qsync
