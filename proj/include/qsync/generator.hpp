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

// Banded evaluation of the master-equation generator. Every operator in the
// model (a, a', a^2, a'^2, a'a) is banded in the Fock basis, so the generator
// acts on a dense rho in O(dim^2) instead of the O(dim^3) of operator
// products. The integrators spend nearly all their time here.

#include <vector>

#include "qsync/fock.hpp"

namespace qsync {

// Column-major complex matrix stored as separate real and imaginary planes
// with two rows/columns of zero padding on every side, so that the +-1 and
// +-2 index shifts of the ladder operators never need bounds checks.
class PaddedMatrix {
 public:
  static constexpr int kPad = 2;

  explicit PaddedMatrix(int dim);
  static PaddedMatrix from(const Matrix& m);

  int dim() const noexcept { return dim_; }
  int stride() const noexcept { return stride_; }
  int offset(int row, int col) const noexcept {
    return (row + kPad) + (col + kPad) * stride_;
  }
  Complex get(int row, int col) const {
    const int k = offset(row, col);
    return {re_[k], im_[k]};
  }
  void set(int row, int col, Complex v) {
    const int k = offset(row, col);
    re_[k] = v.real();
    im_[k] = v.imag();
  }

  Matrix to_matrix() const;
  Complex trace() const;
  void scale(double factor);
  // this += factor * other
  void axpy(double factor, const PaddedMatrix& other);
  void copy_from(const PaddedMatrix& other);

  double* re() noexcept { return re_.data(); }
  double* im() noexcept { return im_.data(); }
  const double* re() const noexcept { return re_.data(); }
  const double* im() const noexcept { return im_.data(); }

 private:
  int dim_;
  int stride_;
  std::vector<double> re_;
  std::vector<double> im_;
};

struct GeneratorRates {
  double delta = 0.0;
  double E = 0.0;
  double eta = 0.0;
  double phi = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double theta = 0.0;
  // Prefactor of the measurement back-action, sqrt(eta_d * gamma3).
  double measurement_strength = 0.0;
};

class Generator {
 public:
  Generator(int dim, const GeneratorRates& rates);

  int dim() const noexcept { return dim_; }

  // y = drift(x) for an arbitrary (not necessarily Hermitian) matrix x.
  void apply(const PaddedMatrix& x, PaddedMatrix& y) const;

  // y = drift(x) for Hermitian x; only the upper triangle is evaluated and
  // the lower triangle is filled by conjugation.
  void apply_hermitian(const PaddedMatrix& x, PaddedMatrix& y) const;

  struct StepInfo {
    double trace;       // trace of y before any renormalization
    double quadrature;  // Tr[(L + L')x] with L = a e^{-i theta}
  };

  // One Euler-Maruyama step of the nonlinear SME for Hermitian, unit-trace x:
  //   y = x + drift(x) dt + s (L x + x L' - Tr[(L+L')x] x) dW
  // with s the measurement strength. y is exactly Hermitian; it is NOT
  // renormalized.
  StepInfo euler_step(const PaddedMatrix& x, PaddedMatrix& y, double dt,
                      double dW) const;

  // Tr[(L + L')x] for the measured operator L = a e^{-i theta}.
  double quadrature(const PaddedMatrix& x) const;

 private:
  template <bool kHermitian, bool kMeasure>
  void sweep(const PaddedMatrix& x, PaddedMatrix& y, double identity_weight,
             double drift_weight, double noise, double quad) const;

  int dim_;
  GeneratorRates rates_;
  std::vector<double> sqrt_n_;       // sqrt(k)
  std::vector<double> sqrt_n1_;      // sqrt(k + 1)
  std::vector<double> sqrt_nn1_;     // sqrt(k (k - 1)), zero above dim - 1
  std::vector<double> half_loss_;    // diagonal of (g1 aa' + g2 a'^2a^2 + g3 a'a)/2
  std::vector<double> level_;        // k as double
  Complex squeeze_;                  // eta e^{2 i phi}
  Complex meas_phase_;               // e^{-i theta}
};

}  // namespace qsync
