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

#include "qsync/generator.hpp"

#include <algorithm>
#include <cmath>

namespace qsync {

PaddedMatrix::PaddedMatrix(int dim)
    : dim_(dim),
      stride_(dim + 2 * kPad),
      re_(std::size_t(stride_) * stride_, 0.0),
      im_(std::size_t(stride_) * stride_, 0.0) {}

PaddedMatrix PaddedMatrix::from(const Matrix& m) {
  PaddedMatrix out(int(m.rows()));
  for (int col = 0; col < out.dim_; ++col) {
    for (int row = 0; row < out.dim_; ++row) out.set(row, col, m(row, col));
  }
  return out;
}

Matrix PaddedMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  for (int col = 0; col < dim_; ++col) {
    for (int row = 0; row < dim_; ++row) m(row, col) = get(row, col);
  }
  return m;
}

Complex PaddedMatrix::trace() const {
  Complex t = 0.0;
  for (int k = 0; k < dim_; ++k) t += get(k, k);
  return t;
}

// Padding entries are zero and stay zero under scaling and axpy.
void PaddedMatrix::scale(double factor) {
  for (auto& v : re_) v *= factor;
  for (auto& v : im_) v *= factor;
}

void PaddedMatrix::axpy(double factor, const PaddedMatrix& other) {
  const std::size_t n = re_.size();
  double* __restrict yr = re_.data();
  double* __restrict yi = im_.data();
  const double* __restrict xr = other.re_.data();
  const double* __restrict xi = other.im_.data();
  for (std::size_t k = 0; k < n; ++k) {
    yr[k] += factor * xr[k];
    yi[k] += factor * xi[k];
  }
}

void PaddedMatrix::copy_from(const PaddedMatrix& other) {
  std::copy(other.re_.begin(), other.re_.end(), re_.begin());
  std::copy(other.im_.begin(), other.im_.end(), im_.begin());
}

Generator::Generator(int dim, const GeneratorRates& rates)
    : dim_(dim),
      rates_(rates),
      sqrt_n_(dim + 2, 0.0),
      sqrt_n1_(dim + 2, 0.0),
      sqrt_nn1_(dim + 2, 0.0),
      half_loss_(dim + 2, 0.0),
      level_(dim + 2, 0.0),
      squeeze_(std::polar(rates.eta, 2.0 * rates.phi)),
      meas_phase_(std::polar(1.0, -rates.theta)) {
  for (int k = 0; k < dim + 2; ++k) {
    level_[k] = double(k);
    sqrt_n_[k] = std::sqrt(double(k));
    sqrt_n1_[k] = std::sqrt(double(k + 1));
    sqrt_nn1_[k] = k < dim ? std::sqrt(double(k) * (k - 1 > 0 ? k - 1 : 0)) : 0.0;
  }
  for (int k = 0; k < dim; ++k) {
    // a a' is diag(k + 1) except on the top level, where truncation zeroes it.
    const double aa_dag = k < dim - 1 ? double(k + 1) : 0.0;
    half_loss_[k] = 0.5 * (rates.gamma1 * aa_dag +
                           rates.gamma2 * double(k) * double(k - 1) +
                           rates.gamma3 * double(k));
  }
}

namespace {

struct ColumnCoeffs {
  double E, delta, n, zr, zi, pr, pi;
  double loss_n, sq_n, sq1_n, s2_n, s2_n2;
  double jump1_n, jump2_n, jump3_n;
  double identity_weight, drift_weight, noise, quad;
};

// Updates rows [0, rows) of one column. All row-indexed arrays are offset so
// that index m addresses Fock level m; x arrays point at element (0, n) of a
// padded matrix with leading dimension ld.
template <bool kMeasure>
inline void column_update(int rows, long ld, const ColumnCoeffs& c,
                          const double* __restrict level,
                          const double* __restrict loss,
                          const double* __restrict sq,
                          const double* __restrict sq1,
                          const double* __restrict s2,
                          const double* __restrict xr,
                          const double* __restrict xi,
                          double* __restrict yr, double* __restrict yi) {
  for (int m = 0; m < rows; ++m) {
    const double cr = -(loss[m] + c.loss_n);
    const double ci = c.delta * (level[m] - c.n);
    const double x_r = xr[m];
    const double x_i = xi[m];
    double dr = cr * x_r - ci * x_i;
    double di = cr * x_i + ci * x_r;

    // harmonic drive, both sides of the commutator
    dr += c.E * (sq1[m] * xr[m + 1] - sq[m] * xr[m - 1] - c.sq_n * xr[m - ld] +
                 c.sq1_n * xr[m + ld]);
    di += c.E * (sq1[m] * xi[m + 1] - sq[m] * xi[m - 1] - c.sq_n * xi[m - ld] +
                 c.sq1_n * xi[m + ld]);

    // squeezing: z A + conj(z) B
    const double ar = s2[m] * xr[m - 2] - c.s2_n2 * xr[m + 2 * ld];
    const double ai = s2[m] * xi[m - 2] - c.s2_n2 * xi[m + 2 * ld];
    const double br = c.s2_n * xr[m - 2 * ld] - s2[m + 2] * xr[m + 2];
    const double bi = c.s2_n * xi[m - 2 * ld] - s2[m + 2] * xi[m + 2];
    dr += c.zr * (ar + br) - c.zi * (ai - bi);
    di += c.zr * (ai + bi) + c.zi * (ar - br);

    // jump terms a' x a, a^2 x a'^2, a x a'
    dr += c.jump1_n * sq[m] * xr[m - 1 - ld] +
          c.jump2_n * s2[m + 2] * xr[m + 2 + 2 * ld] +
          c.jump3_n * sq1[m] * xr[m + 1 + ld];
    di += c.jump1_n * sq[m] * xi[m - 1 - ld] +
          c.jump2_n * s2[m + 2] * xi[m + 2 + 2 * ld] +
          c.jump3_n * sq1[m] * xi[m + 1 + ld];

    double out_r = c.identity_weight * x_r + c.drift_weight * dr;
    double out_i = c.identity_weight * x_i + c.drift_weight * di;

    if constexpr (kMeasure) {
      // e^{-i theta} a x + e^{i theta} x a' - quad x
      const double p_r = sq1[m] * xr[m + 1];
      const double p_i = sq1[m] * xi[m + 1];
      const double q_r = c.sq1_n * xr[m + ld];
      const double q_i = c.sq1_n * xi[m + ld];
      out_r += c.noise * (c.pr * (p_r + q_r) - c.pi * (p_i - q_i) - c.quad * x_r);
      out_i += c.noise * (c.pr * (p_i + q_i) + c.pi * (p_r - q_r) - c.quad * x_i);
    }

    yr[m] = out_r;
    yi[m] = out_i;
  }
}

}  // namespace

template <bool kHermitian, bool kMeasure>
void Generator::sweep(const PaddedMatrix& x, PaddedMatrix& y,
                      double identity_weight, double drift_weight,
                      double noise, double quad) const {
  const int d = dim_;
  const long ld = x.stride();
  ColumnCoeffs c{};
  c.E = rates_.E;
  c.delta = rates_.delta;
  c.zr = squeeze_.real();
  c.zi = squeeze_.imag();
  c.pr = meas_phase_.real();
  c.pi = meas_phase_.imag();
  c.identity_weight = identity_weight;
  c.drift_weight = drift_weight;
  c.noise = noise;
  c.quad = quad;

  for (int n = 0; n < d; ++n) {
    const int base = x.offset(0, n);
    c.n = double(n);
    c.loss_n = half_loss_[n];
    c.sq_n = sqrt_n_[n];
    c.sq1_n = sqrt_n1_[n];
    c.s2_n = sqrt_nn1_[n];
    c.s2_n2 = sqrt_nn1_[n + 2];
    c.jump1_n = rates_.gamma1 * c.sq_n;
    c.jump2_n = rates_.gamma2 * c.s2_n2;
    c.jump3_n = rates_.gamma3 * c.sq1_n;
    column_update<kMeasure>(kHermitian ? n + 1 : d, ld, c, level_.data(),
                            half_loss_.data(), sqrt_n_.data(),
                            sqrt_n1_.data(), sqrt_nn1_.data(), x.re() + base,
                            x.im() + base, y.re() + base, y.im() + base);
  }

  if constexpr (kHermitian) {
    double* re = y.re();
    double* im = y.im();
    for (int n = 0; n < d; ++n) {
      im[y.offset(n, n)] = 0.0;
      for (int m = 0; m < n; ++m) {
        const int upper = y.offset(m, n);
        const int lower = y.offset(n, m);
        re[lower] = re[upper];
        im[lower] = -im[upper];
      }
    }
  }
}

void Generator::apply(const PaddedMatrix& x, PaddedMatrix& y) const {
  sweep<false, false>(x, y, 0.0, 1.0, 0.0, 0.0);
}

void Generator::apply_hermitian(const PaddedMatrix& x, PaddedMatrix& y) const {
  sweep<true, false>(x, y, 0.0, 1.0, 0.0, 0.0);
}

double Generator::quadrature(const PaddedMatrix& x) const {
  Complex lower = 0.0;  // sum sqrt(m+1) x[m+1, m]
  Complex upper = 0.0;  // sum sqrt(m+1) x[m, m+1]
  for (int m = 0; m + 1 < dim_; ++m) {
    lower += sqrt_n1_[m] * x.get(m + 1, m);
    upper += sqrt_n1_[m] * x.get(m, m + 1);
  }
  return (meas_phase_ * lower + std::conj(meas_phase_) * upper).real();
}

Generator::StepInfo Generator::euler_step(const PaddedMatrix& x,
                                          PaddedMatrix& y, double dt,
                                          double dW) const {
  const double quad = quadrature(x);
  const double noise = rates_.measurement_strength * dW;
  if (rates_.measurement_strength != 0.0) {
    sweep<true, true>(x, y, 1.0, dt, noise, quad);
  } else {
    sweep<true, false>(x, y, 1.0, dt, 0.0, 0.0);
  }
  double trace = 0.0;
  for (int k = 0; k < dim_; ++k) trace += y.re()[y.offset(k, k)];
  return {trace, quad};
}

}  // namespace qsync
