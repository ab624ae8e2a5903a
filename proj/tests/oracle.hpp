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

// Reference implementations for the tests. Everything here is written from
// the textbook formulas with plain dense matrices and shares no code with the
// library beyond the Eigen types.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
inline const C I{0.0, 1.0};

inline M lower(int d) {
  M a = M::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline M D(const M& L, const M& rho) {
  const M LdL = L.adjoint() * L;
  return L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

inline M Hmeas(const M& L, const M& rho) {
  return L * rho + rho * L.adjoint() - ((L + L.adjoint()) * rho).trace() * rho;
}

struct Params {
  double delta = 0, E = 0, eta = 0, phi = 0, g1 = 1, g2 = 1, g3 = 0,
         eta_d = 1, theta = 0;
};

inline M hamiltonian(const Params& p, int d) {
  const M a = lower(d);
  const M ad = a.adjoint();
  const C z = std::polar(1.0, 2.0 * p.phi);
  return -p.delta * ad * a + I * p.E * (a - ad) +
         I * p.eta * (ad * ad * z - a * a * std::conj(z));
}

inline M drift(const Params& p, const M& rho) {
  const int d = int(rho.rows());
  const M a = lower(d);
  const M H = hamiltonian(p, d);
  return -I * (H * rho - rho * H) + p.g1 * D(a.adjoint(), rho) +
         p.g2 * D(a * a, rho) + p.g3 * D(a, rho);
}

// vec(A X B) = (B^T kron A) vec(X), column stacking.
inline M kron(const M& A, const M& B) {
  M out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

inline M liouvillian(const Params& p, int d) {
  const M Id = M::Identity(d, d);
  const M H = hamiltonian(p, d);
  M L = -I * (kron(Id, H) - kron(H.transpose(), Id));
  const M a = lower(d);
  auto add = [&](const M& J, double rate) {
    const M JdJ = J.adjoint() * J;
    L += rate * (kron(J.conjugate(), J) - 0.5 * kron(Id, JdJ) -
                 0.5 * kron(JdJ.transpose(), Id));
  };
  add(a.adjoint(), p.g1);
  add(a * a, p.g2);
  add(a, p.g3);
  return L;
}

inline M vec_to_matrix(const Eigen::VectorXcd& v, int d) {
  return Eigen::Map<const M>(v.data(), d, d);
}

// Null vector from a full eigendecomposition, normalized to unit trace.
inline M steady_state(const Params& p, int d) {
  Eigen::ComplexEigenSolver<M> es(liouvillian(p, d));
  int best = 0;
  for (int k = 1; k < es.eigenvalues().size(); ++k) {
    if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(best))) best = k;
  }
  M rho = vec_to_matrix(es.eigenvectors().col(best), d);
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

inline M random_density(int d, std::mt19937_64& rng, int rank = 0) {
  std::normal_distribution<double> n(0.0, 1.0);
  const int r = rank > 0 ? rank : d;
  M A(d, r);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < r; ++j) A(i, j) = C(n(rng), n(rng));
  M rho = A * A.adjoint();
  return rho / rho.trace().real();
}

inline M random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  M A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = C(n(rng), n(rng));
  return A;
}

inline M random_unitary(int d, std::mt19937_64& rng, double scale) {
  const M A = random_matrix(d, rng);
  const M Hm = 0.5 * scale * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<M> es(Hm);
  Eigen::VectorXcd ph(d);
  for (int k = 0; k < d; ++k) ph(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_abs(const M& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
