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

#include "qsync/master.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

namespace qsync {
namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix sparse_of(const Matrix& m) {
  return m.sparseView(Complex(1.0), 1e-300);
}

// Appends scale * (A kron B) to the triplet list.
void add_kron(std::vector<Triplet>& out, const SparseMatrix& A,
              const SparseMatrix& B, Complex scale) {
  const int nb_r = int(B.rows());
  const int nb_c = int(B.cols());
  for (int ca = 0; ca < A.outerSize(); ++ca) {
    for (SparseMatrix::InnerIterator ia(A, ca); ia; ++ia) {
      for (int cb = 0; cb < B.outerSize(); ++cb) {
        for (SparseMatrix::InnerIterator ib(B, cb); ib; ++ib) {
          out.emplace_back(int(ia.row()) * nb_r + int(ib.row()),
                           int(ia.col()) * nb_c + int(ib.col()),
                           scale * ia.value() * ib.value());
        }
      }
    }
  }
}

// vec(L X L' - (L'L X + X L'L)/2) with vec(A X B) = (B^T kron A) vec(X).
void add_dissipator(std::vector<Triplet>& out, const SparseMatrix& id,
                    const Matrix& L, double rate) {
  if (rate == 0.0) return;
  const Matrix ldl = L.adjoint() * L;
  add_kron(out, sparse_of(L.conjugate()), sparse_of(L), rate);
  add_kron(out, id, sparse_of(ldl), -0.5 * rate);
  add_kron(out, sparse_of(ldl.transpose()), id, -0.5 * rate);
}

Matrix hermitize(const Matrix& m) {
  Matrix h = 0.5 * (m + m.adjoint());
  return h / h.trace().real();
}

void rk4_run(const Generator& gen, PaddedMatrix& x, double T, double dt) {
  const long steps = std::max(1L, long(std::ceil(T / dt - 1e-9)));
  const double h = T / double(steps);
  const int d = x.dim();
  PaddedMatrix k(d), acc(d), stage(d);
  for (long s = 0; s < steps; ++s) {
    gen.apply_hermitian(x, k);  // k1
    acc.copy_from(k);
    stage.copy_from(x);
    stage.axpy(0.5 * h, k);
    gen.apply_hermitian(stage, k);  // k2
    acc.axpy(2.0, k);
    stage.copy_from(x);
    stage.axpy(0.5 * h, k);
    gen.apply_hermitian(stage, k);  // k3
    acc.axpy(2.0, k);
    stage.copy_from(x);
    stage.axpy(h, k);
    gen.apply_hermitian(stage, k);  // k4
    acc.axpy(1.0, k);
    x.axpy(h / 6.0, acc);
  }
}

// Integrates until the generator residual falls below tol or t_max is hit.
SteadyState relax(const Model& model, const DensityMatrix& rho0, double t_max) {
  const double dt = default_evolve_step(model.params());
  PaddedMatrix x = PaddedMatrix::from(rho0.matrix());
  PaddedMatrix y(model.dim());
  double residual = 0.0;
  const double chunk = 5.0;
  for (double t = 0.0; t < t_max; t += chunk) {
    rk4_run(model.generator(), x, chunk, dt);
    model.generator().apply_hermitian(x, y);
    residual = y.to_matrix().cwiseAbs().maxCoeff();
    if (residual <= SteadyState::kResidualTol) break;
  }
  auto rho = DensityMatrix::trusted(model.space(), hermitize(x.to_matrix()));
  return {rho, drift_residual(model, rho), SteadyStateMethod::kLongTime};
}

}  // namespace

Matrix Liouvillian::apply(const Matrix& rho) const {
  const int d = space.dim();
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
  Eigen::VectorXcd out = matrix * v;
  return Eigen::Map<Matrix>(out.data(), d, d);
}

Liouvillian build_liouvillian(const ModelParams& params) {
  const ModelParams p = params.resolved();
  p.validate();
  const FockSpace space(p.dim);
  const int d = p.dim;
  const Matrix a = annihilation(space).matrix();
  const Matrix ad = a.adjoint();
  const Matrix H = hamiltonian(p).matrix();
  SparseMatrix id(d, d);
  id.setIdentity();

  std::vector<Triplet> triplets;
  // -i (H X - X H)
  add_kron(triplets, id, sparse_of(H), Complex(0.0, -1.0));
  add_kron(triplets, sparse_of(H.transpose()), id, Complex(0.0, 1.0));
  add_dissipator(triplets, id, ad, p.gamma1);
  add_dissipator(triplets, id, a * a, p.gamma2);
  add_dissipator(triplets, id, a, p.gamma3);

  SparseMatrix L(d * d, d * d);
  L.setFromTriplets(triplets.begin(), triplets.end());
  L.prune(Complex(0.0), 0.0);
  return {space, std::move(L)};
}

double drift_residual(const Model& model, const DensityMatrix& rho) {
  return drift(model, rho).max_abs();
}

SteadyState steady_state(const ModelParams& p) { return steady_state(Model(p)); }

SteadyState steady_state(const Model& model) {
  const int d = model.dim();
  const Liouvillian L = build_liouvillian(model.params());

  // Replace the rho(0,0) equation by the trace condition. The diagonal rows
  // of L are linearly dependent (trace preservation), so the bordered system
  // is regular exactly when the null space is one-dimensional.
  SparseMatrix A = L.matrix;
  A.prune([](Eigen::Index row, Eigen::Index, const Complex&) {
    return row != 0;
  });
  std::vector<Triplet> trace_row;
  for (int k = 0; k < d; ++k) trace_row.emplace_back(0, k * (d + 1), 1.0);
  SparseMatrix T(d * d, d * d);
  T.setFromTriplets(trace_row.begin(), trace_row.end());
  A += T;
  A.makeCompressed();

  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() == Eigen::Success) {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d * d);
    rhs(0) = 1.0;
    Eigen::VectorXcd v = lu.solve(rhs);
    // one step of iterative refinement
    Eigen::VectorXcd r = rhs - A * v;
    v += lu.solve(r);
    if (lu.info() == Eigen::Success && v.allFinite()) {
      Matrix rho = Eigen::Map<Matrix>(v.data(), d, d);
      auto state = DensityMatrix::trusted(model.space(), hermitize(rho));
      const double residual = drift_residual(model, state);
      if (residual <= SteadyState::kResidualTol) {
        return {state, residual, SteadyStateMethod::kNullSpace};
      }
    }
  }

  // Direct solve singular or inaccurate: relax two distinct initial states.
  // Disagreement means the invariant state is not unique.
  const double t_max = 2000.0 / model.params().gamma1;
  SteadyState from_mixed =
      relax(model, DensityMatrix::maximally_mixed(model.space()), t_max);
  if (from_mixed.residual > SteadyState::kResidualTol) {
    throw ConvergenceError("steady_state: no convergence, residual " +
                               std::to_string(from_mixed.residual),
                           from_mixed.residual);
  }
  SteadyState from_vacuum =
      relax(model, DensityMatrix::fock(model.space(), 0), t_max);
  const double gap =
      (from_mixed.rho.matrix() - from_vacuum.rho.matrix()).cwiseAbs().maxCoeff();
  if (gap > 1e-6) {
    throw ConvergenceError(
        "steady_state: degenerate null space (distinct stationary states)",
        from_mixed.residual);
  }
  return from_mixed;
}

TruncatedSteadyState adaptive_steady_state(const ModelParams& p) {
  const bool pinned = p.dim != 0;
  ModelParams q = p.resolved();
  std::vector<std::string> warnings = q.validate();
  for (int escalation = 0;; ++escalation) {
    SteadyState ss = steady_state(Model(q));
    const double tail =
        fock_tail_population(ss.rho, TruncatedSteadyState::kTailLevels);
    const bool ok = tail < TruncatedSteadyState::kTailTol;
    if (ok || pinned || escalation == TruncatedSteadyState::kMaxEscalations) {
      if (!ok) {
        warnings.push_back("Fock tail population " + std::to_string(tail) +
                           " at dim " + std::to_string(q.dim) +
                           " exceeds tolerance");
      }
      return {q, std::move(ss), tail, std::move(warnings)};
    }
    q.dim = escalate_dimension(q.dim);
  }
}

double default_evolve_step(const ModelParams& p) {
  const double scale = std::max({1.0, p.gamma2, p.gamma3, p.E,
                                 std::abs(p.delta), p.eta});
  return 1e-3 / scale;
}

DensityMatrix evolve(const ModelParams& p, const DensityMatrix& rho0, double T,
                     double dt) {
  ModelParams q = p;
  if (q.dim == 0) q.dim = rho0.dim();
  return evolve(Model(q), rho0, T, dt);
}

DensityMatrix evolve(const Model& model, const DensityMatrix& rho0, double T,
                     double dt) {
  require_same_space(model.space(), rho0.space(), "evolve");
  if (!(T > 0.0)) throw InvalidArgument("evolve: T must be > 0");
  if (dt == 0.0) dt = default_evolve_step(model.params());
  if (!(dt > 0.0)) throw InvalidArgument("evolve: dt must be > 0");
  PaddedMatrix x = PaddedMatrix::from(rho0.matrix());
  rk4_run(model.generator(), x, T, dt);
  return DensityMatrix::trusted(model.space(), x.to_matrix());
}

}  // namespace qsync
