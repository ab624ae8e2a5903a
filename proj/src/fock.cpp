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

#include "qsync/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace qsync {

FockSpace::FockSpace(int dim) : dim_(dim) {
  if (dim < 2) {
    throw InvalidArgument("FockSpace: dim must be >= 2, got " +
                          std::to_string(dim));
  }
}

void require_same_space(const FockSpace& a, const FockSpace& b,
                        const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimension " +
                            std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

Operator::Operator(FockSpace space)
    : space_(space), entries_(Matrix::Zero(space.dim(), space.dim())) {}

Operator::Operator(FockSpace space, Matrix entries)
    : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
    throw DimensionMismatch("Operator: matrix is " +
                            std::to_string(entries_.rows()) + "x" +
                            std::to_string(entries_.cols()) +
                            ", space dim " + std::to_string(space_.dim()));
  }
}

Operator Operator::identity(FockSpace space) {
  return Operator(space, Matrix::Identity(space.dim(), space.dim()));
}

double Operator::max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

Operator Operator::operator+(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator+");
  return Operator(space_, entries_ + rhs.entries_);
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator-");
  return Operator(space_, entries_ - rhs.entries_);
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator*");
  return Operator(space_, entries_ * rhs.entries_);
}

Operator Operator::operator*(Complex scale) const {
  return Operator(space_, entries_ * scale);
}

Operator operator*(Complex scale, const Operator& op) { return op * scale; }

DensityMatrix::DensityMatrix(FockSpace space, Matrix entries, Unchecked)
    : space_(space), entries_(std::move(entries)) {}

DensityMatrix::DensityMatrix(FockSpace space, Matrix entries)
    : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
    throw DimensionMismatch("DensityMatrix: shape does not match space");
  }
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermiticityTol) {
    throw InvalidArgument("DensityMatrix: not Hermitian (deviation " +
                          std::to_string(herm) + ")");
  }
  const double trace_err = std::abs(entries_.trace() - Complex(1.0, 0.0));
  if (trace_err > kTraceTol) {
    throw InvalidArgument("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(trace_err));
  }
}

DensityMatrix DensityMatrix::trusted(FockSpace space, Matrix entries) {
  return DensityMatrix(space, std::move(entries), Unchecked{});
}

DensityMatrix DensityMatrix::fock(FockSpace space, int n) {
  if (n < 0 || n >= space.dim()) {
    throw InvalidArgument("DensityMatrix::fock: level out of range");
  }
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  m(n, n) = 1.0;
  return DensityMatrix(space, std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(FockSpace space) {
  const int d = space.dim();
  return DensityMatrix(space, Matrix::Identity(d, d) / double(d), Unchecked{});
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Operator annihilation(FockSpace space) {
  const int d = space.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(double(n));
  return Operator(space, std::move(m));
}

Operator creation(FockSpace space) { return dagger(annihilation(space)); }

Operator number(FockSpace space) {
  const int d = space.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = double(n);
  return Operator(space, std::move(m));
}

Operator dagger(const Operator& op) {
  return Operator(op.space(), op.matrix().adjoint());
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
  require_same_space(op.space(), rho.space(), "expectation");
  // Tr[A B] = sum_ij A_ij B_ji
  return (op.matrix().array() * rho.matrix().transpose().array()).sum();
}

DensityMatrix coherent_state(Complex alpha, FockSpace space) {
  const int d = space.dim();
  if (std::norm(alpha) > d / 4.0) {
    throw InvalidArgument("coherent_state: |alpha|^2 = " +
                          std::to_string(std::norm(alpha)) +
                          " exceeds dim/4 = " + std::to_string(d / 4.0));
  }
  Eigen::VectorXcd amp(d);
  amp(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < d; ++n) amp(n) = amp(n - 1) * alpha / std::sqrt(double(n));
  amp /= amp.norm();
  return DensityMatrix::trusted(space, amp * amp.adjoint());
}

double fock_tail_population(const DensityMatrix& rho, int k) {
  const int d = rho.dim();
  if (k < 1 || k >= d) {
    throw InvalidArgument("fock_tail_population: k must be in [1, dim)");
  }
  double tail = 0.0;
  for (int n = d - k; n < d; ++n) tail += rho(n, n).real();
  return tail;
}

int default_dimension(double gamma1, double gamma2) {
  if (!(gamma2 > 0.0)) {
    throw InvalidArgument("default_dimension: gamma2 must be > 0");
  }
  const double estimate = std::ceil(8.0 * gamma1 / (2.0 * gamma2));
  return int(std::clamp(estimate, 12.0, 60.0));
}

int escalate_dimension(int dim) {
  return std::max(dim + 1, int(std::ceil(1.25 * dim)));
}

}  // namespace qsync
