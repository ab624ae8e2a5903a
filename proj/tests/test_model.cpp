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

#include "doctest.h"
#include "oracle.hpp"
#include "qsync/errors.hpp"
#include "qsync/generator.hpp"
#include "qsync/model.hpp"

using namespace qsync;

namespace {

oracle::Params to_oracle(const ModelParams& p) {
  oracle::Params o;
  o.delta = p.delta;
  o.E = p.E;
  o.eta = p.eta;
  o.phi = p.phi;
  o.g1 = p.gamma1;
  o.g2 = p.gamma2;
  o.g3 = p.gamma3;
  o.eta_d = p.eta_d;
  o.theta = p.theta;
  return o;
}

ModelParams random_params(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.delta = u(rng) - 0.5;
  p.E = u(rng);
  p.eta = 0.1 * u(rng);
  p.phi = 6.0 * u(rng);
  p.gamma1 = 0.5 + u(rng);
  p.gamma2 = 0.05 + 3.0 * u(rng);
  p.gamma3 = u(rng);
  p.eta_d = u(rng);
  p.theta = 6.0 * u(rng);
  p.dim = dim;
  return p;
}

DensityMatrix random_rho(std::mt19937_64& rng, int d) {
  return DensityMatrix(FockSpace(d), oracle::random_density(d, rng));
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("hamiltonian examples") {
  ModelParams p;
  p.dim = 4;
  CHECK(hamiltonian(p).max_abs() == 0.0);

  p.dim = 2;
  p.E = 1.0;
  const Operator h = hamiltonian(p);
  CHECK(h(0, 1) == Complex(0.0, 1.0));
  CHECK(h(1, 0) == Complex(0.0, -1.0));
  CHECK(h(0, 0) == Complex(0.0));
  CHECK(h(1, 1) == Complex(0.0));

  ModelParams q;
  q.dim = 3;
  q.eta = 0.1;
  const Operator s = hamiltonian(q);
  CHECK(std::abs(s(2, 0) - Complex(0.0, 0.1 * std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(s(0, 2) - Complex(0.0, -0.1 * std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(s(1, 1)) == 0.0);
}

TEST_CASE("hamiltonian is Hermitian and matches the oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelParams p = random_params(rng, 2 + trial % 15);
    const Matrix h = hamiltonian(p).matrix();
    CHECK(oracle::max_abs(h - h.adjoint()) < 1e-12);
    CHECK(oracle::max_abs(h - oracle::hamiltonian(to_oracle(p), p.dim)) < 1e-12);
  }
}

TEST_CASE("dissipator examples") {
  const FockSpace s(4);
  const Operator a = annihilation(s);
  CHECK(dissipator(a, DensityMatrix::fock(s, 0)).max_abs() == 0.0);
  const Matrix d1 = dissipator(a, DensityMatrix::fock(s, 1)).matrix();
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  CHECK(oracle::max_abs(d1 - expect) < 1e-15);
  CHECK_THROWS_AS(dissipator(annihilation(FockSpace(3)), DensityMatrix::fock(s, 1)),
                  DimensionMismatch);
}

TEST_CASE("measurement superoperator examples") {
  const FockSpace s(4);
  const Operator a = annihilation(s);
  for (double theta : {0.0, 0.4, 2.0}) {
    const Operator L = std::polar(1.0, -theta) * a;
    CHECK(measurement_superop(L, DensityMatrix::fock(s, 0)).max_abs() < 1e-15);
  }
  const Matrix h1 = measurement_superop(a, DensityMatrix::fock(s, 1)).matrix();
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 1) = 1.0;
  expect(1, 0) = 1.0;
  CHECK(oracle::max_abs(h1 - expect) < 1e-15);
}

TEST_CASE("superoperators are traceless and Hermitian-preserving") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 10;
    const DensityMatrix rho = random_rho(rng, d);
    const Operator L(FockSpace(d), oracle::random_matrix(d, rng));
    for (const Matrix& m : {dissipator(L, rho).matrix(),
                            measurement_superop(L, rho).matrix()}) {
      CHECK(std::abs(m.trace()) < 1e-10);
      CHECK(oracle::max_abs(m - m.adjoint()) < 1e-10);
    }
    CHECK(oracle::max_abs(dissipator(L, rho).matrix() -
                          oracle::D(L.matrix(), rho.matrix())) < 1e-12);
    CHECK(oracle::max_abs(measurement_superop(L, rho).matrix() -
                          oracle::Hmeas(L.matrix(), rho.matrix())) < 1e-12);
  }
}

TEST_CASE("measurement superoperator ignores real trace shifts") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 3 + trial % 6;
    const DensityMatrix rho = random_rho(rng, d);
    const Operator L(FockSpace(d), oracle::random_matrix(d, rng));
    const double c = u(rng);
    const Operator shifted = L + Complex(c) * Operator::identity(FockSpace(d));
    CHECK((measurement_superop(shifted, rho) - measurement_superop(L, rho)).max_abs() <
          1e-12);
  }
}

TEST_CASE("drift agrees with the dense oracle") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const ModelParams p = random_params(rng, 2 + trial % 14);
    const DensityMatrix rho = random_rho(rng, p.dim);
    const Matrix got = drift(p, rho).matrix();
    CHECK(oracle::max_abs(got - oracle::drift(to_oracle(p), rho.matrix())) < 1e-12);
    CHECK(std::abs(got.trace()) < 1e-10);
    CHECK(oracle::max_abs(got - got.adjoint()) < 1e-10);
  }
}

TEST_CASE("banded generator on non-Hermitian input") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p = random_params(rng, 2 + trial % 12);
    const Model m(p);
    const Matrix x = oracle::random_matrix(p.dim, rng);
    PaddedMatrix in = PaddedMatrix::from(x), out(p.dim);
    m.generator().apply(in, out);
    CHECK(oracle::max_abs(out.to_matrix() - oracle::drift(to_oracle(p), x)) < 1e-12);
  }
}

TEST_CASE("gain-only drift at dim 2 by hand") {
  // D[a'](I/2) with a' = |1><0|: a' rho a = |1><1|/2, a a' = |0><0|, so
  // the anticommutator term is -|0><0|/2.
  ModelParams p;
  p.gamma2 = 1e-300;  // effectively off; must stay > 0
  p.dim = 2;
  const Matrix got = drift(p, DensityMatrix::maximally_mixed(FockSpace(2))).matrix();
  Matrix expect = Matrix::Zero(2, 2);
  expect(1, 1) = 0.5;
  expect(0, 0) = -0.5;
  CHECK(oracle::max_abs(got - expect) < 1e-15);
}

TEST_CASE("model bundle") {
  ModelParams p;
  p.gamma2 = 0.5;
  p.gamma3 = 0.3;
  p.eta_d = 0.5;
  p.theta = 0.9;
  const Model m(p);
  CHECK(m.dim() == default_dimension(1.0, 0.5));
  CHECK(m.measurement_strength() == doctest::Approx(std::sqrt(0.15)));
  CHECK((m.measurement_operator() - std::polar(1.0, -0.9) * m.a()).max_abs() < 1e-15);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK(p.validate().empty());
  p.eta = 0.2;
  CHECK(p.validate().size() == 1);  // soft limit only warns
  ModelParams bad;
  bad.gamma2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = ModelParams{};
  bad.eta_d = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = ModelParams{};
  bad.E = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = ModelParams{};
  bad.dim = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = ModelParams{};
  bad.delta = std::nan("");
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

}  // TEST_SUITE
