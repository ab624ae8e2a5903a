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

#include "qsync/model.hpp"

#include <cmath>
#include <sstream>

namespace qsync {
namespace {

const Complex kI(0.0, 1.0);

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string("ModelParams: ") + name +
                          " must be finite");
  }
}

GeneratorRates rates_of(const ModelParams& p) {
  GeneratorRates r;
  r.delta = p.delta;
  r.E = p.E;
  r.eta = p.eta;
  r.phi = p.phi;
  r.gamma1 = p.gamma1;
  r.gamma2 = p.gamma2;
  r.gamma3 = p.gamma3;
  r.theta = p.theta;
  r.measurement_strength = std::sqrt(p.eta_d * p.gamma3);
  return r;
}

}  // namespace

std::vector<std::string> ModelParams::validate() const {
  require_finite(delta, "delta");
  require_finite(E, "E");
  require_finite(eta, "eta");
  require_finite(phi, "phi");
  require_finite(gamma1, "gamma1");
  require_finite(gamma2, "gamma2");
  require_finite(gamma3, "gamma3");
  require_finite(eta_d, "eta_d");
  require_finite(theta, "theta");
  if (E < 0.0) throw InvalidArgument("ModelParams: E must be >= 0");
  if (eta < 0.0) throw InvalidArgument("ModelParams: eta must be >= 0");
  if (gamma1 <= 0.0) throw InvalidArgument("ModelParams: gamma1 must be > 0");
  if (gamma2 <= 0.0) throw InvalidArgument("ModelParams: gamma2 must be > 0");
  if (gamma3 < 0.0) throw InvalidArgument("ModelParams: gamma3 must be >= 0");
  if (eta_d < 0.0 || eta_d > 1.0) {
    throw InvalidArgument("ModelParams: eta_d must lie in [0, 1]");
  }
  if (dim < 0 || dim == 1) {
    throw InvalidArgument("ModelParams: dim must be >= 2 (or 0 for auto)");
  }
  std::vector<std::string> warnings;
  if (eta > kSqueezingSoftLimit) {
    std::ostringstream os;
    os << "squeezing eta = " << eta << " exceeds " << kSqueezingSoftLimit
       << "; phase coherence may not capture synchronization";
    warnings.push_back(os.str());
  }
  return warnings;
}

ModelParams ModelParams::resolved() const {
  ModelParams out = *this;
  if (out.dim == 0) out.dim = default_dimension(gamma1, gamma2);
  return out;
}

Operator hamiltonian(const ModelParams& params) {
  const ModelParams p = params.resolved();
  const FockSpace space(p.dim);
  const Operator a = annihilation(space);
  const Operator ad = dagger(a);
  const Operator a2 = a * a;
  const Operator ad2 = ad * ad;
  return Complex(-p.delta) * (ad * a) + kI * p.E * (a - ad) +
         kI * p.eta *
             (std::polar(1.0, 2.0 * p.phi) * ad2 -
              std::polar(1.0, -2.0 * p.phi) * a2);
}

Operator dissipator(const Operator& L, const DensityMatrix& rho) {
  require_same_space(L.space(), rho.space(), "dissipator");
  const Matrix& l = L.matrix();
  const Matrix& r = rho.matrix();
  const Matrix ldl = l.adjoint() * l;
  return Operator(L.space(),
                  l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl));
}

Operator measurement_superop(const Operator& L, const DensityMatrix& rho) {
  require_same_space(L.space(), rho.space(), "measurement_superop");
  const Matrix& l = L.matrix();
  const Matrix& r = rho.matrix();
  const Complex tr = ((l + l.adjoint()) * r).trace();
  return Operator(L.space(), l * r + r * l.adjoint() - tr * r);
}

Model::Model(const ModelParams& params)
    : params_(params.resolved()),
      space_(params_.dim),
      warnings_(params_.validate()),
      a_(annihilation(space_)),
      a_dag_(dagger(a_)),
      number_(qsync::number(space_)),
      hamiltonian_(qsync::hamiltonian(params_)),
      generator_(params_.dim, rates_of(params_)) {}

Operator Model::measurement_operator() const {
  return std::polar(1.0, -params_.theta) * a_;
}

double Model::measurement_strength() const noexcept {
  return std::sqrt(params_.eta_d * params_.gamma3);
}

Operator drift(const Model& model, const DensityMatrix& rho) {
  require_same_space(model.space(), rho.space(), "drift");
  const PaddedMatrix x = PaddedMatrix::from(rho.matrix());
  PaddedMatrix y(model.dim());
  model.generator().apply(x, y);
  return Operator(model.space(), y.to_matrix());
}

Operator drift(const ModelParams& p, const DensityMatrix& rho) {
  ModelParams q = p;
  if (q.dim == 0) q.dim = rho.dim();
  return drift(Model(q), rho);
}

}  // namespace qsync
