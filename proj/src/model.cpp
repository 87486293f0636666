#include "strobo/model.hpp"

#include <cmath>
#include <sstream>

#include "strobo/errors.hpp"

namespace strobo {

std::string toString(Boundary b) { return b == Boundary::Ring ? "ring" : "chain"; }

std::string toString(StepOrder o) {
  return o == StepOrder::FieldThenIsing ? "field-first" : "ising-first";
}

std::string toString(Parameter p) { return p == Parameter::Hx ? "hx" : "J"; }

Boundary parseBoundary(const std::string& s) {
  if (s == "ring") return Boundary::Ring;
  if (s == "chain") return Boundary::Chain;
  throw ConfigError("unknown boundary '" + s + "' (expected ring|chain)");
}

StepOrder parseStepOrder(const std::string& s) {
  if (s == "field-first") return StepOrder::FieldThenIsing;
  if (s == "ising-first") return StepOrder::IsingThenField;
  throw ConfigError("unknown step order '" + s + "' (expected field-first|ising-first)");
}

Parameter parseParameter(const std::string& s) {
  if (s == "hx" || s == "h" || s == "Hx") return Parameter::Hx;
  if (s == "J" || s == "j") return Parameter::J;
  throw ConfigError("unknown parameter '" + s + "' (expected hx|J)");
}

DriveProtocol DriveProtocol::fromFraction(double period, double field_fraction, StepOrder order) {
  DriveProtocol p;
  p.period = period;
  p.field_duration = field_fraction * period;
  p.ising_duration = period - p.field_duration;
  p.order = order;
  p.validate();
  return p;
}

void DriveProtocol::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("drive period must be > 0");
  if (!(field_duration > 0.0) || !(ising_duration > 0.0)) {
    throw ConfigError("drive step durations T1, T2 must both be > 0");
  }
  if (std::abs(field_duration + ising_duration - period) > 1e-12 * period) {
    throw ConfigError("drive step durations must satisfy T1 + T2 = T");
  }
}

std::vector<Bond> bondsFor(int n_qubits, Boundary boundary) {
  std::vector<Bond> bonds;
  for (int i = 1; i < n_qubits; ++i) bonds.push_back({i, i + 1});
  if (boundary == Boundary::Ring && n_qubits >= 3) bonds.push_back({n_qubits, 1});
  return bonds;
}

Boundary defaultBoundary(int n_qubits) {
  return n_qubits == 3 ? Boundary::Ring : Boundary::Chain;
}

ModelSpec ModelSpec::dimensionless(int n_qubits, double hxT, double JT, DriveProtocol protocol,
                                   std::optional<Boundary> boundary) {
  ModelSpec spec;
  spec.n_qubits = n_qubits;
  spec.protocol = protocol;
  spec.h_x = hxT / protocol.period;
  spec.couplings = UniformCoupling{JT / protocol.period};
  spec.boundary = boundary.value_or(defaultBoundary(n_qubits));
  spec.validate();
  return spec;
}

void ModelSpec::validate() const {
  checkQubitCount(n_qubits);
  protocol.validate();
  if (!std::isfinite(h_x)) throw ConfigError("h_x must be finite");
  if (boundary == Boundary::Ring && n_qubits == 2) {
    throw ConfigError("ring boundary needs at least 3 qubits (N=2 would double the bond)");
  }
  if (const auto* per_bond = std::get_if<PerBondCoupling>(&couplings)) {
    const auto expected = bonds().size();
    if (per_bond->J.size() != expected) {
      std::ostringstream msg;
      msg << "per-bond couplings: " << toString(boundary) << " of " << n_qubits
          << " qubits needs " << expected << " values, got " << per_bond->J.size();
      throw ConfigError(msg.str());
    }
    for (double j : per_bond->J) {
      if (!std::isfinite(j)) throw ConfigError("couplings must be finite");
    }
  } else if (!std::isfinite(std::get<UniformCoupling>(couplings).J)) {
    throw ConfigError("coupling J must be finite");
  }
}

std::vector<double> ModelSpec::bondCouplings() const {
  const auto b = bonds();
  if (const auto* uniform = std::get_if<UniformCoupling>(&couplings)) {
    return std::vector<double>(b.size(), uniform->J);
  }
  return std::get<PerBondCoupling>(couplings).J;
}

double ModelSpec::parameter(Parameter p) const {
  if (p == Parameter::Hx) return h_x;
  if (!hasUniformCouplings()) throw ConfigError("parameter J requires uniform couplings");
  return std::get<UniformCoupling>(couplings).J;
}

ModelSpec ModelSpec::withParameter(Parameter p, double value) const {
  ModelSpec copy = *this;
  if (p == Parameter::Hx) {
    copy.h_x = value;
  } else {
    if (!hasUniformCouplings()) throw ConfigError("parameter J requires uniform couplings");
    copy.couplings = UniformCoupling{value};
  }
  return copy;
}

Eigen::VectorXd bondSumDiagonal(int n_qubits, const std::vector<Bond>& bonds) {
  const auto dim = static_cast<Eigen::Index>(hilbertDimension(n_qubits));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto idx = static_cast<std::uint64_t>(s);
    double sum = 0.0;
    for (const auto& b : bonds) {
      sum += spinZ(idx, n_qubits, b.first) * spinZ(idx, n_qubits, b.second);
    }
    diag(s) = sum;
  }
  return diag;
}

Eigen::VectorXd isingEnergies(const ModelSpec& spec) {
  const auto bonds = spec.bonds();
  const auto couplings = spec.bondCouplings();
  const auto dim = static_cast<Eigen::Index>(hilbertDimension(spec.n_qubits));
  Eigen::VectorXd energy = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto idx = static_cast<std::uint64_t>(s);
    double e = 0.0;
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      e += couplings[k] * spinZ(idx, spec.n_qubits, bonds[k].first) *
           spinZ(idx, spec.n_qubits, bonds[k].second);
    }
    energy(s) = e;
  }
  return energy;
}

DerivativeGenerator DerivativeGenerator::forParameter(const ModelSpec& spec, Parameter target) {
  if (target == Parameter::J && !spec.hasUniformCouplings()) {
    throw ConfigError("derivative with respect to J requires uniform couplings");
  }
  return {target, target == Parameter::Hx ? spec.protocol.field_duration
                                          : spec.protocol.ising_duration};
}

}  // namespace strobo
