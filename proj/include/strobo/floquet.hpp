#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "strobo/errors.hpp"
#include "strobo/model.hpp"
#include "strobo/state.hpp"

namespace strobo {

/// One-period propagator U_F = exp(-i H_z T2) exp(-i H_x T1) (or the
/// reverse product for StepOrder::IsingThenField).
///
/// The field step is applied as N independent single-qubit x rotations by
/// angle h_x*T1 and the Ising step as a diagonal phase, so one application
/// costs O(N 2^N). Immutable after construction.
template <typename Scalar>
class FloquetOperator {
 public:
  using Complex = std::complex<Scalar>;
  using State = StateVector<Scalar>;
  using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using DenseMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  explicit FloquetOperator(ModelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const auto dim = static_cast<Eigen::Index>(hilbertDimension(spec_.n_qubits));
    const Scalar t2 = static_cast<Scalar>(spec_.protocol.ising_duration);
    const auto bonds = spec_.bonds();
    const auto couplings = spec_.bondCouplings();

    ising_phases_.resize(dim);
    bond_sum_.resize(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
      const auto idx = static_cast<std::uint64_t>(s);
      Scalar phase = 0;
      Scalar sum = 0;
      for (std::size_t k = 0; k < bonds.size(); ++k) {
        const int zz = spinZ(idx, spec_.n_qubits, bonds[k].first) *
                       spinZ(idx, spec_.n_qubits, bonds[k].second);
        phase += static_cast<Scalar>(couplings[k]) * zz;
        sum += zz;
      }
      ising_phases_(s) = t2 * phase;
      bond_sum_(s) = sum;
    }
    ising_factors_ = ising_phases_.unaryExpr([](Scalar p) { return std::polar(Scalar(1), -p); });

    field_angle_ = static_cast<Scalar>(spec_.h_x) * static_cast<Scalar>(spec_.protocol.field_duration);
    cos_ = std::cos(field_angle_);
    sin_ = std::sin(field_angle_);
  }

  const ModelSpec& spec() const { return spec_; }
  int numQubits() const { return spec_.n_qubits; }
  Eigen::Index dimension() const { return ising_phases_.size(); }

  /// T2 * sum_b J_b z_i z_j per basis state.
  const RealArray& isingPhases() const { return ising_phases_; }
  /// h_x * T1.
  Scalar fieldAngle() const { return field_angle_; }

  void applyFieldStep(State& psi) const {
    const Complex mix(0, -sin_);
    const auto dim = static_cast<std::uint64_t>(dimension());
    for (int q = 1; q <= numQubits(); ++q) {
      const auto mask = qubitMask(numQubits(), q);
      for (std::uint64_t s = 0; s < dim; ++s) {
        if (s & mask) continue;
        const auto i0 = static_cast<Eigen::Index>(s);
        const auto i1 = static_cast<Eigen::Index>(s | mask);
        const Complex a = psi(i0);
        const Complex b = psi(i1);
        psi(i0) = cos_ * a + mix * b;
        psi(i1) = mix * a + cos_ * b;
      }
    }
  }

  void applyIsingStep(State& psi) const { psi.array() *= ising_factors_; }

  void applyInPlace(State& psi) const {
    checkDimension(psi.size());
    if (spec_.protocol.order == StepOrder::FieldThenIsing) {
      applyFieldStep(psi);
      applyIsingStep(psi);
    } else {
      applyIsingStep(psi);
      applyFieldStep(psi);
    }
  }

  template <typename Derived>
  State apply(const Eigen::MatrixBase<Derived>& psi) const {
    State out = psi;
    applyInPlace(out);
    return out;
  }

  /// (dU_F/dtheta) psi, exact: each step Hamiltonian is linear in its
  /// parameter and commutes with its own derivative.
  template <typename Derived>
  State derivative(const DerivativeGenerator& g, const Eigen::MatrixBase<Derived>& psi) const {
    if (g.target == Parameter::J && !spec_.hasUniformCouplings()) {
      throw ConfigError("derivative with respect to J requires uniform couplings");
    }
    checkDimension(psi.size());
    const Complex factor(0, -static_cast<Scalar>(g.scale));
    State out = psi;
    const bool field_first = spec_.protocol.order == StepOrder::FieldThenIsing;
    if (g.target == Parameter::Hx) {
      if (field_first) {
        applyFieldStep(out);
        out = factor * applyTotalX(out);
        applyIsingStep(out);
      } else {
        applyIsingStep(out);
        applyFieldStep(out);
        out = factor * applyTotalX(out);
      }
    } else {
      if (field_first) {
        applyFieldStep(out);
        applyIsingStep(out);
        out.array() *= factor * bond_sum_.template cast<Complex>();
      } else {
        applyIsingStep(out);
        out.array() *= factor * bond_sum_.template cast<Complex>();
        applyFieldStep(out);
      }
    }
    return out;
  }

  /// sum_i sigma_x^i psi.
  State applyTotalX(const State& psi) const {
    State out = State::Zero(psi.size());
    const auto dim = static_cast<std::uint64_t>(dimension());
    for (int q = 1; q <= numQubits(); ++q) {
      const auto mask = qubitMask(numQubits(), q);
      for (std::uint64_t s = 0; s < dim; ++s) {
        out(static_cast<Eigen::Index>(s)) += psi(static_cast<Eigen::Index>(s ^ mask));
      }
    }
    return out;
  }

  /// Column k is U_F applied to basis state k.
  DenseMatrix dense() const {
    const Eigen::Index dim = dimension();
    DenseMatrix u(dim, dim);
    State column(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      column.setZero();
      column(k) = Complex(1);
      applyInPlace(column);
      u.col(k) = column;
    }
    return u;
  }

 private:
  void checkDimension(Eigen::Index n) const {
    if (n != dimension()) {
      throw SizeError("Floquet operator of dimension " + std::to_string(dimension()) +
                      " applied to state of length " + std::to_string(n));
    }
  }

  ModelSpec spec_;
  RealArray ising_phases_;
  RealArray bond_sum_;
  Eigen::Array<Complex, Eigen::Dynamic, 1> ising_factors_;
  Scalar field_angle_ = 0;
  Scalar cos_ = 1;
  Scalar sin_ = 0;
};

using FloquetOperatord = FloquetOperator<double>;

template <typename Scalar, typename Derived>
StateVector<Scalar> applyFloquet(const FloquetOperator<Scalar>& u,
                                 const Eigen::MatrixBase<Derived>& psi) {
  return u.apply(psi);
}

template <typename Scalar>
auto denseUnitary(const FloquetOperator<Scalar>& u) {
  return u.dense();
}

template <typename Scalar, typename Derived>
StateVector<Scalar> derivativeOfFloquet(const FloquetOperator<Scalar>& u,
                                        const DerivativeGenerator& g,
                                        const Eigen::MatrixBase<Derived>& psi) {
  return u.derivative(g, psi);
}

}  // namespace strobo
