#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "strobo/basis.hpp"

namespace strobo {

enum class Boundary { Ring, Chain };
enum class StepOrder { FieldThenIsing, IsingThenField };

/// Parameter targeted by a derivative, Fisher information or curvature.
enum class Parameter { Hx, J };

std::string toString(Boundary b);
std::string toString(StepOrder o);
std::string toString(Parameter p);
Boundary parseBoundary(const std::string& s);
StepOrder parseStepOrder(const std::string& s);
Parameter parseParameter(const std::string& s);

/// Two-step drive: field pulse for `field_duration`, Ising evolution for
/// `ising_duration`, in the order given by `order`.
struct DriveProtocol {
  double period = 1.0;
  double field_duration = 0.5;
  double ising_duration = 0.5;
  StepOrder order = StepOrder::FieldThenIsing;

  /// T1 = fraction * T, T2 = T - T1.
  static DriveProtocol fromFraction(double period, double field_fraction = 0.5,
                                    StepOrder order = StepOrder::FieldThenIsing);
  void validate() const;
};

struct UniformCoupling {
  double J = 0.0;
};

struct PerBondCoupling {
  std::vector<double> J;
};

using Couplings = std::variant<UniformCoupling, PerBondCoupling>;

/// Pair of 1-based qubit labels.
struct Bond {
  int first = 0;
  int second = 0;
  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Bond list for a boundary: (1,2), (2,3), ..., plus (N,1) for a ring.
std::vector<Bond> bondsFor(int n_qubits, Boundary boundary);

/// Ring for N = 3, chain otherwise.
Boundary defaultBoundary(int n_qubits);

/// Full parameterization of the driven Ising model. Field and couplings are
/// in units of 1/time; the drive period sets the time unit.
struct ModelSpec {
  int n_qubits = 3;
  double h_x = 0.0;
  Couplings couplings = UniformCoupling{};
  Boundary boundary = Boundary::Ring;
  DriveProtocol protocol{};

  /// Builds a model from the dimensionless products h_x*T and J*T.
  static ModelSpec dimensionless(int n_qubits, double hxT, double JT,
                                 DriveProtocol protocol = {},
                                 std::optional<Boundary> boundary = std::nullopt);

  void validate() const;

  std::vector<Bond> bonds() const { return bondsFor(n_qubits, boundary); }
  /// Coupling of each entry of bonds(), in the same order.
  std::vector<double> bondCouplings() const;
  bool hasUniformCouplings() const {
    return std::holds_alternative<UniformCoupling>(couplings);
  }

  double parameter(Parameter p) const;
  /// Copy with h_x or the uniform J replaced.
  ModelSpec withParameter(Parameter p, double value) const;
};

/// sum over bonds of z_i z_j for each basis state.
Eigen::VectorXd bondSumDiagonal(int n_qubits, const std::vector<Bond>& bonds);

/// Eigenvalues of H_z = sum_b J_b z_i z_j in the computational basis.
Eigen::VectorXd isingEnergies(const ModelSpec& spec);

/// dU_F/dtheta generator: the step Hamiltonian's parameter derivative scaled
/// by the duration of the step it appears in.
struct DerivativeGenerator {
  Parameter target = Parameter::Hx;
  double scale = 0.0;

  /// Throws ConfigError for a J target on a model with per-bond couplings.
  static DerivativeGenerator forParameter(const ModelSpec& spec, Parameter target);
};

}  // namespace strobo
