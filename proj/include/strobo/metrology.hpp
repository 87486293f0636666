#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strobo/dynamics.hpp"
#include "strobo/floquet.hpp"

namespace strobo {

/// psi_n together with its (unnormalized) parameter derivative.
struct DerivativeState {
  StateVectorXcd psi;
  StateVectorXcd dpsi;
  Parameter target = Parameter::Hx;
  int period_index = 0;
};

using DerivativeVisitor =
    std::function<void(int n, const StateVectorXcd& psi, const StateVectorXcd& dpsi)>;

/// psi_{n+1} = U psi_n, dpsi_{n+1} = U dpsi_n + (dU) psi_n, dpsi_0 = 0.
/// Calls `visit` for n = 0..n_max.
void propagateWithDerivative(const FloquetOperatord& u, Parameter target,
                             const StateVectorXcd& psi0, int n_max, const DerivativeVisitor& visit);

std::vector<DerivativeState> evolveWithDerivative(const ModelSpec& spec, Parameter target,
                                                  const StateVectorXcd& psi0, int n_max);

enum class FisherKind { Quantum, Classical };
enum class PointFlag { Ok, Undefined, Divergent };

std::string toString(PointFlag f);

/// Fisher information per stroboscopic period, in units of time^2.
struct FisherSeries {
  FisherKind kind = FisherKind::Quantum;
  Parameter target = Parameter::Hx;
  std::optional<ObservableKind> observable;
  double period = 1.0;
  std::vector<int> periods;
  /// NaN wherever flags[k] != Ok.
  Eigen::VectorXd values;
  std::vector<PointFlag> flags;

  Eigen::Index size() const { return values.size(); }
  bool defined(Eigen::Index k) const { return flags[static_cast<std::size_t>(k)] == PointFlag::Ok; }
  double time(Eigen::Index k) const { return periods[static_cast<std::size_t>(k)] * period; }
};

/// 4 (<dpsi|dpsi> - |<psi|dpsi>|^2) per state, evaluated as
/// 4 ||dpsi - <psi|dpsi> psi||^2 so it is non-negative by construction.
FisherSeries qfiSeries(std::span<const DerivativeState> states, double period = 1.0);

/// Same series without storing the states.
FisherSeries qfiSeries(const ModelSpec& spec, Parameter target, const StateVectorXcd& psi0,
                       int n_max);

/// Fidelity-susceptibility estimate 8 (1 - |<psi_n(theta)|psi_n(theta + delta)>|) / delta^2,
/// accurate to O(delta^2). delta must lie in [1e-7, 1e-3].
double qfiFiniteDifferenceOracle(const ModelSpec& spec, Parameter target,
                                 const StateVectorXcd& psi0, int n, double delta);

enum class DerivativeMode { Exact, CentralDifference };

/// Error-propagation CFI (d<X>/dtheta)^2 / Var(X). With Exact mode the
/// slope is 2 Re <dpsi|X|psi>; CentralDifference uses <X> at theta +- fd_step.
/// Points with Var(X) < 1e-12 are flagged Undefined (slope < 1e-9) or
/// Divergent.
FisherSeries cfiSeries(const ModelSpec& spec, Parameter target, const DiagonalObservable& observable,
                       const StateVectorXcd& psi0, int n_max,
                       DerivativeMode mode = DerivativeMode::Exact, double fd_step = 1e-6);

/// Least-squares F(t) = a t^2 / 2 + b t + c over a tail window.
struct CurvatureFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double kappa = 0.0;
  double rms_residual = 0.0;
  /// First and last period index of the fitted window.
  int window_first = 0;
  int window_last = 0;
  Eigen::Index points = 0;
};

/// Fits the last `window_fraction` of the defined points (floor of the
/// count). Needs at least 8 points in the window.
CurvatureFit curvatureFit(const FisherSeries& series, double window_fraction = 0.5);

/// Plain least-squares quadratic on (t, F) pairs.
CurvatureFit fitQuadratic(std::span<const double> times, std::span<const double> values);

}  // namespace strobo
