#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "strobo/model.hpp"
#include "strobo/state.hpp"

namespace strobo {

enum class ObservableKind { Mz, Czz, Custom };

std::string toString(ObservableKind k);
ObservableKind parseObservable(const std::string& s);

/// Observable diagonal in the computational basis, stored as its diagonal.
struct DiagonalObservable {
  ObservableKind kind = ObservableKind::Custom;
  std::string label;
  Eigen::VectorXd diag;

  double normBound() const { return diag.cwiseAbs().maxCoeff(); }
};

/// M_z = sum_i sigma_z^i; diagonal entry N - 2 popcount(s).
DiagonalObservable magnetizationZ(int n_qubits);

/// Nearest-neighbour pairs (1,2), (2,3), ..., (N-1,N). For N = 3 this is
/// the open pair list {(1,2), (2,3)} even when the model itself is a ring.
std::vector<Bond> correlationPairs(int n_qubits);

/// C_zz = sum over `pairs` of sigma_z^i sigma_z^j.
DiagonalObservable pairCorrelationZZ(int n_qubits, const std::vector<Bond>& pairs);
inline DiagonalObservable pairCorrelationZZ(int n_qubits) {
  return pairCorrelationZZ(n_qubits, correlationPairs(n_qubits));
}

DiagonalObservable observableFor(ObservableKind kind, int n_qubits);

template <typename StateDerived>
double expectation(const Eigen::MatrixBase<StateDerived>& psi, const DiagonalObservable& obs) {
  return expectation(psi, obs.diag);
}

/// Stroboscopic record: values[k] is the expectation at t = periods[k] * T.
struct TimeSeries {
  std::vector<int> periods;
  Eigen::VectorXd values;
  ModelSpec spec;
  std::string label;

  Eigen::Index size() const { return values.size(); }
};

/// Analysis window defaults: first 50 periods discarded as transient,
/// 16 samples analysed (f = 1/2T falls on bin M/2 for any even M).
inline constexpr int kDefaultTransient = 50;
inline constexpr int kDefaultSpectrumSamples = 16;
inline constexpr int kDefaultHorizon = 200;

/// <psi_n|O|psi_n> for n = 0..n_max with psi_n = U_F^n psi0, one series per
/// observable. The state is advanced by repeated application of U_F.
std::vector<TimeSeries> stroboscopicTrajectory(const ModelSpec& spec, const StateVectorXcd& psi0,
                                               int n_max,
                                               std::span<const DiagonalObservable> observables);

TimeSeries magnetizationSeries(const ModelSpec& spec, const StateVectorXcd& psi0, int n_max);
TimeSeries pairCorrelationSeries(const ModelSpec& spec, const StateVectorXcd& psi0, int n_max);

}  // namespace strobo
