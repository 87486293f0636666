#include "strobo/dynamics.hpp"

#include <bit>

#include "strobo/errors.hpp"
#include "strobo/floquet.hpp"

namespace strobo {

std::string toString(ObservableKind k) {
  switch (k) {
    case ObservableKind::Mz: return "mz";
    case ObservableKind::Czz: return "czz";
    case ObservableKind::Custom: return "custom";
  }
  return "custom";
}

ObservableKind parseObservable(const std::string& s) {
  if (s == "mz" || s == "Mz") return ObservableKind::Mz;
  if (s == "czz" || s == "Czz") return ObservableKind::Czz;
  throw ConfigError("unknown observable '" + s + "' (expected mz|czz)");
}

DiagonalObservable magnetizationZ(int n_qubits) {
  const auto dim = hilbertDimension(n_qubits);
  DiagonalObservable obs{ObservableKind::Mz, "mz", Eigen::VectorXd(static_cast<Eigen::Index>(dim))};
  for (std::uint64_t s = 0; s < dim; ++s) {
    obs.diag(static_cast<Eigen::Index>(s)) = n_qubits - 2 * std::popcount(s);
  }
  return obs;
}

std::vector<Bond> correlationPairs(int n_qubits) { return bondsFor(n_qubits, Boundary::Chain); }

DiagonalObservable pairCorrelationZZ(int n_qubits, const std::vector<Bond>& pairs) {
  for (const auto& p : pairs) {
    if (p.first < 1 || p.first > n_qubits || p.second < 1 || p.second > n_qubits ||
        p.first == p.second) {
      throw ConfigError("correlation pair out of range");
    }
  }
  return {ObservableKind::Czz, "czz", bondSumDiagonal(n_qubits, pairs)};
}

DiagonalObservable observableFor(ObservableKind kind, int n_qubits) {
  switch (kind) {
    case ObservableKind::Mz: return magnetizationZ(n_qubits);
    case ObservableKind::Czz: return pairCorrelationZZ(n_qubits);
    case ObservableKind::Custom: break;
  }
  throw ConfigError("custom observables must be supplied explicitly");
}

std::vector<TimeSeries> stroboscopicTrajectory(const ModelSpec& spec, const StateVectorXcd& psi0,
                                               int n_max,
                                               std::span<const DiagonalObservable> observables) {
  if (n_max < 1) throw SizeError("trajectory needs n_max >= 1");
  const FloquetOperatord u(spec);
  if (psi0.size() != u.dimension()) throw SizeError("initial state does not match model size");

  std::vector<TimeSeries> out;
  out.reserve(observables.size());
  for (const auto& obs : observables) {
    if (obs.diag.size() != u.dimension()) throw SizeError("observable does not match model size");
    TimeSeries ts;
    ts.spec = spec;
    ts.label = obs.label;
    ts.periods.resize(static_cast<std::size_t>(n_max) + 1);
    ts.values.resize(n_max + 1);
    out.push_back(std::move(ts));
  }

  StateVectorXcd psi = psi0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) u.applyInPlace(psi);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      out[k].periods[static_cast<std::size_t>(n)] = n;
      out[k].values(n) = expectation(psi, observables[k].diag);
    }
  }
  return out;
}

TimeSeries magnetizationSeries(const ModelSpec& spec, const StateVectorXcd& psi0, int n_max) {
  const DiagonalObservable obs[] = {magnetizationZ(spec.n_qubits)};
  return std::move(stroboscopicTrajectory(spec, psi0, n_max, obs).front());
}

TimeSeries pairCorrelationSeries(const ModelSpec& spec, const StateVectorXcd& psi0, int n_max) {
  const DiagonalObservable obs[] = {pairCorrelationZZ(spec.n_qubits)};
  return std::move(stroboscopicTrajectory(spec, psi0, n_max, obs).front());
}

}  // namespace strobo
