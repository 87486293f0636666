#include "strobo/metrology.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "strobo/errors.hpp"

namespace strobo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pureStateQfi(const StateVectorXcd& psi, const StateVectorXcd& dpsi) {
  // Projecting out psi before taking the norm avoids the cancellation in
  // <dpsi|dpsi> - |<psi|dpsi>|^2 when dpsi is nearly parallel to psi.
  return 4.0 * (dpsi - psi.dot(dpsi) * psi).squaredNorm();
}

FisherSeries emptySeries(FisherKind kind, Parameter target, double period, int n_max) {
  FisherSeries s;
  s.kind = kind;
  s.target = target;
  s.period = period;
  s.periods.resize(static_cast<std::size_t>(n_max) + 1);
  s.values.resize(n_max + 1);
  s.flags.assign(static_cast<std::size_t>(n_max) + 1, PointFlag::Ok);
  return s;
}

void requireNormalized(const StateVectorXcd& psi0) {
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
    throw ConfigError("metrology: initial state is not normalized");
  }
}

}  // namespace

std::string toString(PointFlag f) {
  switch (f) {
    case PointFlag::Ok: return "ok";
    case PointFlag::Undefined: return "undefined";
    case PointFlag::Divergent: return "divergent";
  }
  return "undefined";
}

void propagateWithDerivative(const FloquetOperatord& u, Parameter target,
                             const StateVectorXcd& psi0, int n_max, const DerivativeVisitor& visit) {
  if (n_max < 0) throw SizeError("metrology: n_max must be >= 0");
  if (psi0.size() != u.dimension()) throw SizeError("metrology: initial state does not match model");
  const auto generator = DerivativeGenerator::forParameter(u.spec(), target);

  StateVectorXcd psi = psi0;
  StateVectorXcd dpsi = StateVectorXcd::Zero(psi0.size());
  visit(0, psi, dpsi);
  for (int n = 1; n <= n_max; ++n) {
    StateVectorXcd source = u.derivative(generator, psi);
    u.applyInPlace(dpsi);
    dpsi += source;
    u.applyInPlace(psi);
    visit(n, psi, dpsi);
  }
}

std::vector<DerivativeState> evolveWithDerivative(const ModelSpec& spec, Parameter target,
                                                  const StateVectorXcd& psi0, int n_max) {
  requireNormalized(psi0);
  const FloquetOperatord u(spec);
  std::vector<DerivativeState> states;
  states.reserve(static_cast<std::size_t>(n_max) + 1);
  propagateWithDerivative(u, target, psi0, n_max,
                          [&](int n, const StateVectorXcd& psi, const StateVectorXcd& dpsi) {
                            states.push_back({psi, dpsi, target, n});
                          });
  return states;
}

FisherSeries qfiSeries(std::span<const DerivativeState> states, double period) {
  if (states.empty()) throw SizeError("qfiSeries: no states");
  auto out = emptySeries(FisherKind::Quantum, states.front().target, period,
                         static_cast<int>(states.size()) - 1);
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.periods[k] = states[k].period_index;
    out.values(static_cast<Eigen::Index>(k)) = pureStateQfi(states[k].psi, states[k].dpsi);
  }
  return out;
}

FisherSeries qfiSeries(const ModelSpec& spec, Parameter target, const StateVectorXcd& psi0,
                       int n_max) {
  requireNormalized(psi0);
  const FloquetOperatord u(spec);
  auto out = emptySeries(FisherKind::Quantum, target, spec.protocol.period, n_max);
  propagateWithDerivative(u, target, psi0, n_max,
                          [&](int n, const StateVectorXcd& psi, const StateVectorXcd& dpsi) {
                            out.periods[static_cast<std::size_t>(n)] = n;
                            out.values(n) = pureStateQfi(psi, dpsi);
                          });
  return out;
}

double qfiFiniteDifferenceOracle(const ModelSpec& spec, Parameter target,
                                 const StateVectorXcd& psi0, int n, double delta) {
  if (!(delta >= 1e-7 && delta <= 1e-3)) {
    throw ConfigError("qfiFiniteDifferenceOracle: delta must lie in [1e-7, 1e-3]");
  }
  if (n < 0) throw SizeError("qfiFiniteDifferenceOracle: n must be >= 0");
  const double theta = spec.parameter(target);
  const FloquetOperatord u0(spec);
  const FloquetOperatord u1(spec.withParameter(target, theta + delta));
  StateVectorXcd a = psi0;
  StateVectorXcd b = psi0;
  for (int k = 0; k < n; ++k) {
    u0.applyInPlace(a);
    u1.applyInPlace(b);
  }
  const double fidelity = std::abs(a.dot(b));
  return 8.0 * (1.0 - fidelity) / (delta * delta);
}

FisherSeries cfiSeries(const ModelSpec& spec, Parameter target, const DiagonalObservable& observable,
                       const StateVectorXcd& psi0, int n_max, DerivativeMode mode, double fd_step) {
  requireNormalized(psi0);
  const FloquetOperatord u(spec);
  if (observable.diag.size() != u.dimension()) {
    throw SizeError("cfiSeries: observable does not match model size");
  }
  auto out = emptySeries(FisherKind::Classical, target, spec.protocol.period, n_max);
  out.observable = observable.kind;

  Eigen::VectorXd slopes(n_max + 1);
  Eigen::VectorXd variances(n_max + 1);
  if (mode == DerivativeMode::Exact) {
    propagateWithDerivative(u, target, psi0, n_max,
                            [&](int n, const StateVectorXcd& psi, const StateVectorXcd& dpsi) {
                              slopes(n) = 2.0 * diagonalMatrixElement(dpsi, observable.diag, psi).real();
                              variances(n) = variance(psi, observable.diag);
                            });
  } else {
    if (!(fd_step > 0.0)) throw ConfigError("cfiSeries: finite-difference step must be > 0");
    const double theta = spec.parameter(target);
    const DiagonalObservable obs[] = {observable};
    const auto plus =
        stroboscopicTrajectory(spec.withParameter(target, theta + fd_step), psi0, std::max(n_max, 1), obs);
    const auto minus =
        stroboscopicTrajectory(spec.withParameter(target, theta - fd_step), psi0, std::max(n_max, 1), obs);
    slopes = (plus[0].values - minus[0].values).head(n_max + 1) / (2.0 * fd_step);
    StateVectorXcd psi = psi0;
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) u.applyInPlace(psi);
      variances(n) = variance(psi, observable.diag);
    }
  }

  for (int n = 0; n <= n_max; ++n) {
    out.periods[static_cast<std::size_t>(n)] = n;
    if (variances(n) < 1e-12) {
      out.flags[static_cast<std::size_t>(n)] =
          std::abs(slopes(n)) < 1e-9 ? PointFlag::Undefined : PointFlag::Divergent;
      out.values(n) = kNaN;
    } else {
      out.values(n) = slopes(n) * slopes(n) / variances(n);
    }
  }
  return out;
}

CurvatureFit fitQuadratic(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw SizeError("fitQuadratic: length mismatch");
  const auto m = static_cast<Eigen::Index>(times.size());
  if (m < 3) throw SizeError("fitQuadratic: need at least 3 points");

  const Eigen::Map<const Eigen::VectorXd> t(times.data(), m);
  const Eigen::Map<const Eigen::VectorXd> f(values.data(), m);
  // Solve in a centred, scaled variable s = (t - t0) / w for conditioning.
  const double t0 = t.mean();
  const double w = std::max((t.array() - t0).abs().maxCoeff(), 1e-300);
  const Eigen::ArrayXd s = (t.array() - t0) / w;

  Eigen::MatrixXd design(m, 3);
  design.col(0) = (s * s).matrix();
  design.col(1) = s.matrix();
  design.col(2).setOnes();
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(f);

  const double alpha = coef(0) / (w * w);
  const double beta = coef(1) / w;
  const double gamma = coef(2);

  CurvatureFit fit;
  fit.a = 2.0 * alpha;
  fit.b = beta - 2.0 * alpha * t0;
  fit.c = alpha * t0 * t0 - beta * t0 + gamma;
  fit.kappa = fit.a;
  fit.rms_residual = std::sqrt((design * coef - f).squaredNorm() / static_cast<double>(m));
  fit.points = m;
  return fit;
}

CurvatureFit curvatureFit(const FisherSeries& series, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ConfigError("curvatureFit: window fraction must lie in (0, 1]");
  }
  std::vector<Eigen::Index> defined;
  for (Eigen::Index k = 0; k < series.size(); ++k) {
    if (series.defined(k)) defined.push_back(k);
  }
  const auto count = static_cast<std::size_t>(
      std::floor(static_cast<double>(defined.size()) * window_fraction));
  if (count < 8) {
    throw SizeError("curvatureFit: " + std::to_string(count) +
                    " defined points in the window, need at least 8");
  }
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(count);
  values.reserve(count);
  for (std::size_t k = defined.size() - count; k < defined.size(); ++k) {
    times.push_back(series.time(defined[k]));
    values.push_back(series.values(defined[k]));
  }
  auto fit = fitQuadratic(times, values);
  fit.window_first = series.periods[static_cast<std::size_t>(defined[defined.size() - count])];
  fit.window_last = series.periods[static_cast<std::size_t>(defined.back())];
  return fit;
}

}  // namespace strobo
