#include "strobo/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "strobo/errors.hpp"
#include "strobo/metrology.hpp"
#include "strobo/quasienergy.hpp"
#include "strobo/spectral.hpp"

namespace strobo {

namespace {

void validateAxis(const AxisRange& axis, const char* name) {
  if (axis.count < 2) throw ConfigError(std::string(name) + " axis needs count >= 2");
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
    throw ConfigError(std::string(name) + " axis range must be finite");
  }
}

}  // namespace

void GridSpec::validate() const {
  validateAxis(h, "h");
  validateAxis(j, "J");
  checkQubitCount(n_qubits);
  protocol.validate();
}

ModelSpec GridSpec::modelAt(int i, int k) const {
  return ModelSpec::dimensionless(n_qubits, h.value(i), j.value(k), protocol, resolvedBoundary());
}

std::string toString(Diagnostic d) {
  switch (d) {
    case Diagnostic::SubharmonicWeight: return "weight";
    case Diagnostic::PiPairFraction: return "fpi";
    case Diagnostic::OverlapWeight: return "overlap";
    case Diagnostic::KappaHx: return "kappa-hx";
    case Diagnostic::KappaJ: return "kappa-j";
  }
  return "weight";
}

Diagnostic parseDiagnostic(const std::string& s) {
  if (s == "weight") return Diagnostic::SubharmonicWeight;
  if (s == "fpi") return Diagnostic::PiPairFraction;
  if (s == "overlap") return Diagnostic::OverlapWeight;
  if (s == "kappa-hx") return Diagnostic::KappaHx;
  if (s == "kappa-j" || s == "kappa-J") return Diagnostic::KappaJ;
  throw ConfigError("unknown diagnostic '" + s + "' (expected weight|fpi|overlap|kappa-hx|kappa-j)");
}

bool isBounded(Diagnostic d) {
  return d == Diagnostic::SubharmonicWeight || d == Diagnostic::PiPairFraction ||
         d == Diagnostic::OverlapWeight;
}

double evaluateCell(const ModelSpec& model, Diagnostic diagnostic, const SweepConfig& config) {
  const auto psi0 = allZeroState(model.n_qubits);
  switch (diagnostic) {
    case Diagnostic::SubharmonicWeight: {
      const auto series = magnetizationSeries(model, psi0, config.transient + config.samples);
      return subharmonicWeight(series, config.transient, config.samples).weight;
    }
    case Diagnostic::PiPairFraction:
    case Diagnostic::OverlapWeight: {
      const FloquetOperatord u(model);
      const double tol = config.pair_tolerance_fraction * std::numbers::pi / model.protocol.period;
      const auto analysis = detectPiPairs(floquetEigensystem(u), tol);
      return diagnostic == Diagnostic::PiPairFraction ? analysis.pair_fraction
                                                      : overlapWeight(analysis, psi0);
    }
    case Diagnostic::KappaHx:
    case Diagnostic::KappaJ: {
      const auto target = diagnostic == Diagnostic::KappaHx ? Parameter::Hx : Parameter::J;
      return curvatureFit(qfiSeries(model, target, psi0, config.n_max), config.fit_window).kappa;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

PhaseDiagram sweepDiagnostic(const GridSpec& grid, Diagnostic diagnostic, const SweepConfig& config) {
  grid.validate();
  if (config.workers < 1) throw ConfigError("sweep needs at least one worker");

  PhaseDiagram out;
  out.grid = grid;
  out.diagnostic = diagnostic;
  out.values.resize(grid.h.count, grid.j.count);

  const int cells = grid.h.count * grid.j.count;
  std::atomic<int> next{0};
  std::mutex error_mutex;
  auto work = [&] {
    for (int cell = next++; cell < cells; cell = next++) {
      const int i = cell / grid.j.count;
      const int k = cell % grid.j.count;
      try {
        out.values(i, k) = evaluateCell(grid.modelAt(i, k), diagnostic, config);
      } catch (const std::exception& e) {
        out.values(i, k) = std::numeric_limits<double>::quiet_NaN();
        std::lock_guard lock(error_mutex);
        out.errors.push_back({i, k, e.what()});
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < config.workers; ++w) pool.emplace_back(work);
    work();
  }
  std::sort(out.errors.begin(), out.errors.end(), [](const CellError& a, const CellError& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return out;
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> classifyPD(const PhaseDiagram& weights,
                                                             double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("PD threshold must lie in (0, 1)");
  // NaN >= threshold is false, so failed cells come out non-PD.
  return weights.values.array() >= threshold;
}

PhaseDiagram curvatureMap(const GridSpec& grid, Parameter target, int n_max, double window_fraction,
                          int workers) {
  SweepConfig config;
  config.n_max = n_max;
  config.fit_window = window_fraction;
  config.workers = workers;
  return sweepDiagnostic(grid, target == Parameter::Hx ? Diagnostic::KappaHx : Diagnostic::KappaJ,
                         config);
}

}  // namespace strobo
