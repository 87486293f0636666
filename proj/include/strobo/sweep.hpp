#pragma once

#include <Eigen/Core>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "strobo/dynamics.hpp"
#include "strobo/model.hpp"

namespace strobo {

/// Evenly spaced axis, endpoints included.
struct AxisRange {
  double min = 0.0;
  double max = std::numbers::pi;
  int count = 61;

  double value(int i) const {
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

/// (h_x T, J T) grid. Axis values are the dimensionless products.
struct GridSpec {
  AxisRange h;
  AxisRange j;
  int n_qubits = 3;
  std::optional<Boundary> boundary;
  DriveProtocol protocol{};

  void validate() const;
  Boundary resolvedBoundary() const { return boundary.value_or(defaultBoundary(n_qubits)); }
  ModelSpec modelAt(int i, int k) const;
};

enum class Diagnostic { SubharmonicWeight, PiPairFraction, OverlapWeight, KappaHx, KappaJ };

std::string toString(Diagnostic d);
Diagnostic parseDiagnostic(const std::string& s);
bool isBounded(Diagnostic d);

struct SweepConfig {
  int transient = kDefaultTransient;
  int samples = kDefaultSpectrumSamples;
  int n_max = kDefaultHorizon;
  /// Pairing tolerance in units of pi/T.
  double pair_tolerance_fraction = 0.05;
  double fit_window = 0.5;
  int workers = 1;
};

struct CellError {
  int i = 0;
  int j = 0;
  std::string message;
};

/// values(i, k) holds the diagnostic at (h.value(i), j.value(k)); failed
/// cells are NaN with the error recorded.
struct PhaseDiagram {
  GridSpec grid;
  Diagnostic diagnostic = Diagnostic::SubharmonicWeight;
  Eigen::MatrixXd values;
  std::optional<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>> pd_flags;
  std::vector<CellError> errors;
};

/// Diagnostic at a single point, starting from |00...0>.
double evaluateCell(const ModelSpec& model, Diagnostic diagnostic, const SweepConfig& config);

/// Evaluates every cell on `config.workers` threads. Each cell is an
/// independent computation written to its own slot, so the result does not
/// depend on the schedule.
PhaseDiagram sweepDiagnostic(const GridSpec& grid, Diagnostic diagnostic, const SweepConfig& config);

/// weight >= threshold; NaN cells are non-PD.
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> classifyPD(const PhaseDiagram& weights,
                                                             double threshold = 0.8);

PhaseDiagram curvatureMap(const GridSpec& grid, Parameter target, int n_max = kDefaultHorizon,
                          double window_fraction = 0.5, int workers = 1);

}  // namespace strobo
