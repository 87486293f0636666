#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "strobo/strobo.hpp"

namespace strobo::cli {

enum class OutputFormat { Csv, Json };

struct ModelBlock {
  int n_qubits = 3;
  std::optional<Boundary> boundary;
  double hxT = 2.6;
  double JT = 1.57;
  /// Per-bond J*T values; empty means uniform JT.
  std::vector<double> bond_JT;
  double period = 1.0;
  double field_fraction = 0.5;
  StepOrder order = StepOrder::FieldThenIsing;
};

struct AnalysisBlock {
  int transient = kDefaultTransient;
  int samples = kDefaultSpectrumSamples;
  int n_max = kDefaultHorizon;
  /// In units of pi/T.
  double pair_tolerance = 0.05;
  double fit_window = 0.5;
  double pd_threshold = 0.8;
  Parameter theta = Parameter::Hx;
  ObservableKind observable = ObservableKind::Mz;
  DerivativeMode derivative = DerivativeMode::Exact;
  double fd_step = 1e-6;
};

struct SweepBlock {
  AxisRange h;
  AxisRange j;
  Diagnostic diagnostic = Diagnostic::SubharmonicWeight;
  int workers = 1;
};

struct OutputBlock {
  std::string directory = ".";
  OutputFormat format = OutputFormat::Csv;
};

struct RunConfig {
  ModelBlock model;
  AnalysisBlock analysis;
  SweepBlock sweep;
  OutputBlock output;

  ModelSpec modelSpec() const;
  GridSpec gridSpec() const;
  SweepConfig sweepConfig() const;
  void validate() const;
};

/// Malformed configuration input. `line` is 0 when the problem is not tied
/// to a line of a file (flags, JSON sidecars).
class ConfigParseError : public std::invalid_argument {
 public:
  ConfigParseError(const std::string& what, int line, std::string field)
      : std::invalid_argument(what), line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Sets `section.key` from its text form. Throws ConfigParseError naming the
/// field on an unknown key or unparseable value.
void applySetting(RunConfig& cfg, const std::string& section, const std::string& key,
                  const std::string& value, int line = 0);

/// Applies an INI-style document: `[section]` headers, `key = value` lines,
/// `#` or `;` comments.
void applyIni(RunConfig& cfg, const std::string& text);

/// Applies the "config" object of a run.json sidecar (or a bare object of
/// sections).
void applyJson(RunConfig& cfg, const nlohmann::json& doc);

/// Reads a file and dispatches on content: JSON if it starts with '{',
/// INI otherwise.
void applyConfigFile(RunConfig& cfg, const std::string& path);

/// Every setting as section -> key -> value, with doubles in shortest
/// round-trip form so re-applying reproduces the config exactly.
nlohmann::json toJson(const RunConfig& cfg);
std::string toIni(const RunConfig& cfg);

std::string formatDouble(double v);
std::string toString(OutputFormat f);

}  // namespace strobo::cli
