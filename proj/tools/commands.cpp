#include "commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <ostream>

#ifndef STROBO_VERSION
#define STROBO_VERSION "dev"
#endif

namespace strobo::cli {

namespace fs = std::filesystem;

namespace {

std::string cellText(const Table::Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return formatDouble(*d);
  return std::get<std::string>(c);
}

nlohmann::json cellJson(const Table::Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
  return std::get<std::string>(c);
}

std::ofstream openOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("output: cannot write '" + path.string() + "'");
  return out;
}

void writeJson(const nlohmann::json& doc, const fs::path& path) {
  auto out = openOutput(path);
  out << doc.dump(2) << '\n';
}

fs::path outputDir(const RunConfig& cfg) {
  fs::path dir(cfg.output.directory);
  fs::create_directories(dir);
  return dir;
}

fs::path emit(const Table& table, const RunConfig& cfg, const std::string& stem) {
  const fs::path base = outputDir(cfg) / stem;
  writeTable(table, base, cfg.output.format);
  return base.string() + (cfg.output.format == OutputFormat::Json ? ".json" : ".csv");
}

Table fisherTable(const FisherSeries& series) {
  Table t{{"n", "t", "value", "flag"}, {}};
  for (Eigen::Index k = 0; k < series.size(); ++k) {
    t.rows.push_back({static_cast<long long>(series.periods[static_cast<std::size_t>(k)]),
                      series.time(k), series.values(k),
                      toString(series.flags[static_cast<std::size_t>(k)])});
  }
  return t;
}

nlohmann::json fitJson(const CurvatureFit& fit) {
  return {{"a", fit.a},
          {"b", fit.b},
          {"c", fit.c},
          {"kappa", fit.kappa},
          {"rms", fit.rms_residual},
          {"window", {fit.window_first, fit.window_last}},
          {"points", fit.points}};
}

CommandResult fisherCommand(const RunConfig& cfg, FisherSeries series, const std::string& stem) {
  CommandResult r;
  r.files.push_back(emit(fisherTable(series), cfg, stem));
  const auto fit = curvatureFit(series, cfg.analysis.fit_window);
  const fs::path fit_path = outputDir(cfg) / "fit.json";
  writeJson(fitJson(fit), fit_path);
  r.files.push_back(fit_path);
  r.summary = {{"theta", toString(series.target)},
               {"kappa", fit.kappa},
               {"final_value", series.values(series.size() - 1)}};
  return r;
}

}  // namespace

void writeTable(const Table& table, const fs::path& stem, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json rec = nlohmann::json::object();
      for (std::size_t c = 0; c < table.columns.size(); ++c) rec[table.columns[c]] = cellJson(row[c]);
      rows.push_back(std::move(rec));
    }
    writeJson(rows, stem.string() + ".json");
    return;
  }
  auto out = openOutput(stem.string() + ".csv");
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cellText(row[c]);
    out << '\n';
  }
}

CommandResult runEvolve(const RunConfig& cfg) {
  const auto spec = cfg.modelSpec();
  const DiagonalObservable obs[] = {observableFor(cfg.analysis.observable, spec.n_qubits)};
  const auto series = stroboscopicTrajectory(spec, allZeroState(spec.n_qubits), cfg.analysis.n_max, obs)[0];
  Table t{{"n", "value"}, {}};
  for (Eigen::Index k = 0; k < series.values.size(); ++k) {
    t.rows.push_back({static_cast<long long>(series.periods[static_cast<std::size_t>(k)]), series.values(k)});
  }
  CommandResult r;
  r.files.push_back(emit(t, cfg, "evolve"));
  r.summary = {{"observable", series.label}, {"final_value", series.values(series.values.size() - 1)}};
  return r;
}

CommandResult runSpectrum(const RunConfig& cfg) {
  const auto spec = cfg.modelSpec();
  const int transient = cfg.analysis.transient;
  const int samples = cfg.analysis.samples;
  const auto obs = observableFor(cfg.analysis.observable, spec.n_qubits);
  const DiagonalObservable list[] = {obs};
  const auto series =
      stroboscopicTrajectory(spec, allZeroState(spec.n_qubits), transient + samples, list)[0];
  const auto spectrum = powerSpectrum(dynamicSignal(series, transient, samples), spec.protocol.period);
  const auto diag = subharmonicWeight(series, transient, samples);

  Table t{{"k", "f_k", "P_k"}, {}};
  for (Eigen::Index k = 0; k < spectrum.powers.size(); ++k) {
    t.rows.push_back({static_cast<long long>(k), spectrum.frequency(k), spectrum.powers(k)});
  }
  CommandResult r;
  r.files.push_back(emit(t, cfg, "spectrum"));
  r.summary = {{"weight", diag.weight},
               {"dominant_bin", diag.dominant_bin},
               {"dominant_frequency", spectrum.frequency(diag.dominant_bin)},
               {"pd", diag.weight >= cfg.analysis.pd_threshold}};
  return r;
}

CommandResult runQuasi(const RunConfig& cfg) {
  const auto spec = cfg.modelSpec();
  const FloquetOperatord u(spec);
  const double tol = cfg.analysis.pair_tolerance * std::numbers::pi / spec.protocol.period;
  const auto analysis = detectPiPairs(floquetEigensystem(u), tol);
  const double w = overlapWeight(analysis, allZeroState(spec.n_qubits));

  Table eps{{"alpha", "epsilon"}, {}};
  for (Eigen::Index a = 0; a < analysis.dimension(); ++a) {
    eps.rows.push_back({static_cast<long long>(a), analysis.epsilons(a)});
  }
  Table pairs{{"pair_i", "pair_j", "gap"}, {}};
  for (const auto& p : analysis.pairs) {
    pairs.rows.push_back({static_cast<long long>(p.first), static_cast<long long>(p.second), p.gap});
  }
  Table summary{{"f_pi", "W_overlap"}, {{analysis.pair_fraction, w}}};

  CommandResult r;
  r.files.push_back(emit(eps, cfg, "quasienergies"));
  r.files.push_back(emit(pairs, cfg, "pi_pairs"));
  r.files.push_back(emit(summary, cfg, "quasi_summary"));
  r.summary = {{"f_pi", analysis.pair_fraction},
               {"W_overlap", w},
               {"pairs", analysis.pairs.size()},
               {"max_residual", eigenResidual(u, analysis)}};
  return r;
}

CommandResult runQfi(const RunConfig& cfg) {
  const auto spec = cfg.modelSpec();
  return fisherCommand(cfg, qfiSeries(spec, cfg.analysis.theta, allZeroState(spec.n_qubits), cfg.analysis.n_max),
                       "qfi");
}

CommandResult runCfi(const RunConfig& cfg) {
  const auto spec = cfg.modelSpec();
  auto series = cfiSeries(spec, cfg.analysis.theta, observableFor(cfg.analysis.observable, spec.n_qubits),
                          allZeroState(spec.n_qubits), cfg.analysis.n_max, cfg.analysis.derivative,
                          cfg.analysis.fd_step);
  auto r = fisherCommand(cfg, std::move(series), "cfi");
  r.summary["observable"] = toString(cfg.analysis.observable);
  return r;
}

CommandResult runSweep(const RunConfig& cfg) {
  const auto grid = cfg.gridSpec();
  auto diagram = sweepDiagnostic(grid, cfg.sweep.diagnostic, cfg.sweepConfig());
  const bool classify = cfg.sweep.diagnostic == Diagnostic::SubharmonicWeight;
  if (classify) diagram.pd_flags = classifyPD(diagram, cfg.analysis.pd_threshold);

  Table t{{"hxT", "JT", "value"}, {}};
  if (classify) t.columns.push_back("pd_flag");
  for (int i = 0; i < grid.h.count; ++i) {
    for (int k = 0; k < grid.j.count; ++k) {
      std::vector<Table::Cell> row{grid.h.value(i), grid.j.value(k), diagram.values(i, k)};
      if (classify) row.emplace_back(static_cast<long long>((*diagram.pd_flags)(i, k)));
      t.rows.push_back(std::move(row));
    }
  }
  CommandResult r;
  r.files.push_back(emit(t, cfg, "sweep"));
  if (!diagram.errors.empty()) {
    Table errors{{"i", "j", "message"}, {}};
    for (const auto& e : diagram.errors) {
      errors.rows.push_back({static_cast<long long>(e.i), static_cast<long long>(e.j), e.message});
    }
    r.files.push_back(emit(errors, cfg, "sweep_errors"));
  }
  r.summary = {{"diagnostic", toString(cfg.sweep.diagnostic)},
               {"cells", grid.h.count * grid.j.count},
               {"failed_cells", diagram.errors.size()}};
  if (classify) r.summary["pd_cells"] = diagram.pd_flags->count();
  return r;
}

namespace {

struct Flag {
  const char* name;
  const char* section;
  const char* key;
  const char* help;
};

const Flag kFlags[] = {
    {"--n", "model", "n_qubits", "number of qubits (1-12)"},
    {"--boundary", "model", "boundary", "ring|chain|auto"},
    {"--hxT", "model", "hxT", "field times period"},
    {"--JT", "model", "JT", "coupling times period"},
    {"--bond-JT", "model", "bond_JT", "comma-separated per-bond J*T"},
    {"--period", "model", "period", "drive period T"},
    {"--field-fraction", "model", "field_fraction", "T1 / T"},
    {"--step-order", "model", "step_order", "field-first|ising-first"},
    {"--transient", "analysis", "transient", "periods discarded before the spectrum"},
    {"--samples", "analysis", "samples", "spectrum window length M"},
    {"--n-max", "analysis", "n_max", "number of periods"},
    {"--pair-tol", "analysis", "pair_tolerance", "pi-pair tolerance in units of pi/T"},
    {"--fit-window", "analysis", "fit_window", "tail fraction used by the curvature fit"},
    {"--threshold", "analysis", "pd_threshold", "PD classification threshold"},
    {"--theta", "analysis", "theta", "hx|J"},
    {"--observable", "analysis", "observable", "mz|czz"},
    {"--derivative", "analysis", "derivative", "exact|central (CFI slope)"},
    {"--fd-step", "analysis", "fd_step", "central-difference step"},
    {"--h-min", "sweep", "h_min", "grid start in hxT"},
    {"--h-max", "sweep", "h_max", "grid end in hxT"},
    {"--h-count", "sweep", "h_count", "grid points in hxT"},
    {"--j-min", "sweep", "j_min", "grid start in JT"},
    {"--j-max", "sweep", "j_max", "grid end in JT"},
    {"--j-count", "sweep", "j_count", "grid points in JT"},
    {"--diag", "sweep", "diagnostic", "weight|fpi|overlap|kappa-hx|kappa-j"},
    {"--workers", "sweep", "workers", "sweep worker threads"},
    {"--out", "output", "directory", "output directory"},
    {"--format", "output", "format", "csv|json"},
};

std::string pointDescription(const RunConfig& cfg) {
  std::string s = "N=" + std::to_string(cfg.model.n_qubits) + " hxT=" + formatDouble(cfg.model.hxT) +
                  " JT=" + formatDouble(cfg.model.JT);
  return s;
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stroboscopic simulator for the periodically driven Ising model", "strobo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", STROBO_VERSION);

  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flag_values;
  app.add_option("--config", config_path, "INI config or run.json sidecar");
  app.add_option("--set", sets, "section.key=value override (repeatable)");
  for (const auto& f : kFlags) app.add_option(f.name, flag_values[f.name], f.help);

  const std::pair<const char*, CommandResult (*)(const RunConfig&)> commands[] = {
      {"evolve", runEvolve}, {"spectrum", runSpectrum}, {"quasi", runQuasi},
      {"qfi", runQfi},       {"cfi", runCfi},           {"sweep", runSweep},
  };
  const char* descriptions[] = {
      "observable time series at one point",
      "power spectrum and subharmonic weight",
      "quasienergies, pi-pairs, f_pi and W_overlap",
      "quantum Fisher information series and curvature fit",
      "classical Fisher information series and curvature fit",
      "diagnostic over an (hxT, JT) grid",
  };
  for (std::size_t c = 0; c < std::size(commands); ++c) {
    app.add_subcommand(commands[c].first, descriptions[c])->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!config_path.empty()) applyConfigFile(cfg, config_path);
    for (const auto& s : sets) {
      const auto dot = s.find('.');
      const auto eq = s.find('=');
      if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
        throw ConfigParseError("config: --set expects section.key=value, got '" + s + "'", 0, s);
      }
      applySetting(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
    }
    for (const auto& f : kFlags) {
      if (app.count(f.name)) applySetting(cfg, f.section, f.key, flag_values[f.name]);
    }
    cfg.validate();
  } catch (const std::exception& e) {
    err << "strobo " << command << ": " << e.what() << '\n';
    return 2;
  }

  CommandResult result;
  try {
    for (const auto& [name, fn] : commands) {
      if (command == name) result = fn(cfg);
    }
  } catch (const std::invalid_argument& e) {
    err << "strobo " << command << ": " << e.what() << " (" << pointDescription(cfg) << ")\n";
    return 2;
  } catch (const std::exception& e) {
    err << "strobo " << command << ": " << e.what() << " (" << pointDescription(cfg) << ")\n";
    return 1;
  }

  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : result.files) files.push_back(f.filename().string());
  const nlohmann::json sidecar = {{"command", command},
                                  {"version", STROBO_VERSION},
                                  {"config", toJson(cfg)},
                                  {"summary", result.summary},
                                  {"files", files}};
  try {
    writeJson(sidecar, outputDir(cfg) / "run.json");
  } catch (const std::exception& e) {
    err << "strobo " << command << ": " << e.what() << '\n';
    return 1;
  }
  out << result.summary.dump() << '\n';
  return 0;
}

}  // namespace strobo::cli
