#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace strobo::cli {

namespace {

enum class Kind { Int, Double, Text, DoubleList };

struct Field {
  const char* section;
  const char* key;
  Kind kind;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int toInt(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer");
  return v;
}

double toDouble(const std::string& s) {
  // "pi" and simple multiples like "0.5pi" keep grid configs readable.
  std::string body = s;
  double scale = 1.0;
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    body = trim(body.substr(0, body.size() - 2));
    if (body.empty()) return scale;
    if (body.back() == '*') body = trim(body.substr(0, body.size() - 1));
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc{} || ptr != body.data() + body.size()) throw std::invalid_argument("not a number");
  return v * scale;
}

std::vector<double> toDoubleList(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(toDouble(item));
  }
  return out;
}

std::string joinDoubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += formatDouble(v[k]);
  }
  return out;
}

OutputFormat parseFormat(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("expected csv|json");
}

DerivativeMode parseDerivative(const std::string& s) {
  if (s == "exact") return DerivativeMode::Exact;
  if (s == "central") return DerivativeMode::CentralDifference;
  throw std::invalid_argument("expected exact|central");
}

#define INT_FIELD(sec, name, member)                                                   \
  Field {                                                                              \
    sec, name, Kind::Int, [](RunConfig& c, const std::string& v) { c.member = toInt(v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }                    \
  }
#define DOUBLE_FIELD(sec, name, member)                                                      \
  Field {                                                                                    \
    sec, name, Kind::Double, [](RunConfig& c, const std::string& v) { c.member = toDouble(v); }, \
        [](const RunConfig& c) { return formatDouble(c.member); }                            \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      INT_FIELD("model", "n_qubits", model.n_qubits),
      Field{"model", "boundary", Kind::Text,
            [](RunConfig& c, const std::string& v) {
              c.model.boundary = v == "auto" ? std::nullopt : std::optional(parseBoundary(v));
            },
            [](const RunConfig& c) {
              return c.model.boundary ? toString(*c.model.boundary) : std::string("auto");
            }},
      DOUBLE_FIELD("model", "hxT", model.hxT),
      DOUBLE_FIELD("model", "JT", model.JT),
      Field{"model", "bond_JT", Kind::DoubleList,
            [](RunConfig& c, const std::string& v) { c.model.bond_JT = toDoubleList(v); },
            [](const RunConfig& c) { return joinDoubles(c.model.bond_JT); }},
      DOUBLE_FIELD("model", "period", model.period),
      DOUBLE_FIELD("model", "field_fraction", model.field_fraction),
      Field{"model", "step_order", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.model.order = parseStepOrder(v); },
            [](const RunConfig& c) { return toString(c.model.order); }},

      INT_FIELD("analysis", "transient", analysis.transient),
      INT_FIELD("analysis", "samples", analysis.samples),
      INT_FIELD("analysis", "n_max", analysis.n_max),
      DOUBLE_FIELD("analysis", "pair_tolerance", analysis.pair_tolerance),
      DOUBLE_FIELD("analysis", "fit_window", analysis.fit_window),
      DOUBLE_FIELD("analysis", "pd_threshold", analysis.pd_threshold),
      Field{"analysis", "theta", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.analysis.theta = parseParameter(v); },
            [](const RunConfig& c) { return toString(c.analysis.theta); }},
      Field{"analysis", "observable", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.analysis.observable = parseObservable(v); },
            [](const RunConfig& c) { return toString(c.analysis.observable); }},
      Field{"analysis", "derivative", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.analysis.derivative = parseDerivative(v); },
            [](const RunConfig& c) {
              return std::string(c.analysis.derivative == DerivativeMode::Exact ? "exact" : "central");
            }},
      DOUBLE_FIELD("analysis", "fd_step", analysis.fd_step),

      DOUBLE_FIELD("sweep", "h_min", sweep.h.min),
      DOUBLE_FIELD("sweep", "h_max", sweep.h.max),
      INT_FIELD("sweep", "h_count", sweep.h.count),
      DOUBLE_FIELD("sweep", "j_min", sweep.j.min),
      DOUBLE_FIELD("sweep", "j_max", sweep.j.max),
      INT_FIELD("sweep", "j_count", sweep.j.count),
      Field{"sweep", "diagnostic", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.sweep.diagnostic = parseDiagnostic(v); },
            [](const RunConfig& c) { return toString(c.sweep.diagnostic); }},
      INT_FIELD("sweep", "workers", sweep.workers),

      Field{"output", "directory", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.output.directory = v; },
            [](const RunConfig& c) { return c.output.directory; }},
      Field{"output", "format", Kind::Text,
            [](RunConfig& c, const std::string& v) { c.output.format = parseFormat(v); },
            [](const RunConfig& c) { return toString(c.output.format); }},
  };
  return table;
}

#undef INT_FIELD
#undef DOUBLE_FIELD

const Field& findField(const std::string& section, const std::string& key, int line) {
  for (const auto& f : fields()) {
    if (section == f.section && key == f.key) return f;
  }
  const std::string name = section + "." + key;
  throw ConfigParseError("config: unknown setting '" + name + "'" +
                             (line ? " at line " + std::to_string(line) : std::string()),
                         line, name);
}

}  // namespace

std::string formatDouble(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string toString(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

ModelSpec RunConfig::modelSpec() const {
  const auto protocol = DriveProtocol::fromFraction(model.period, model.field_fraction, model.order);
  auto spec = ModelSpec::dimensionless(model.n_qubits, model.hxT, model.JT, protocol, model.boundary);
  if (!model.bond_JT.empty()) {
    std::vector<double> j;
    for (double jt : model.bond_JT) j.push_back(jt / model.period);
    spec.couplings = PerBondCoupling{j};
  }
  spec.validate();
  return spec;
}

GridSpec RunConfig::gridSpec() const {
  GridSpec g;
  g.h = sweep.h;
  g.j = sweep.j;
  g.n_qubits = model.n_qubits;
  g.boundary = model.boundary;
  g.protocol = DriveProtocol::fromFraction(model.period, model.field_fraction, model.order);
  return g;
}

SweepConfig RunConfig::sweepConfig() const {
  SweepConfig s;
  s.transient = analysis.transient;
  s.samples = analysis.samples;
  s.n_max = analysis.n_max;
  s.pair_tolerance_fraction = analysis.pair_tolerance;
  s.fit_window = analysis.fit_window;
  s.workers = sweep.workers;
  return s;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigParseError("config: " + field + " " + why, 0, field);
  };
  if (analysis.transient < 0) fail("analysis.transient", "must be >= 0");
  if (analysis.samples < 4 || analysis.samples % 2) fail("analysis.samples", "must be even and >= 4");
  if (analysis.n_max < 1) fail("analysis.n_max", "must be >= 1");
  if (!(analysis.pair_tolerance > 0.0 && analysis.pair_tolerance <= 1.0)) {
    fail("analysis.pair_tolerance", "must lie in (0, 1] (units of pi/T)");
  }
  if (!(analysis.fit_window > 0.0 && analysis.fit_window <= 1.0)) {
    fail("analysis.fit_window", "must lie in (0, 1]");
  }
  if (!(analysis.pd_threshold > 0.0 && analysis.pd_threshold < 1.0)) {
    fail("analysis.pd_threshold", "must lie in (0, 1)");
  }
  if (sweep.workers < 1) fail("sweep.workers", "must be >= 1");
  modelSpec();
  gridSpec().validate();
}

void applySetting(RunConfig& cfg, const std::string& section, const std::string& key,
                  const std::string& value, int line) {
  const Field& f = findField(section, key, line);
  try {
    f.set(cfg, trim(value));
  } catch (const std::exception& e) {
    const std::string name = section + "." + key;
    throw ConfigParseError("config: bad value '" + trim(value) + "' for " + name +
                               (line ? " at line " + std::to_string(line) : std::string()) + ": " +
                               e.what(),
                           line, name);
  }
}

void applyIni(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find_first_of("#;"); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigParseError("config: unterminated section header at line " + std::to_string(line),
                               line, s);
      }
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError("config: expected 'key = value' at line " + std::to_string(line), line, s);
    }
    const std::string key = trim(s.substr(0, eq));
    if (section.empty()) {
      throw ConfigParseError("config: setting '" + key + "' outside a [section] at line " +
                                 std::to_string(line),
                             line, key);
    }
    applySetting(cfg, section, key, s.substr(eq + 1), line);
  }
}

void applyJson(RunConfig& cfg, const nlohmann::json& doc) {
  const nlohmann::json& body = doc.contains("config") ? doc.at("config") : doc;
  if (!body.is_object()) throw ConfigParseError("config: JSON config must be an object", 0, "config");
  for (const auto& [section, entries] : body.items()) {
    if (!entries.is_object()) {
      throw ConfigParseError("config: section '" + section + "' must be an object", 0, section);
    }
    for (const auto& [key, value] : entries.items()) {
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_number_integer()) {
        text = std::to_string(value.get<long long>());
      } else if (value.is_number()) {
        text = formatDouble(value.get<double>());
      } else if (value.is_array()) {
        std::vector<double> list;
        for (const auto& x : value) list.push_back(x.get<double>());
        text = joinDoubles(list);
      } else if (value.is_null()) {
        text = "auto";
      } else {
        throw ConfigParseError("config: unsupported JSON value for " + section + "." + key, 0,
                               section + "." + key);
      }
      applySetting(cfg, section, key, text);
    }
  }
}

void applyConfigFile(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("config: cannot open '" + path + "'", 0, path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigParseError(std::string("config: invalid JSON in '") + path + "': " + e.what(), 0, path);
    }
    applyJson(cfg, doc);
  } else {
    applyIni(cfg, text);
  }
}

nlohmann::json toJson(const RunConfig& cfg) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& f : fields()) {
    const std::string text = f.get(cfg);
    nlohmann::json& slot = out[f.section][f.key];
    switch (f.kind) {
      case Kind::Int: slot = toInt(text); break;
      case Kind::Double: slot = toDouble(text); break;
      case Kind::Text: slot = text; break;
      case Kind::DoubleList: slot = toDoubleList(text); break;
    }
  }
  return out;
}

std::string toIni(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    os << f.key << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

}  // namespace strobo::cli
