#include "eitcav/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "eitcav/errors.hpp"
#include "json.hpp"

namespace eitcav {
namespace {

using json = nlohmann::json;

/// Line of every object key, by dotted path ("cavity.kappa_H").
class SourceMap {
 public:
  explicit SourceMap(const std::string& text) {
    std::vector<std::string> stack;  // object path per nesting level; arrays push ""
    std::vector<bool> is_object;
    std::string pending_key;
    int line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char ch = text[i];
      if (ch == '\n') {
        ++line;
      } else if (ch == '"') {
        std::string s;
        std::size_t j = i + 1;
        for (; j < text.size() && text[j] != '"'; ++j) {
          if (text[j] == '\\' && j + 1 < text.size()) ++j;
          s += text[j];
        }
        std::size_t k = j + 1;
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k])) && text[k] != '\n') ++k;
        if (k < text.size() && text[k] == ':' && !is_object.empty() && is_object.back()) {
          pending_key = s;
          const std::string path = stack.back().empty() ? s : stack.back() + "." + s;
          lines_.emplace(path, line);
        }
        i = j;
      } else if (ch == '{' || ch == '[') {
        const std::string parent = stack.empty() ? "" : stack.back();
        std::string path = parent;
        if (!pending_key.empty()) path = parent.empty() ? pending_key : parent + "." + pending_key;
        stack.push_back(path);
        is_object.push_back(ch == '{');
        pending_key.clear();
      } else if (ch == '}' || ch == ']') {
        if (!stack.empty()) {
          stack.pop_back();
          is_object.pop_back();
        }
        pending_key.clear();
      } else if (ch == ',') {
        pending_key.clear();
      }
    }
  }

  int line(const std::string& path) const {
    auto it = lines_.find(path);
    if (it != lines_.end()) return it->second;
    const auto dot = path.rfind('.');
    return dot == std::string::npos ? 1 : line(path.substr(0, dot));
  }

 private:
  std::map<std::string, int> lines_;
};

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

class Reader {
 public:
  Reader(const json& doc, const SourceMap& map) : doc_(doc), map_(map) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ConfigError("'" + path + "': " + msg, map_.line(path));
  }

  const json* find(const std::string& path) const {
    const json* node = &doc_;
    std::size_t start = 0;
    while (start <= path.size()) {
      const auto dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!node->is_object()) return nullptr;
      auto it = node->find(key);
      if (it == node->end()) return nullptr;
      node = &*it;
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return node;
  }

  bool has(const std::string& path) const { return find(path) != nullptr; }

  double number(const std::string& path) const {
    const json* n = find(path);
    if (n == nullptr) fail(path, "missing required key");
    if (!n->is_number()) fail(path, "expected a number");
    const double v = n->get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }

  double number(const std::string& path, double fallback) const { return has(path) ? number(path) : fallback; }

  /// Frequency in linear MHz -> rad/us.
  double mhz(const std::string& path) const { return from_mhz(number(path)); }
  double mhz(const std::string& path, double fallback_rad) const { return has(path) ? mhz(path) : fallback_rad; }

  double rate(const std::string& path) const {
    const double v = mhz(path);
    if (v < 0.0) fail(path, "rates must be non-negative");
    return v;
  }

  std::string string(const std::string& path, const std::string& fallback) const {
    const json* n = find(path);
    if (n == nullptr) return fallback;
    if (!n->is_string()) fail(path, "expected a string");
    return n->get<std::string>();
  }

  bool boolean(const std::string& path, bool fallback) const {
    const json* n = find(path);
    if (n == nullptr) return fallback;
    if (!n->is_boolean()) fail(path, "expected true or false");
    return n->get<bool>();
  }

  int integer(const std::string& path, int fallback, int min_value) const {
    const json* n = find(path);
    if (n == nullptr) return fallback;
    if (!n->is_number_integer() && !n->is_number_unsigned()) fail(path, "expected an integer");
    const auto v = n->get<long long>();
    if (v < min_value) fail(path, "must be at least " + std::to_string(min_value));
    return static_cast<int>(v);
  }

  void require_block(const std::string& path) const {
    const json* n = find(path);
    if (n == nullptr) fail(path, "missing required block");
    if (!n->is_object()) fail(path, "expected an object");
  }

 private:
  const json& doc_;
  const SourceMap& map_;
};

SystemParams read_params(const Reader& r) {
  for (const char* block : {"atomic", "cavity", "drive", "ensemble"}) r.require_block(block);
  SystemParams p;
  auto& a = p.atomic;
  a.g_p = r.rate("atomic.g_p");
  a.g_c = r.rate("atomic.g_c");
  a.g_s = r.rate("atomic.g_s");
  a.gamma_0 = r.rate("atomic.gamma_0");
  if (r.has("atomic.gamma_31") || !r.has("atomic.gamma")) {
    a.gamma_31 = r.rate("atomic.gamma_31");
    a.gamma_32 = r.rate("atomic.gamma_32");
  } else {
    // Optical coherence decay rate gamma with an explicit or equal branching.
    const double gamma = r.rate("atomic.gamma");
    const double branching = r.number("atomic.branching_31", 0.5);
    if (branching < 0.0 || branching > 1.0) r.fail("atomic.branching_31", "must lie in [0, 1]");
    if (gamma < a.gamma_0) r.fail("atomic.gamma", "must not be smaller than gamma_0");
    a.gamma_31 = branching * 2.0 * (gamma - a.gamma_0);
    a.gamma_32 = (1.0 - branching) * 2.0 * (gamma - a.gamma_0);
  }
  if (r.has("atomic.gamma_42") || !r.has("atomic.gamma_s")) {
    a.gamma_42 = r.rate("atomic.gamma_42");
  } else {
    const double gamma_s = r.rate("atomic.gamma_s");
    if (gamma_s < a.gamma_0) r.fail("atomic.gamma_s", "must not be smaller than gamma_0");
    a.gamma_42 = 2.0 * (gamma_s - a.gamma_0);
  }

  auto& c = p.cavity;
  c.kappa_H = r.rate("cavity.kappa_H");
  c.kappa_L = r.rate("cavity.kappa_L");
  c.kappa_A = r.rate("cavity.kappa_A");
  c.tau = r.number("cavity.tau");
  if (!(c.tau > 0.0)) r.fail("cavity.tau", "round-trip time must be positive");
  const std::string port = r.string("cavity.reflection_port", "kappa_H");
  if (port == "kappa_H") {
    c.reflection_port = ReflectionPort::kHighMirror;
  } else if (port == "kappa_L") {
    c.reflection_port = ReflectionPort::kLowMirror;
  } else {
    r.fail("cavity.reflection_port", "expected \"kappa_H\" or \"kappa_L\"");
  }

  auto& d = p.drive;
  d.omega_c = r.rate("drive.omega_c");
  d.omega_s = r.mhz("drive.omega_s", 0.0);
  if (d.omega_s < 0.0) r.fail("drive.omega_s", "must be non-negative");

  auto& t = p.detuning;
  t.delta = r.mhz("detuning.delta", 0.0);
  t.delta_c = r.mhz("detuning.delta_c", 0.0);
  t.delta_s = r.mhz("detuning.delta_s", 0.0);
  t.delta_p_c = r.mhz("detuning.delta_p_c", 0.0);
  t.delta_c_c = r.mhz("detuning.delta_c_c", 0.0);
  t.delta_s_c = r.mhz("detuning.delta_s_c", 0.0);

  auto& e = p.ensemble;
  e.g_p_sqrt_N = r.rate("ensemble.g_p_sqrt_N");
  try {
    e.geometry = geometry_from_string(r.string("ensemble.geometry", "all_cavity_delocalized"));
  } catch (const ConfigError& err) {
    r.fail("ensemble.geometry", err.what());
  }

  // The probe input is either given directly or as empty-cavity photons.
  const bool has_amp = r.has("drive.a_p_in"), has_photons = r.has("drive.probe_photons");
  if (has_amp && has_photons) r.fail("drive.probe_photons", "give either a_p_in or probe_photons, not both");
  if (has_amp) {
    const json* n = r.find("drive.a_p_in");
    if (n->is_number()) {
      d.a_p_in = n->get<double>();
    } else if (n->is_array() && n->size() == 2 && (*n)[0].is_number() && (*n)[1].is_number()) {
      d.a_p_in = {(*n)[0].get<double>(), (*n)[1].get<double>()};
    } else {
      r.fail("drive.a_p_in", "expected a number or [re, im]");
    }
  }

  try {
    validate(p);
  } catch (const ConfigError& err) {
    throw ConfigError(err.what(), 1);
  }
  if (has_photons) {
    const double photons = r.number("drive.probe_photons");
    if (photons < 0.0) r.fail("drive.probe_photons", "must be non-negative");
    if (p.cavity.kappa_H <= 0.0) r.fail("drive.probe_photons", "needs kappa_H > 0");
    d.a_p_in = input_for_photons(p, photons, p.detuning.delta_p_c);
  }
  return p;
}

std::vector<double> read_photon_grid(const Reader& r, const std::string& path) {
  const json* n = r.find(path);
  if (n == nullptr) r.fail(path, "missing required key");
  std::vector<double> grid;
  if (n->is_array()) {
    for (const auto& v : *n) {
      if (!v.is_number()) r.fail(path, "expected an array of numbers");
      grid.push_back(v.get<double>());
    }
  } else if (n->is_object()) {
    const double lo = r.number(path + ".min"), hi = r.number(path + ".max");
    const int points = r.integer(path + ".points", 20, 2);
    const bool log = r.boolean(path + ".log", true);
    if (log && !(lo > 0.0)) r.fail(path + ".min", "a logarithmic grid needs min > 0");
    if (!(hi > lo)) r.fail(path + ".max", "must exceed min");
    for (int i = 0; i < points; ++i) {
      const double f = static_cast<double>(i) / (points - 1);
      grid.push_back(log ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
    }
  } else {
    r.fail(path, "expected an array or {min, max, points, log}");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && !(grid[i] > grid[i - 1]))) r.fail(path, "must be increasing and non-negative");
  }
  return grid;
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::kSpectrum: return "spectrum";
    case Scenario::kReflection: return "reflection";
    case Scenario::kDynamics: return "dynamics";
    case Scenario::kSwitchSweep: return "switch_sweep";
    case Scenario::kValidate: return "validate";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "spectrum") return Scenario::kSpectrum;
  if (s == "reflection") return Scenario::kReflection;
  if (s == "dynamics") return Scenario::kDynamics;
  if (s == "switch_sweep") return Scenario::kSwitchSweep;
  if (s == "validate") return Scenario::kValidate;
  throw ConfigError("unknown scenario '" + s + "' (spectrum, reflection, dynamics, switch_sweep, validate)");
}

RunConfig parse_config(const std::string& text, const std::optional<std::string>& scenario_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte));
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object", 1);
  const SourceMap map(text);
  const Reader r(doc, map);

  if (!r.has("units")) throw ConfigError("missing required tag \"units\": \"MHz_linear\"", 1);
  if (r.string("units", "") != "MHz_linear") r.fail("units", "must be \"MHz_linear\"");

  RunConfig cfg;
  if (scenario_override) {
    try {
      cfg.scenario = scenario_from_string(*scenario_override);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--scenario: ") + e.what());
    }
  } else {
    if (!r.has("scenario")) throw ConfigError("missing key 'scenario' (or pass --scenario)", 1);
    try {
      cfg.scenario = scenario_from_string(r.string("scenario", ""));
    } catch (const ConfigError& e) {
      r.fail("scenario", e.what());
    }
  }

  cfg.params = read_params(r);
  cfg.warnings = assumption_warnings(cfg.params);

  auto& sp = cfg.spectrum;
  sp.min = r.mhz("spectrum.min_MHz", sp.min);
  sp.max = r.mhz("spectrum.max_MHz", sp.max);
  if (!(sp.max > sp.min)) r.fail("spectrum.max_MHz", "must exceed min_MHz");
  sp.points = static_cast<std::size_t>(r.integer("spectrum.points", static_cast<int>(sp.points), 2));
  sp.dense_insert = r.boolean("spectrum.dense_insert", sp.dense_insert);
  const std::string chi = r.string("spectrum.chi", "closed_form");
  if (chi == "closed_form") {
    sp.chi = ChiSource::kClosedForm;
  } else if (chi == "quadrature") {
    sp.chi = ChiSource::kQuadrature;
  } else if (chi == "two_level") {
    sp.chi = ChiSource::kTwoLevel;
  } else {
    r.fail("spectrum.chi", "expected \"closed_form\", \"quadrature\" or \"two_level\"");
  }
  sp.quadrature_nodes = r.integer("spectrum.quadrature_nodes", sp.quadrature_nodes, 2);

  auto& dy = cfg.dynamics;
  dy.t_end = r.number("dynamics.t_end_us", dy.t_end);
  if (!(dy.t_end > 0.0)) r.fail("dynamics.t_end_us", "must be positive");
  dy.points = static_cast<std::size_t>(r.integer("dynamics.points", static_cast<int>(dy.points), 2));
  const std::string method = r.string("dynamics.method", "time_domain");
  if (method == "time_domain") {
    dy.method = DynamicsMethod::kTimeDomain;
  } else if (method == "numeric_inversion") {
    dy.method = DynamicsMethod::kNumericInversion;
  } else if (method == "both") {
    dy.method = DynamicsMethod::kBoth;
  } else {
    r.fail("dynamics.method", "expected \"time_domain\", \"numeric_inversion\" or \"both\"");
  }
  dy.radial_nodes = r.integer("dynamics.radial_nodes", dy.radial_nodes, 1);
  dy.cross_check_tol = r.number("dynamics.cross_check_tol", dy.cross_check_tol);

  auto& sw = cfg.sweep;
  if (cfg.scenario == Scenario::kSwitchSweep) {
    r.require_block("switch_sweep");
    sw.delta_s = r.mhz("switch_sweep.delta_s_MHz");
    sw.n_s = read_photon_grid(r, "switch_sweep.n_s");
  }
  sw.find_n_star = r.boolean("switch_sweep.find_n_star", sw.find_n_star);
  sw.fullsim.radial_nodes = r.integer("switch_sweep.radial_nodes", sw.fullsim.radial_nodes, 1);
  sw.fullsim.phase_nodes = r.integer("switch_sweep.phase_nodes", sw.fullsim.phase_nodes, 1);
  const std::string scheme = r.string("switch_sweep.radial_scheme", "gauss_legendre");
  if (scheme == "gauss_legendre") {
    sw.fullsim.radial_scheme = RadialScheme::kGaussLegendre;
  } else if (scheme == "clustered") {
    sw.fullsim.radial_scheme = RadialScheme::kClustered;
  } else {
    r.fail("switch_sweep.radial_scheme", "expected \"gauss_legendre\" or \"clustered\"");
  }
  sw.fullsim.steady_tol = r.number("switch_sweep.steady_tol", sw.fullsim.steady_tol);

  if (cfg.scenario == Scenario::kSwitchSweep && std::abs(cfg.params.drive.a_p_in) == 0.0) {
    r.fail("drive", "switching sweeps need a probe input (a_p_in or probe_photons)");
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const std::optional<std::string>& scenario_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), scenario_override);
}

}  // namespace eitcav
