#include "dpa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string compose(std::size_t line, const std::string& key, const std::string& what) {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  if (!key.empty()) os << key << ": ";
  os << what;
  return os.str();
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& what)
    : std::runtime_error(compose(line, key, what)), line_(line), key_(std::move(key)) {}

KeyValueDoc KeyValueDoc::parse(const std::string& text) {
  KeyValueDoc doc;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "", "empty key");
    if (value.empty()) throw ConfigError(line, key, "empty value");
    doc.entries_[key] = Entry{value, line};
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueDoc::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(0, assignment, "override must be key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty()) throw ConfigError(0, assignment, "override must be key=value");
  entries_[key] = Entry{value, 0};
}

const KeyValueDoc::Entry* KeyValueDoc::find(const std::string& key) const {
  used_[key] = true;
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string KeyValueDoc::string(const std::string& key, const std::string& fallback) const {
  const auto* e = find(key);
  return e ? e->value : fallback;
}

double KeyValueDoc::number(const std::string& key, double fallback) const {
  const auto v = maybe_number(key);
  return v ? *v : fallback;
}

std::optional<double> KeyValueDoc::maybe_number(const std::string& key) const {
  const auto* e = find(key);
  if (!e) return std::nullopt;
  double out = 0.0;
  if (!parse_double(e->value, out)) throw ConfigError(e->line, key, "not a number: " + e->value);
  return out;
}

std::size_t KeyValueDoc::count(const std::string& key, std::size_t fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  const std::string t = trim(e->value);
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(e->line, key, "not a non-negative integer: " + e->value);
  }
  return out;
}

bool KeyValueDoc::flag(const std::string& key, bool fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError(e->line, key, "not a boolean: " + e->value);
}

std::vector<double> KeyValueDoc::numbers(const std::string& key, std::vector<double> fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  std::istringstream in(e->value);
  std::string item;
  while (std::getline(in, item, ',')) {
    double v = 0.0;
    if (!parse_double(item, v)) throw ConfigError(e->line, key, "not a number list: " + e->value);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(e->line, key, "empty list");
  return out;
}

std::vector<std::string> KeyValueDoc::unused() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) {
    if (!used_.count(key)) out.push_back(key);
  }
  return out;
}

std::size_t KeyValueDoc::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

namespace {

Mobility read_mobility(const KeyValueDoc& doc) {
  const std::string kind = doc.string("problem.mobility.kind", "power_cap");
  if (kind == "power_cap") {
    const double cap = doc.number("problem.mobility.cap", 1.0);
    const double gamma = doc.number("problem.mobility.gamma", 1.0);
    if (!(cap > 0.0)) throw ConfigError(doc.line_of("problem.mobility.cap"), "problem.mobility.cap", "must be positive");
    if (!(gamma >= 1.0)) throw ConfigError(doc.line_of("problem.mobility.gamma"), "problem.mobility.gamma", "must be >= 1");
    return Mobility::power_cap(cap, gamma);
  }
  if (kind == "tabulated") {
    const auto s = doc.numbers("problem.mobility.s", {});
    const auto b = doc.numbers("problem.mobility.beta", {});
    try {
      return Mobility::tabulated(s, b);
    } catch (const std::exception& e) {
      throw ConfigError(doc.line_of("problem.mobility.s"), "problem.mobility.s", e.what());
    }
  }
  throw ConfigError(doc.line_of("problem.mobility.kind"), "problem.mobility.kind", "unknown kind " + kind);
}

ExternalPotential read_potential(const KeyValueDoc& doc) {
  const std::string kind = doc.string("problem.V.kind", "zero");
  if (kind == "zero") return ExternalPotential::zero();
  if (kind == "linear") return ExternalPotential::linear(doc.number("problem.V.slope", 1.0));
  if (kind == "quadratic") return ExternalPotential::quadratic(doc.number("problem.V.stiffness", 1.0));
  throw ConfigError(doc.line_of("problem.V.kind"), "problem.V.kind", "unknown kind " + kind);
}

Interaction read_interaction(const KeyValueDoc& doc) {
  const std::string kind = doc.string("problem.W.kind", "zero");
  if (kind == "zero") return Interaction::zero();
  if (kind == "newtonian_attractive") return Interaction::newtonian(true);
  if (kind == "newtonian_repulsive") return Interaction::newtonian(false);
  if (kind == "morse") {
    MorseParams p;
    p.c_attr = doc.number("problem.W.c_attr", p.c_attr);
    p.l_attr = doc.number("problem.W.l_attr", p.l_attr);
    p.c_rep = doc.number("problem.W.c_rep", p.c_rep);
    p.l_rep = doc.number("problem.W.l_rep", p.l_rep);
    return Interaction::morse(p);
  }
  if (kind == "gaussian") {
    return Interaction::gaussian(doc.number("problem.W.strength", 1.0), doc.number("problem.W.length", 1.0));
  }
  throw ConfigError(doc.line_of("problem.W.kind"), "problem.W.kind", "unknown kind " + kind);
}

InitialDensity read_initial(const KeyValueDoc& doc) {
  const std::string kind = doc.string("problem.initial.kind", "parabolic_bump");
  InitialDensity rho = InitialDensity::uniform(0.0, 1.0, 1.0);
  try {
    if (kind == "parabolic_bump") {
      rho = InitialDensity::parabolic_bump(doc.number("problem.initial.amplitude", 0.75),
                                           doc.number("problem.initial.center", 0.0),
                                           doc.number("problem.initial.radius", 1.0));
    } else if (kind == "uniform") {
      rho = InitialDensity::uniform(doc.number("problem.initial.a", 0.0), doc.number("problem.initial.b", 1.0),
                                    doc.number("problem.initial.height", 1.0));
    } else if (kind == "piecewise_constant") {
      rho = InitialDensity::piecewise_constant(doc.numbers("problem.initial.breakpoints", {}),
                                               doc.numbers("problem.initial.values", {}));
    } else {
      throw ConfigError(doc.line_of("problem.initial.kind"), "problem.initial.kind", "unknown kind " + kind);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(doc.line_of("problem.initial.kind"), "problem.initial", e.what());
  }
  if (const auto m = doc.maybe_number("problem.m")) rho = rho.with_declared_mass(*m);
  return rho;
}

}  // namespace

RunConfig build_config(const KeyValueDoc& doc) {
  RunConfig cfg;
  cfg.problem.mobility = read_mobility(doc);
  cfg.problem.V = read_potential(doc);
  cfg.problem.W = read_interaction(doc);
  cfg.problem.initial = read_initial(doc);

  const double N = doc.number("discretization.N", 200.0);
  if (!(N >= 2.0) || N != std::floor(N)) {
    throw ConfigError(doc.line_of("discretization.N"), "discretization.N", "must be an integer >= 2");
  }
  cfg.N = static_cast<std::size_t>(N);

  auto& opt = cfg.integrate;
  opt.t_end = doc.number("discretization.t_end", 1.0);
  if (!(opt.t_end > 0.0)) {
    throw ConfigError(doc.line_of("discretization.t_end"), "discretization.t_end", "must be positive");
  }
  const std::string scheme = doc.string("discretization.integrator", "rk4");
  if (scheme == "rk4") {
    opt.scheme = Scheme::RK4;
  } else if (scheme == "rk45") {
    opt.scheme = Scheme::RK45;
  } else {
    throw ConfigError(doc.line_of("discretization.integrator"), "discretization.integrator",
                      "expected rk4 or rk45");
  }
  if (const auto dt = doc.maybe_number("discretization.dt")) {
    if (!(*dt > 0.0)) throw ConfigError(doc.line_of("discretization.dt"), "discretization.dt", "must be positive");
    opt.dt = *dt;
  }
  opt.tolerance = doc.number("discretization.tolerance", opt.tolerance);
  opt.output_intervals = doc.count("discretization.output_times", 0);

  cfg.edb = doc.flag("diagnostics.edb", cfg.edb);
  cfg.bv = doc.flag("diagnostics.bv", cfg.bv);
  cfg.h1 = doc.flag("diagnostics.h1", cfg.h1);
  cfg.w1 = doc.flag("diagnostics.w1", cfg.w1);
  const std::string range = doc.string("diagnostics.energy_range", "all");
  if (range == "all") {
    cfg.energy_range = EnergyRange::AllParticles;
  } else if (range == "exclude_last") {
    cfg.energy_range = EnergyRange::ExcludeLast;
  } else {
    throw ConfigError(doc.line_of("diagnostics.energy_range"), "diagnostics.energy_range", "expected all or exclude_last");
  }
  cfg.entropy.c_fractions = doc.numbers("diagnostics.entropy.c", cfg.entropy.c_fractions);
  cfg.entropy.tolerance = doc.number("diagnostics.entropy.tolerance", cfg.entropy.tolerance);

  cfg.fv.dx = doc.number("oracle.fv.dx", cfg.fv.dx);
  cfg.fv.a = doc.number("oracle.fv.a", cfg.fv.a);
  cfg.fv.b = doc.number("oracle.fv.b", cfg.fv.b);
  if (!(cfg.fv.dx > 0.0) || !(cfg.fv.b > cfg.fv.a)) {
    throw ConfigError(doc.line_of("oracle.fv.dx"), "oracle.fv", "need dx > 0 and b > a");
  }
  const std::string boundary = doc.string("oracle.fv.boundary", "zero_flux");
  if (boundary == "zero_flux") {
    cfg.fv.boundary = Boundary::ZeroFlux;
  } else if (boundary == "outflow") {
    cfg.fv.boundary = Boundary::Outflow;
  } else {
    throw ConfigError(doc.line_of("oracle.fv.boundary"), "oracle.fv.boundary", "expected zero_flux or outflow");
  }
  cfg.compare_intervals = doc.count("oracle.compare_times", cfg.compare_intervals);
  if (cfg.compare_intervals == 0) {
    throw ConfigError(doc.line_of("oracle.compare_times"), "oracle.compare_times", "must be positive");
  }
  cfg.out_dir = doc.string("output.dir", cfg.out_dir.string());

  const auto stray = doc.unused();
  if (!stray.empty()) throw ConfigError(doc.line_of(stray.front()), stray.front(), "unknown key");
  return cfg;
}

}  // namespace dpa
