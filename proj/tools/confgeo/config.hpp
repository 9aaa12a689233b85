#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "confgeo/confgeo.hpp"

namespace confgeo::cli {

/// Malformed or inconsistent configuration; `line` is 0 when the problem has
/// no single source line (missing file, command line override).
class ConfigError : public InputError {
 public:
  ConfigError(std::string source, unsigned long line, const std::string& msg)
      : InputError(format(source, line, msg)), source_(std::move(source)), line_(line) {}
  const std::string& source() const { return source_; }
  unsigned long line() const { return line_; }

 private:
  static std::string format(const std::string& source, unsigned long line, const std::string& msg) {
    std::string s = source.empty() ? std::string("<config>") : source;
    if (line > 0) s += ":" + std::to_string(line);
    return s + ": " + msg;
  }
  std::string source_;
  unsigned long line_;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> n = {"tensors",     "conformal_geodesic", "null_geodesic", "chain_lift",
                                             "flatness",    "total_torsion",      "variational"};
  return n;
}

struct ScenarioConfig {
  std::string scenario = "tensors";
  std::uint64_t seed = 1;
  std::string expect = "auto";

  MetricSpec metric;

  Vec3 point{};
  Vec3 velocity{{1.0, 0.0, 0.0}};
  Vec3 acceleration{{0.0, 1.0, 0.0}};
  Vec3 direction{{0.0, 0.0, 1.0}};
  double phase = 0.0;
  double c0 = 1.0;
  Complex c1{};
  Complex u2{0.0, 0.5};
  double u3 = 0.0;

  std::string curve = "integrated";
  double radius = 1.0;
  Vec3 center{};
  double helix_a = 1.0;
  double helix_c = 1.0;
  Vec3 line_point{};
  Vec3 line_direction{{1.0, 0.0, 0.0}};
  double amplitude = 0.1;
  std::string frames = "frenet";
  Vec3 frame_seed{{0.0, 0.0, 1.0}};
  double angle_a = 0.0;
  double angle_b = 0.0;

  double t0 = 0.0;
  double t1 = 2.0 * std::numbers::pi;
  double step = 1e-3;

  int points = 20;
  double half_width = 0.0;
  int draws = 4;
  std::string rescale = "sinusoidal";
  double epsilon = 1e-3;
  int modes = 4;

  std::map<std::string, double> tolerances;

  std::string output_path;
  std::string format = "csv";

  double tolerance(const std::string& key) const;
};

struct ToleranceSpec {
  const char* key;
  double value;
  const char* doc;
};

inline const std::vector<ToleranceSpec>& tolerance_table() {
  static const std::vector<ToleranceSpec> t = {
      {"identity", 1e-5, "curvature identity and Cotton invariance residuals, analytic mode"},
      {"identity_difference", 1e-3, "the same residuals in difference mode"},
      {"geodesic", 1e-4, "conformal geodesic residual of integrated or projected curves"},
      {"constraint", 1e-6, "null flow cone, nullity and conserved component drift"},
      {"speed", 1e-6, "null flow variation of the projected speed"},
      {"chain", 1e-5, "upper bound on the lift residual of a chain"},
      {"not_chain", 1e-2, "lower bound on the lift residual of a non-chain"},
      {"flatness", 1e-6, "threshold on max |*C| for conformal flatness"},
      {"tables", 1e-9, "Fefferman Ricci/Weyl table consistency and scalar curvature"},
      {"torsion", 1e-6, "agreement between total torsion evaluations, and L = 2T"},
      {"critical", 1e-4, "upper bound on max |dT/de| for a critical curve"},
      {"not_critical", 1e-2, "lower bound on max |dT/de| for a non-critical curve"},
      {"vertical", 1e-6, "upper bound on vertical Kropina variations"},
      {"prediction", 1e-2, "relative gap between difference quotients and the variation integral"},
      {"gradient_identity", 10.0, "coefficient c in the bound c h^2 on the variation density mismatch"},
  };
  return t;
}

inline double ScenarioConfig::tolerance(const std::string& key) const {
  if (auto it = tolerances.find(key); it != tolerances.end()) return it->second;
  for (const auto& t : tolerance_table())
    if (key == t.key) return t.value;
  throw InputError("unknown tolerance '" + key + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    double v = 0.0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw InputError("'" + tok + "' is not a finite number");
    out.push_back(v);
  }
  return out;
}

inline double parse_double(const std::string& s) {
  const auto v = parse_numbers(s);
  if (v.size() != 1) throw InputError("expected one number, got '" + s + "'");
  return v[0];
}

inline Vec3 parse_vec(const std::string& s) {
  const auto v = parse_numbers(s);
  if (v.size() != 3) throw InputError("expected three numbers, got '" + s + "'");
  return {{v[0], v[1], v[2]}};
}

inline Complex parse_complex(const std::string& s) {
  const auto v = parse_numbers(s);
  if (v.size() != 2) throw InputError("expected 're im', got '" + s + "'");
  return {v[0], v[1]};
}

inline long long parse_integer(const std::string& s) {
  long long v = 0;
  const std::string t = trim(s);
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
    throw InputError("expected an integer, got '" + s + "'");
  return v;
}

inline std::string format_vec(const Vec3& v) {
  return format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]);
}

inline std::string format_complex(Complex c) { return format_double(c.real()) + " " + format_double(c.imag()); }

inline std::string choice(const std::string& s, std::initializer_list<const char*> allowed) {
  const std::string t = trim(s);
  std::string known;
  for (const char* a : allowed) {
    if (t == a) return t;
    known += std::string(known.empty() ? "" : ", ") + a;
  }
  throw InputError("'" + t + "' is not one of: " + known);
}

inline std::string format_params(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : " ") + k + "=" + format_double(v);
  return s;
}

}  // namespace detail

/// One configuration key: where it lives, how to read and write it.
struct Field {
  std::string section;
  std::string key;
  std::string doc;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

namespace detail {

inline Field real(std::string sec, std::string key, std::string doc, double ScenarioConfig::*m) {
  return {std::move(sec), std::move(key), std::move(doc),
          [m](const ScenarioConfig& c) { return format_double(c.*m); },
          [m](ScenarioConfig& c, const std::string& s) { c.*m = parse_double(s); }};
}

inline Field vec(std::string sec, std::string key, std::string doc, Vec3 ScenarioConfig::*m) {
  return {std::move(sec), std::move(key), std::move(doc), [m](const ScenarioConfig& c) { return format_vec(c.*m); },
          [m](ScenarioConfig& c, const std::string& s) { c.*m = parse_vec(s); }};
}

inline Field cplx(std::string sec, std::string key, std::string doc, Complex ScenarioConfig::*m) {
  return {std::move(sec), std::move(key), std::move(doc),
          [m](const ScenarioConfig& c) { return format_complex(c.*m); },
          [m](ScenarioConfig& c, const std::string& s) { c.*m = parse_complex(s); }};
}

inline Field integer(std::string sec, std::string key, std::string doc, int ScenarioConfig::*m, int lo) {
  return {std::move(sec), std::move(key), std::move(doc),
          [m](const ScenarioConfig& c) { return std::to_string(c.*m); },
          [m, lo](ScenarioConfig& c, const std::string& s) {
            const long long v = parse_integer(s);
            if (v < lo || v > 1000000) throw InputError("value " + std::to_string(v) + " out of range");
            c.*m = static_cast<int>(v);
          }};
}

inline Field word(std::string sec, std::string key, std::string doc, std::string ScenarioConfig::*m,
                  std::initializer_list<const char*> allowed) {
  std::vector<std::string> a(allowed.begin(), allowed.end());
  return {std::move(sec), std::move(key), std::move(doc), [m](const ScenarioConfig& c) { return c.*m; },
          [m, a](ScenarioConfig& c, const std::string& s) {
            const std::string t = trim(s);
            if (a.empty()) {
              c.*m = t;
              return;
            }
            std::string known;
            for (const auto& w : a) {
              if (t == w) {
                c.*m = t;
                return;
              }
              known += (known.empty() ? "" : ", ") + w;
            }
            throw InputError("'" + t + "' is not one of: " + known);
          }};
}

inline Params parse_params(const std::string& s) {
  Params p;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("expected name=value, got '" + tok + "'");
    p[tok.substr(0, eq)] = parse_double(tok.substr(eq + 1));
  }
  return p;
}

}  // namespace detail

inline const std::vector<Field>& fields() {
  using namespace detail;
  using C = ScenarioConfig;
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"scenario", "type", "one of the scenario names",
                 [](const C& c) { return c.scenario; },
                 [](C& c, const std::string& s) {
                   const std::string t = trim(s);
                   for (const auto& n : scenario_names())
                     if (t == n) {
                       c.scenario = t;
                       return;
                     }
                   throw InputError("unknown scenario '" + t + "'");
                 }});
    v.push_back({"scenario", "seed", "seed for every random draw",
                 [](const C& c) { return std::to_string(c.seed); },
                 [](C& c, const std::string& s) {
                   const long long x = parse_integer(s);
                   if (x < 0) throw InputError("seed must be non-negative");
                   c.seed = static_cast<std::uint64_t>(x);
                 }});
    v.push_back(word("scenario", "expect", "expected verdict: auto, flat, not_flat, chain, not_chain, critical, not_critical",
                     &C::expect, {"auto", "flat", "not_flat", "chain", "not_chain", "critical", "not_critical"}));

    v.push_back({"metric", "name", "registry metric", [](const C& c) { return c.metric.name; },
                 [](C& c, const std::string& s) {
                   c.metric.name = confgeo::detail::find_entry(metric_entries(), trim(s), "metric").name;
                 }});
    v.push_back({"metric", "params", "registry parameters as name=value pairs",
                 [](const C& c) { return format_params(c.metric.params); },
                 [](C& c, const std::string& s) { c.metric.params = parse_params(s); }});
    v.push_back({"metric", "upsilon", "registry conformal factor applied as exp(2 upsilon) g",
                 [](const C& c) { return c.metric.upsilon; },
                 [](C& c, const std::string& s) {
                   c.metric.upsilon = confgeo::detail::find_entry(upsilon_entries(), trim(s), "conformal factor").name;
                 }});
    v.push_back({"metric", "upsilon_params", "conformal factor parameters as name=value pairs",
                 [](const C& c) { return format_params(c.metric.upsilon_params); },
                 [](C& c, const std::string& s) { c.metric.upsilon_params = parse_params(s); }});
    v.push_back({"metric", "mode", "analytic or difference",
                 [](const C& c) { return std::string(c.metric.mode == DerivativeMode::analytic ? "analytic" : "difference"); },
                 [](C& c, const std::string& s) {
                   c.metric.mode = choice(s, {"analytic", "difference"}) == "analytic" ? DerivativeMode::analytic
                                                                                       : DerivativeMode::central_difference;
                 }});
    v.push_back({"metric", "orientation", "+1 or -1",
                 [](const C& c) { return std::to_string(c.metric.orientation); },
                 [](C& c, const std::string& s) {
                   const long long o = parse_integer(s);
                   if (o != 1 && o != -1) throw InputError("orientation must be 1 or -1");
                   c.metric.orientation = static_cast<int>(o);
                 }});

    v.push_back(vec("initial", "point", "initial point", &C::point));
    v.push_back(vec("initial", "velocity", "initial velocity", &C::velocity));
    v.push_back(vec("initial", "acceleration", "initial covariant acceleration", &C::acceleration));
    v.push_back(vec("initial", "direction", "direction of eta for the initial null vector", &C::direction));
    v.push_back(real("initial", "phase", "phase of the initial null vector", &C::phase));
    v.push_back(real("initial", "c0", "conserved component c0", &C::c0));
    v.push_back(cplx("initial", "c1", "conserved component c1 (re im)", &C::c1));
    v.push_back(cplx("initial", "u2", "initial u2 (re im)", &C::u2));
    v.push_back(real("initial", "u3", "initial u3", &C::u3));

    v.push_back(word("curve", "source", "integrated, circle, helix, line, twisted_cubic or trigonometric", &C::curve,
                     {"integrated", "circle", "helix", "line", "twisted_cubic", "trigonometric"}));
    v.push_back(real("curve", "radius", "circle radius", &C::radius));
    v.push_back(vec("curve", "center", "circle center", &C::center));
    v.push_back(real("curve", "a", "helix radius", &C::helix_a));
    v.push_back(real("curve", "c", "helix pitch", &C::helix_c));
    v.push_back(vec("curve", "line_point", "line base point", &C::line_point));
    v.push_back(vec("curve", "line_direction", "line direction", &C::line_direction));
    v.push_back(real("curve", "amplitude", "coefficient scale of the seeded trigonometric curve", &C::amplitude));
    v.push_back(word("curve", "frames", "endpoint frames: frenet or adapted", &C::frames, {"frenet", "adapted"}));
    v.push_back(vec("curve", "frame_seed", "seed vector for adapted endpoint frames", &C::frame_seed));
    v.push_back(real("curve", "angle_a", "rotation of the initial adapted frame", &C::angle_a));
    v.push_back(real("curve", "angle_b", "rotation of the final adapted frame", &C::angle_b));

    v.push_back(real("integration", "t0", "start of the parameter interval", &C::t0));
    v.push_back(real("integration", "t1", "end of the parameter interval", &C::t1));
    v.push_back(real("integration", "step", "step size; also the sampling step of parametric curves", &C::step));

    v.push_back(integer("sampling", "points", "random points for tensors and flatness", &C::points, 1));
    v.push_back(real("sampling", "half_width", "half width of the sampling cube, 0 for automatic", &C::half_width));
    v.push_back(integer("sampling", "draws", "random null vectors per point for flatness", &C::draws, 0));
    v.push_back({"sampling", "rescale", "conformal factor used for the Cotton invariance check",
                 [](const C& c) { return c.rescale; },
                 [](C& c, const std::string& s) {
                   c.rescale = confgeo::detail::find_entry(upsilon_entries(), trim(s), "conformal factor").name;
                 }});
    v.push_back(real("sampling", "epsilon", "finite-difference step of the variational check", &C::epsilon));
    v.push_back(integer("sampling", "modes", "perturbation modes per coordinate direction", &C::modes, 1));

    for (const auto& t : tolerance_table()) {
      const std::string key = t.key;
      v.push_back({"tolerances", key, t.doc,
                   [key](const C& c) { return format_double(c.tolerance(key)); },
                   [key](C& c, const std::string& s) {
                     const double x = parse_double(s);
                     if (!(x > 0.0)) throw InputError("tolerance must be positive");
                     c.tolerances[key] = x;
                   }});
    }

    v.push_back({"output", "path", "output file, empty for stdout", [](const C& c) { return c.output_path; },
                 [](C& c, const std::string& s) { c.output_path = trim(s); }});
    v.push_back(word("output", "format", "csv or json", &C::format, {"csv", "json"}));
    return v;
  }();
  return f;
}

inline const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

/// Applies `section.key=value`.
inline void apply_override(ScenarioConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("--set", 0, "expected section.key=value, got '" + assignment + "'");
  const std::string section = detail::trim(assignment.substr(0, dot));
  const std::string key = detail::trim(assignment.substr(dot + 1, eq - dot - 1));
  const Field* f = find_field(section, key);
  if (!f) throw ConfigError("--set", 0, "unknown key [" + section + "] " + key);
  try {
    f->set(c, assignment.substr(eq + 1));
  } catch (const InputError& e) {
    throw ConfigError("--set", 0, "[" + section + "] " + key + ": " + e.what());
  }
}

/// Parses INI text. Unknown sections or keys, malformed values and INI
/// syntax errors raise a ConfigError carrying the line number.
inline ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source, e.line(), e.message());
  }

  std::map<std::pair<std::string, std::string>, unsigned long> lines;
  std::map<std::string, unsigned long> section_lines;
  {
    std::istringstream ls(text);
    std::string line, section;
    unsigned long n = 0;
    while (std::getline(ls, line)) {
      ++n;
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == ';' || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = detail::trim(t.substr(1, t.size() - 2));
        section_lines.emplace(section, n);
      } else if (const auto eq = t.find('='); eq != std::string::npos) {
        lines.emplace(std::make_pair(section, detail::trim(t.substr(0, eq))), n);
      }
    }
  }

  ScenarioConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(source, lines[{"", section}], "key '" + section + "' outside a section");
    bool known_section = false;
    for (const auto& f : fields()) known_section = known_section || f.section == section;
    if (!known_section) throw ConfigError(source, section_lines[section], "unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const unsigned long at = lines[{section, key}];
      const Field* f = find_field(section, key);
      if (!f) throw ConfigError(source, at, "unknown key '" + key + "' in [" + section + "]");
      try {
        f->set(c, value.data());
      } catch (const InputError& e) {
        throw ConfigError(source, at, "[" + section + "] " + key + ": " + e.what());
      }
    }
  }
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

/// Every key with its current value; parse_config(print_config(c)) == c.
inline std::string print_config(const ScenarioConfig& c, bool with_docs = false) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    if (with_docs) os << "; " << f.doc << '\n';
    os << f.key << " = " << f.get(c) << '\n';
  }
  return os.str();
}

}  // namespace confgeo::cli
