#include "cli_config.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>

#include "sphmax/errors.hpp"

namespace sphmax::cli {

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config '" + path + "' must hold a JSON object");
  return j;
}

void reject_unknown(const json& params, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : params.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "'");
  }
}

namespace {

double as_number(const json& v, const std::string& key) {
  try {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used != s.size()) throw ConfigError("");
      return d;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' must be a number");
}

}  // namespace

int get_int(const json& p, const std::string& key, int fallback) {
  if (!p.contains(key)) return fallback;
  const double d = as_number(p[key], key);
  if (d != static_cast<double>(static_cast<int>(d))) throw ConfigError("'" + key + "' must be an integer");
  return static_cast<int>(d);
}

std::size_t get_size(const json& p, const std::string& key, std::size_t fallback) {
  if (!p.contains(key)) return fallback;
  const double d = as_number(p[key], key);
  if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d)))
    throw ConfigError("'" + key + "' must be a positive integer");
  return static_cast<std::size_t>(d);
}

double get_double(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? as_number(p[key], key) : fallback;
}

bool get_bool(const json& p, const std::string& key, bool fallback) {
  if (!p.contains(key)) return fallback;
  const json& v = p[key];
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  throw ConfigError("'" + key + "' must be a boolean");
}

std::string get_string(const json& p, const std::string& key, const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_string()) throw ConfigError("'" + key + "' must be a string");
  return p[key].get<std::string>();
}

std::vector<double> get_doubles(const json& p, const std::string& key, const std::vector<double>& fallback) {
  if (!p.contains(key)) return fallback;
  const json& v = p[key];
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(as_number(e, key));
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t start = 0;
    for (;;) {
      const auto comma = s.find(',', start);
      out.push_back(as_number(json(s.substr(start, comma - start)), key));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    throw ConfigError("'" + key + "' must be a list of numbers");
  }
  return out;
}

std::vector<Rational> get_recips(const json& p, const std::string& key) {
  if (!p.contains(key)) throw ConfigError("missing '" + key + "'");
  const json& v = p[key];
  if (v.is_string()) return parse_fraction_list(v.get<std::string>());
  if (!v.is_array()) throw ConfigError("'" + key + "' must be fraction strings such as \"3/4\"");
  std::vector<Rational> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("'" + key + "' entries must be fraction strings such as \"3/4\"");
    out.push_back(parse_fraction(e.get<std::string>()));
  }
  return out;
}

std::uint64_t resolve_seed(const json& p, bool seed_flag_given, std::uint64_t fallback) {
  auto parse = [](const std::string& s, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError(std::string(what) + " must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
  };
  auto from_json = [&]() -> std::uint64_t {
    const json& v = p["seed"];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_string()) return parse(v.get<std::string>(), "seed");
    throw ConfigError("seed must be a non-negative integer");
  };
  if (seed_flag_given) return from_json();
  if (const char* env = std::getenv("SPHMAX_SEED"); env && *env) return parse(env, "SPHMAX_SEED");
  return p.contains("seed") ? from_json() : fallback;
}

namespace {

std::vector<double> vec(const json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_array()) throw ConfigError(std::string("function needs array '") + key + "'");
  std::vector<double> out;
  for (const auto& e : spec[key]) out.push_back(as_number(e, key));
  return out;
}

}  // namespace

TestFunction parse_function(const json& spec) {
  if (!spec.is_object()) throw ConfigError("function spec must be an object");
  const std::string type = get_string(spec, "type", "");
  if (type == "constant") {
    reject_unknown(spec, {"type", "dim", "value"});
    return TestFunction::constant(get_int(spec, "dim", 2), get_double(spec, "value", 1.0));
  }
  if (type == "ball_indicator") {
    reject_unknown(spec, {"type", "center", "radius"});
    return TestFunction::ball_indicator(vec(spec, "center"), get_double(spec, "radius", 1.0));
  }
  if (type == "gaussian") {
    reject_unknown(spec, {"type", "center", "width"});
    return TestFunction::gaussian(vec(spec, "center"), get_double(spec, "width", 1.0));
  }
  if (type == "radial_power_log") {
    reject_unknown(spec, {"type", "dim", "power", "log_power", "cutoff"});
    return TestFunction::radial_power_log(get_int(spec, "dim", 2), get_double(spec, "power", 1.0),
                                          get_double(spec, "log_power", 0.0), get_double(spec, "cutoff", 0.5));
  }
  if (type == "lattice_field") {
    reject_unknown(spec, {"type", "path"});
    const std::string path = get_string(spec, "path", "");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read lattice field '" + path + "'");
    return TestFunction::lattice_field(std::make_shared<const LatticeGrid>(LatticeGrid::read_csv(in)));
  }
  throw ConfigError("unknown function type '" + type + "'");
}

RadiusGrid parse_radius_grid(const json& spec) {
  if (!spec.is_object()) throw ConfigError("grid must be an object");
  reject_unknown(spec, {"t_min", "t_max", "per_decade", "count"});
  const double lo = get_double(spec, "t_min", 1e-3);
  const double hi = get_double(spec, "t_max", 1e3);
  if (spec.contains("count")) return {lo, hi, get_size(spec, "count", 1)};
  return RadiusGrid::per_decade(lo, hi, get_int(spec, "per_decade", 64));
}

LatticeGrid parse_lattice(const json& spec) {
  if (!spec.is_object()) throw ConfigError("lattice must be an object");
  reject_unknown(spec, {"origin", "spacing", "extents"});
  std::vector<std::size_t> extents;
  for (double e : get_doubles(spec, "extents", {})) {
    if (e < 1 || e != static_cast<double>(static_cast<std::size_t>(e))) throw ConfigError("extents must be positive integers");
    extents.push_back(static_cast<std::size_t>(e));
  }
  return LatticeGrid::zeros(get_doubles(spec, "origin", {}), get_double(spec, "spacing", 0.1), extents);
}

}  // namespace sphmax::cli
