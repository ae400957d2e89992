#pragma once

// Run-configuration plumbing for the sphmax tool: a JSON document merged with
// explicit command-line flags, key validation and typed accessors.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sphmax/function_space.hpp"
#include "sphmax/operators.hpp"
#include "sphmax/region.hpp"

namespace sphmax::cli {

using nlohmann::json;

/// Reads a JSON object from disk.
json load_config(const std::string& path);

/// Throws ConfigError naming the first key outside `allowed`.
void reject_unknown(const json& params, std::initializer_list<std::string_view> allowed);

int get_int(const json& p, const std::string& key, int fallback);
std::size_t get_size(const json& p, const std::string& key, std::size_t fallback);
double get_double(const json& p, const std::string& key, double fallback);
bool get_bool(const json& p, const std::string& key, bool fallback);
std::string get_string(const json& p, const std::string& key, const std::string& fallback);
/// "16,32,64" or [16, 32, 64].
std::vector<double> get_doubles(const json& p, const std::string& key, const std::vector<double>& fallback);
/// "3/4,3/4" or ["3/4", "3/4"]; JSON numbers are rejected.
std::vector<Rational> get_recips(const json& p, const std::string& key);

/// SPHMAX_SEED beats the config value; an explicit --seed flag beats both.
std::uint64_t resolve_seed(const json& p, bool seed_flag_given, std::uint64_t fallback);

/// {"type": "gaussian", "center": [...], "width": w} and friends.
TestFunction parse_function(const json& spec);
/// {"t_min", "t_max", "per_decade"} or {"t_min", "t_max", "count"}.
RadiusGrid parse_radius_grid(const json& spec);
/// {"origin": [...], "spacing": h, "extents": [...]}.
LatticeGrid parse_lattice(const json& spec);

}  // namespace sphmax::cli
