// Copyright 2026 The jcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration: a flat registry of dotted keys, a `key = value` parser,
// and the per-scenario default overlays.

#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jcsim/core.hpp"

namespace jcsim::cli {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnknownKeyError : public ConfigError {
 public:
  explicit UnknownKeyError(std::string key) : ConfigError("unknown key: " + key), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ValueKind { real, integer, unsigned_integer, boolean, choice, real_list, label };

struct KeySpec {
  std::string key;
  std::string default_value;
  ValueKind kind;
  std::vector<std::string> choices;
  std::string help;
};

// ---------------------------------------------------------------------------
// Values

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::optional<double> parse_plain_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Reals accept an optional multiple of pi: "pi", "0.5pi", "3*pi", "-pi".
inline std::optional<double> parse_real(const std::string& text) {
  std::string s = trim(text);
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    std::string coef = trim(s.substr(0, s.size() - 2));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    if (coef.empty() || coef == "+") return M_PI;
    if (coef == "-") return -M_PI;
    auto c = parse_plain_real(coef);
    if (!c) return std::nullopt;
    return *c * M_PI;
  }
  return parse_plain_real(s);
}

inline std::optional<long long> parse_integer(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> parse_unsigned(const std::string& s) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {
      "spectrum_vs_J",   "spectrum_vs_g",    "ramp_infidelity_vs_t",    "infidelity_vs_T",
      "two_exc_spectrum", "two_exc_infidelity", "noise_single",          "noise_sweep",
      "decoherence_gamma_sweep", "decoherence_kappa_sweep", "sxsx_vs_t", "custom"};
  return ids;
}

inline const std::vector<KeySpec>& key_registry() {
  using K = ValueKind;
  static const std::vector<KeySpec> keys = {
      {"scenario", "ramp_infidelity_vs_t", K::choice, scenario_ids(), "scenario to run"},
      {"lattice.n_sites", "2", K::integer, {}, "number of JC sites"},
      {"lattice.excitations", "1", K::integer, {}, "excitation sector k"},
      {"lattice.g", "1", K::real, {}, "qubit-cavity coupling (fixed unless ramped)"},
      {"lattice.J", "0", K::real, {}, "hopping rate (fixed unless ramped)"},
      {"lattice.delta", "1", K::real, {}, "detuning"},
      {"lattice.boundary", "open", K::choice, {"open", "periodic"}, "chain boundary"},
      {"ramp.parameter", "J", K::choice, {"J", "g"}, "ramped coupling"},
      {"ramp.shape", "linear", K::choice, {"linear", "quadratic"}, "ramp profile"},
      {"ramp.start", "0", K::real, {}, "ramped coupling at t = 0"},
      {"ramp.target", "2", K::real, {}, "ramped coupling at t = T"},
      {"ramp.T", "0.5pi", K::real, {}, "total evolution time"},
      {"cd.mode", "simplified", K::choice, {"none", "exact", "full", "simplified"},
       "counter-diabatic term"},
      {"cd.gap_tolerance", "1e-9", K::real, {}, "minimum gap for the exact CD term"},
      {"evolve.n_steps", "4000", K::integer, {}, "minimum number of steps"},
      {"evolve.max_dt", "0.000125pi", K::real, {}, "largest step; 0 disables"},
      {"evolve.rule", "magnus4", K::choice, {"magnus4", "midpoint"}, "step rule"},
      {"evolve.record_every", "10", K::integer, {}, "record every n-th step"},
      {"evolve.initial", "ground", K::label, {}, "ground or vN (eigenstate label)"},
      {"evolve.check_convergence", "false", K::boolean, {}, "step-doubling check"},
      {"evolve.convergence_tolerance", "1e-10", K::real, {}, "step-doubling tolerance on F(T)"},
      {"custom.dynamics", "unitary", K::choice, {"unitary", "lindblad", "noisy"},
       "dynamics for the custom scenario"},
      {"sweep.start", "0", K::real, {}, "first grid point"},
      {"sweep.stop", "4", K::real, {}, "last grid point"},
      {"sweep.points", "401", K::integer, {}, "number of grid points"},
      {"sweep.spacing", "linear", K::choice, {"linear", "log"}, "grid spacing"},
      {"sweep.values", "", K::real_list, {}, "explicit grid; overrides start/stop/points"},
      {"noise.alpha", "0.05", K::real, {}, "relative control-error magnitude"},
      {"noise.samples", "100", K::integer, {}, "ensemble size"},
      {"noise.seed", "1", K::unsigned_integer, {}, "64-bit seed"},
      {"noise.segments", "100", K::integer, {}, "piecewise-constant noise segments over [0, T]"},
      {"noise.sample_index", "0", K::integer, {}, "sample shown by noise_single"},
      {"decoherence.gamma", "1.5915494309189535e-05", K::real, {}, "qubit damping rate"},
      {"decoherence.kappa", "5e-05", K::real, {}, "cavity damping rate"},
      {"decoherence.T_values", "0.5pi,3pi,5.5pi", K::real_list, {}, "total times for the sweeps"},
  };
  return keys;
}

inline const KeySpec* find_key(std::string_view key) {
  for (const auto& k : key_registry()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

/// Canonical form of a value; throws ConfigError when it does not parse.
inline std::string canonicalize(const KeySpec& spec, const std::string& raw) {
  const std::string v = trim(raw);
  auto fail = [&]() -> std::string { throw ConfigError("invalid value for " + spec.key + ": '" + v + "'"); };
  switch (spec.kind) {
    case ValueKind::real: {
      auto x = parse_real(v);
      return x ? format_real(*x) : fail();
    }
    case ValueKind::integer: {
      auto x = parse_integer(v);
      return x ? std::to_string(*x) : fail();
    }
    case ValueKind::unsigned_integer: {
      auto x = parse_unsigned(v);
      return x ? std::to_string(*x) : fail();
    }
    case ValueKind::boolean:
      if (v == "true" || v == "1" || v == "yes" || v == "on") return "true";
      if (v == "false" || v == "0" || v == "no" || v == "off") return "false";
      return fail();
    case ValueKind::choice:
      return std::find(spec.choices.begin(), spec.choices.end(), v) != spec.choices.end() ? v : fail();
    case ValueKind::real_list: {
      if (v.empty()) return {};
      std::string out;
      for (const auto& item : split(v, ',')) {
        auto x = parse_real(item);
        if (!x) return fail();
        if (!out.empty()) out += ',';
        out += format_real(*x);
      }
      return out;
    }
    case ValueKind::label:
      if (v == "ground") return v;
      if (v.size() >= 2 && v[0] == 'v') {
        auto n = parse_integer(v.substr(1));
        if (n && *n >= 1) return "v" + std::to_string(*n);
      }
      return fail();
  }
  return fail();
}

// ---------------------------------------------------------------------------
// Parsing

struct Assignment {
  std::string key;
  std::string value;
};

/// Parses `key = value` lines; `#` starts a comment.
inline std::vector<Assignment> parse_config_text(const std::string& text, const std::string& source = "config") {
  std::vector<Assignment> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    out.push_back({std::move(key), trim(line.substr(eq + 1))});
  }
  return out;
}

inline std::vector<Assignment> read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

inline Assignment parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + text + "'");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

// ---------------------------------------------------------------------------
// Scenario table

struct ScenarioInfo {
  std::string id;
  std::string summary;
  std::vector<Assignment> defaults;
};

inline const std::vector<ScenarioInfo>& scenario_table() {
  static const std::vector<Assignment> standard_ramp = {
      {"lattice.excitations", "1"}, {"lattice.g", "1"},      {"lattice.delta", "1"},
      {"ramp.parameter", "J"},      {"ramp.start", "0"},     {"ramp.target", "2"},
      {"ramp.T", "0.5pi"},          {"cd.mode", "simplified"}};
  auto with = [](std::vector<Assignment> base, std::vector<Assignment> extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
  };
  static const std::vector<ScenarioInfo> table = {
      {"spectrum_vs_J", "energies E1..En vs hopping rate",
       {{"lattice.excitations", "1"}, {"lattice.g", "1"}, {"lattice.delta", "1"},
        {"sweep.start", "0"}, {"sweep.stop", "4"}, {"sweep.points", "401"}, {"sweep.spacing", "linear"}}},
      {"spectrum_vs_g", "energies E1..En vs qubit-cavity coupling",
       {{"lattice.excitations", "1"}, {"lattice.J", "2"}, {"lattice.delta", "1"},
        {"sweep.start", "0"}, {"sweep.stop", "4"}, {"sweep.points", "401"}, {"sweep.spacing", "linear"}}},
      {"ramp_infidelity_vs_t", "1-F(t) with and without CD", with(standard_ramp, {{"ramp.shape", "linear"}})},
      {"infidelity_vs_T", "1-F(T) vs total time",
       with(standard_ramp, {{"ramp.shape", "linear"}, {"sweep.start", "0.1pi"}, {"sweep.stop", "8pi"},
                   {"sweep.points", "24"}, {"sweep.spacing", "log"}})},
      {"two_exc_spectrum", "two-excitation energies E1..E8 vs hopping rate",
       {{"lattice.excitations", "2"}, {"lattice.g", "1"}, {"lattice.delta", "0"},
        {"sweep.start", "0"}, {"sweep.stop", "4"}, {"sweep.points", "401"}, {"sweep.spacing", "linear"}}},
      {"two_exc_infidelity", "two-excitation 1-F(t) for v7 and v3",
       {{"lattice.excitations", "2"}, {"lattice.g", "1"}, {"lattice.delta", "0"}, {"ramp.parameter", "J"},
        {"ramp.shape", "linear"}, {"ramp.start", "0"}, {"ramp.target", "1"}, {"ramp.T", "0.5pi"}}},
      {"noise_single", "F(t) for one control-error sample",
       with(standard_ramp, {{"noise.alpha", "0.05"}, {"noise.sample_index", "0"}, {"noise.segments", "100"}})},
      {"noise_sweep", "mean F(T) over noise samples vs alpha",
       with(standard_ramp, {{"noise.samples", "100"}, {"noise.segments", "100"}, {"sweep.start", "0.01"},
                   {"sweep.stop", "0.15"}, {"sweep.points", "15"}, {"sweep.spacing", "linear"}})},
      {"decoherence_gamma_sweep", "1-F(T) vs qubit damping rate",
       with(standard_ramp, {{"decoherence.kappa", "5e-05"}, {"decoherence.T_values", "0.5pi,3pi,5.5pi"},
                   {"sweep.start", "1.5915494309189535e-06"}, {"sweep.stop", "1.5915494309189535e-04"},
                   {"sweep.points", "13"}, {"sweep.spacing", "log"}, {"evolve.max_dt", "0.001pi"}})},
      {"decoherence_kappa_sweep", "1-F(T) vs cavity damping rate",
       with(standard_ramp, {{"decoherence.gamma", "1.5915494309189535e-05"}, {"decoherence.T_values", "0.5pi,3pi,5.5pi"},
                   {"sweep.start", "5e-06"}, {"sweep.stop", "5e-04"}, {"sweep.points", "13"},
                   {"sweep.spacing", "log"}, {"evolve.max_dt", "0.001pi"}})},
      {"sxsx_vs_t", "<s1x s2x> along the ramp (k=1 or k=2 panel)", with(standard_ramp, {{"ramp.shape", "linear"}})},
      {"custom", "single trajectory from the given keys", {}},
  };
  return table;
}

inline const ScenarioInfo& scenario_info(const std::string& id) {
  for (const auto& s : scenario_table()) {
    if (s.id == id) return s;
  }
  throw ConfigError("unknown scenario: " + id);
}

/// Extra defaults that depend on the excitation sector chosen by the user.
inline std::vector<Assignment> sector_defaults(const std::string& scenario, int k) {
  if (scenario == "sxsx_vs_t" && k == 2) {
    return {{"lattice.g", "1"}, {"lattice.delta", "0"}, {"ramp.target", "1"}, {"cd.mode", "exact"}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Resolved configuration

class Config {
 public:
  /// Resolution order: registry defaults, scenario defaults, sector
  /// defaults, then `user` in order (later assignments win).
  static Config resolve(const std::vector<Assignment>& user) {
    std::map<std::string, std::string> given;
    for (const auto& a : user) {
      const KeySpec* spec = find_key(a.key);
      if (!spec) throw UnknownKeyError(a.key);
      given[a.key] = canonicalize(*spec, a.value);
    }
    Config c;
    for (const auto& k : key_registry()) c.values_[k.key] = canonicalize(k, k.default_value);
    auto apply = [&](const std::vector<Assignment>& list) {
      for (const auto& a : list) c.values_.at(a.key) = canonicalize(*find_key(a.key), a.value);
    };
    const std::string scenario = given.count("scenario") ? given["scenario"] : c.values_["scenario"];
    apply(scenario_info(scenario).defaults);
    const int k = static_cast<int>(*parse_integer(given.count("lattice.excitations") ? given["lattice.excitations"]
                                                                                     : c.values_["lattice.excitations"]));
    apply(sector_defaults(scenario, k));
    for (const auto& [key, value] : given) c.values_[key] = value;
    return c;
  }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw UnknownKeyError(key);
    return it->second;
  }
  double real(const std::string& key) const { return *parse_real(get(key)); }
  int integer(const std::string& key) const {
    const long long v = *parse_integer(get(key));
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(key + " out of range");
    return static_cast<int>(v);
  }
  std::uint64_t unsigned_integer(const std::string& key) const { return *parse_unsigned(get(key)); }
  bool boolean(const std::string& key) const { return get(key) == "true"; }
  std::vector<double> real_list(const std::string& key) const {
    std::vector<double> out;
    if (get(key).empty()) return out;
    for (const auto& item : split(get(key), ',')) out.push_back(*parse_real(item));
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

  /// `key = value` lines in registry order; parses back to the same Config.
  std::string to_text() const {
    std::string out;
    for (const auto& k : key_registry()) out += k.key + " = " + values_.at(k.key) + "\n";
    return out;
  }

  bool operator==(const Config&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace jcsim::cli
