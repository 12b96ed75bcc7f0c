// config.hpp -- run configuration: `key = value` text format, validation,
// canonical serialization, and the config hash stamped into output files.
//
// Defaults reproduce the zero-field reference simulation (N = 1200 spins,
// collective coupling 13 MHz, 200 ns at dt = 0.05 ns).  `seed` is the one
// required key; there is no wall-clock fallback.
#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fqnv/disorder.hpp"
#include "fqnv/errors.hpp"
#include "fqnv/model.hpp"

namespace fqnv {

struct RunConfig {
  // ensemble
  std::size_t n_spins = 1200;
  double d_center_mhz = 2878.0;
  double d_fwhm_mhz = 0.08;
  double e_fwhm_mhz = 4.4;
  double bz_fwhm_mhz = 3.1;
  double hyperfine_mhz = 2.3;
  double b_ext_mt = 0.0;
  std::array<double, 3> b_ext_axis{{1.0, 0.0, 0.0}};
  std::string b_ext_axis_token = "100";
  double gamma_b_mhz = 0.44;
  double gamma_d_mhz = 0.44;
  double truncation_fwhm = 10.0;
  std::uint64_t seed = 0;
  // qubit
  double gap_mhz = 2878.0;
  double bias_mhz = 0.0;
  double gamma_c_mhz = 0.3;
  double collective_coupling_mhz = 13.0;  // sqrt(N) g
  double delta_c_mhz = 0.0;
  // frame override; NaN means "derive from the disorder spec"
  double frame_frequency_mhz = std::numeric_limits<double>::quiet_NaN();
  // propagation
  double t_max_ns = 200.0;
  double dt_ns = 0.05;
  std::size_t n_realizations = 8;
  // emission
  std::string output = "vro.csv";

  DisorderSpec disorder() const {
    DisorderSpec d;
    d.n_spins = n_spins;
    d.d_center = d_center_mhz;
    d.d_fwhm = d_fwhm_mhz;
    d.e_fwhm = e_fwhm_mhz;
    d.bz_fwhm = bz_fwhm_mhz;
    d.hyperfine = hyperfine_mhz;
    d.b_ext_mt = b_ext_mt;
    d.b_ext_axis = b_ext_axis;
    d.gamma_b = gamma_b_mhz;
    d.gamma_d = gamma_d_mhz;
    d.truncation = truncation_fwhm;
    d.master_seed = seed;
    return d;
  }

  FluxQubitParams qubit() const { return {gap_mhz, bias_mhz, gamma_c_mhz}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw ConfigError(ConfigError::Kind::TypeMismatch,
                      "key '" + key + "': expected a finite number, got '" + value + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-')
    throw ConfigError(ConfigError::Kind::TypeMismatch,
                      "key '" + key + "': expected a nonnegative integer, got '" + value + "'");
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(value.c_str(), &end, 0);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError(ConfigError::Kind::TypeMismatch,
                      "key '" + key + "': expected an integer, got '" + value + "'");
  return v;
}

inline std::array<double, 3> parse_axis(const std::string& key, const std::string& value) {
  static const std::map<std::string, std::array<double, 3>> named = {
      {"100", {{1, 0, 0}}}, {"010", {{0, 1, 0}}}, {"001", {{0, 0, 1}}},
      {"110", {{1, 1, 0}}}, {"101", {{1, 0, 1}}}, {"011", {{0, 1, 1}}},
      {"111", {{1, 1, 1}}}};
  auto it = named.find(value);
  if (it != named.end()) return it->second;
  std::array<double, 3> v{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = value.find(',', start);
    if ((i < 2) == (comma == std::string::npos))
      throw ConfigError(ConfigError::Kind::TypeMismatch,
                        "key '" + key + "': axis must be 100/110/111 or 'x,y,z'");
    const std::string tok = trim(value.substr(start, comma == std::string::npos
                                                         ? std::string::npos
                                                         : comma - start));
    v[i] = parse_double(key, tok);
    start = comma + 1;
  }
  if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0)
    throw ConfigError(ConfigError::Kind::InvalidValue, "key '" + key + "': axis must be nonzero");
  return v;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) {
    throw ConfigError(ConfigError::Kind::InvalidValue, msg);
  };
  if (c.n_spins < 1) fail("n_spins must be at least 1");
  if (c.d_fwhm_mhz < 0 || c.e_fwhm_mhz < 0 || c.bz_fwhm_mhz < 0)
    fail("FWHM values must be nonnegative");
  if (c.hyperfine_mhz < 0) fail("hyperfine_mhz must be nonnegative");
  if (c.b_ext_mt < 0) fail("b_ext_mt must be nonnegative");
  if (c.gamma_b_mhz < 0 || c.gamma_d_mhz < 0 || c.gamma_c_mhz < 0)
    fail("decay rates must be nonnegative");
  if (c.truncation_fwhm <= 0) fail("truncation_fwhm must be positive");
  if (c.gap_mhz <= 0) fail("gap_mhz must be positive");
  if (c.collective_coupling_mhz < 0) fail("collective_coupling_mhz must be nonnegative");
  if (c.dt_ns <= 0) fail("dt_ns must be positive");
  if (c.t_max_ns <= c.dt_ns) fail("t_max_ns must exceed dt_ns");
  if (c.n_realizations < 1) fail("n_realizations must be at least 1");
  if (c.output.empty()) fail("output must be a nonempty filename");
}

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool seed_seen = false;
  std::map<std::string, bool> seen;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigError::Kind::TypeMismatch,
                        "expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (seen[key])
      throw ConfigError(ConfigError::Kind::InvalidValue, "duplicate key '" + key + "'");
    seen[key] = true;

    if (key == "n_spins") cfg.n_spins = static_cast<std::size_t>(detail::parse_uint(key, value));
    else if (key == "d_center_mhz") cfg.d_center_mhz = detail::parse_double(key, value);
    else if (key == "d_fwhm_mhz") cfg.d_fwhm_mhz = detail::parse_double(key, value);
    else if (key == "e_fwhm_mhz") cfg.e_fwhm_mhz = detail::parse_double(key, value);
    else if (key == "bz_fwhm_mhz") cfg.bz_fwhm_mhz = detail::parse_double(key, value);
    else if (key == "hyperfine_mhz") cfg.hyperfine_mhz = detail::parse_double(key, value);
    else if (key == "b_ext_mt") cfg.b_ext_mt = detail::parse_double(key, value);
    else if (key == "b_ext_axis") {
      cfg.b_ext_axis = detail::parse_axis(key, value);
      cfg.b_ext_axis_token = value;
    } else if (key == "gamma_b_mhz") cfg.gamma_b_mhz = detail::parse_double(key, value);
    else if (key == "gamma_d_mhz") cfg.gamma_d_mhz = detail::parse_double(key, value);
    else if (key == "truncation_fwhm") cfg.truncation_fwhm = detail::parse_double(key, value);
    else if (key == "seed") { cfg.seed = detail::parse_uint(key, value); seed_seen = true; }
    else if (key == "gap_mhz") cfg.gap_mhz = detail::parse_double(key, value);
    else if (key == "bias_mhz") cfg.bias_mhz = detail::parse_double(key, value);
    else if (key == "gamma_c_mhz") cfg.gamma_c_mhz = detail::parse_double(key, value);
    else if (key == "collective_coupling_mhz")
      cfg.collective_coupling_mhz = detail::parse_double(key, value);
    else if (key == "delta_c_mhz") cfg.delta_c_mhz = detail::parse_double(key, value);
    else if (key == "frame_frequency_mhz")
      cfg.frame_frequency_mhz = detail::parse_double(key, value);
    else if (key == "t_max_ns") cfg.t_max_ns = detail::parse_double(key, value);
    else if (key == "dt_ns") cfg.dt_ns = detail::parse_double(key, value);
    else if (key == "n_realizations")
      cfg.n_realizations = static_cast<std::size_t>(detail::parse_uint(key, value));
    else if (key == "output") cfg.output = value;
    else
      throw ConfigError(ConfigError::Kind::UnknownKey, "unknown key '" + key + "'");
  }

  if (!seed_seen)
    throw ConfigError(ConfigError::Kind::MissingRequired,
                      "missing required key 'seed' (reproducibility contract)");
  validate(cfg);
  return cfg;
}

// Canonical text: fixed key order, shortest round-trip float formatting.
// Reparsing the serialization yields an equal RunConfig.
inline std::string serialize(const RunConfig& c) {
  std::string s;
  auto put = [&](const char* key, const std::string& value) {
    s += key;
    s += " = ";
    s += value;
    s += '\n';
  };
  put("n_spins", std::to_string(c.n_spins));
  put("d_center_mhz", detail::format_double(c.d_center_mhz));
  put("d_fwhm_mhz", detail::format_double(c.d_fwhm_mhz));
  put("e_fwhm_mhz", detail::format_double(c.e_fwhm_mhz));
  put("bz_fwhm_mhz", detail::format_double(c.bz_fwhm_mhz));
  put("hyperfine_mhz", detail::format_double(c.hyperfine_mhz));
  put("b_ext_mt", detail::format_double(c.b_ext_mt));
  put("b_ext_axis", c.b_ext_axis_token);
  put("gamma_b_mhz", detail::format_double(c.gamma_b_mhz));
  put("gamma_d_mhz", detail::format_double(c.gamma_d_mhz));
  put("truncation_fwhm", detail::format_double(c.truncation_fwhm));
  put("seed", std::to_string(c.seed));
  put("gap_mhz", detail::format_double(c.gap_mhz));
  put("bias_mhz", detail::format_double(c.bias_mhz));
  put("gamma_c_mhz", detail::format_double(c.gamma_c_mhz));
  put("collective_coupling_mhz", detail::format_double(c.collective_coupling_mhz));
  put("delta_c_mhz", detail::format_double(c.delta_c_mhz));
  if (!std::isnan(c.frame_frequency_mhz))
    put("frame_frequency_mhz", detail::format_double(c.frame_frequency_mhz));
  put("t_max_ns", detail::format_double(c.t_max_ns));
  put("dt_ns", detail::format_double(c.dt_ns));
  put("n_realizations", std::to_string(c.n_realizations));
  put("output", c.output);
  return s;
}

// FNV-1a over the canonical serialization; stamped into every CSV header.
inline std::uint64_t config_hash(const RunConfig& c) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : serialize(c)) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.n_spins == b.n_spins && same(a.d_center_mhz, b.d_center_mhz) &&
         same(a.d_fwhm_mhz, b.d_fwhm_mhz) && same(a.e_fwhm_mhz, b.e_fwhm_mhz) &&
         same(a.bz_fwhm_mhz, b.bz_fwhm_mhz) && same(a.hyperfine_mhz, b.hyperfine_mhz) &&
         same(a.b_ext_mt, b.b_ext_mt) && a.b_ext_axis == b.b_ext_axis &&
         same(a.gamma_b_mhz, b.gamma_b_mhz) && same(a.gamma_d_mhz, b.gamma_d_mhz) &&
         same(a.truncation_fwhm, b.truncation_fwhm) && a.seed == b.seed &&
         same(a.gap_mhz, b.gap_mhz) && same(a.bias_mhz, b.bias_mhz) &&
         same(a.gamma_c_mhz, b.gamma_c_mhz) &&
         same(a.collective_coupling_mhz, b.collective_coupling_mhz) &&
         same(a.delta_c_mhz, b.delta_c_mhz) &&
         same(a.frame_frequency_mhz, b.frame_frequency_mhz) &&
         same(a.t_max_ns, b.t_max_ns) && same(a.dt_ns, b.dt_ns) &&
         a.n_realizations == b.n_realizations && a.output == b.output;
}

}  // namespace fqnv
