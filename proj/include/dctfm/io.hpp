#pragma once

// Sweep CSV (the interface consumed by the plotting scripts) and the
// key = value configuration format shared by the CLI.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dctfm/experiment.hpp"

namespace dctfm {

inline constexpr std::string_view kSweepCsvHeader =
    "scheme,power_db,trials,mse_emp,mse_emp_stderr,mse_pred,pdet_k1,pdet_k3,pdet_k5,mean_kprime";

/// Shortest representation that parses back to the same double; "nan" for NaN.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return x;
}

inline std::uint64_t parse_unsigned(std::string_view s) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a non-negative integer: '" + std::string(s) + "'");
  return x;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : result.rows) {
    os << to_string(r.scheme) << ',' << format_double(r.power_db) << ',' << r.trials << ','
       << format_double(r.mse_emp) << ',' << format_double(r.mse_emp_stderr) << ',' << format_double(r.mse_pred);
    for (double p : r.pdet) os << ',' << format_double(p);
    os << ',' << format_double(r.mean_kprime) << '\n';
  }
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Reads a sweep CSV back; histograms are not stored in the file.
inline SweepResult read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kSweepCsvHeader)
    throw std::runtime_error("sweep csv: missing or unexpected header");
  SweepResult result;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 10) throw std::runtime_error("sweep csv: line " + std::to_string(lineno) + " has wrong field count");
    SweepRow r;
    const auto scheme = parse_sweep_scheme(f[0]);
    if (!scheme) throw std::runtime_error("sweep csv: unknown scheme '" + std::string(f[0]) + "'");
    r.scheme = *scheme;
    r.power_db = parse_double(f[1]);
    r.trials = parse_unsigned(f[2]);
    r.mse_emp = parse_double(f[3]);
    r.mse_emp_stderr = parse_double(f[4]);
    r.mse_pred = parse_double(f[5]);
    for (std::size_t j = 0; j < 3; ++j) r.pdet[j] = parse_double(f[6 + j]);
    r.mean_kprime = parse_double(f[9]);
    result.rows.push_back(std::move(r));
  }
  return result;
}

inline void write_sweep_csv_file(const std::string& path, const SweepResult& result) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_sweep_csv(os, result);
}

inline SweepResult read_sweep_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_sweep_csv(is);
}

/// Parses "start:step:stop" or a comma-separated list of dB values.
inline std::vector<double> parse_power_grid(std::string_view s) {
  if (s.find(':') != std::string_view::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw std::invalid_argument("power grid must be start:step:stop");
    return power_grid(parse_double(trim(parts[0])), parse_double(trim(parts[1])), parse_double(trim(parts[2])));
  }
  std::vector<double> out;
  for (auto p : split(s, ',')) out.push_back(parse_double(trim(p)));
  return out;
}

/// uniform_random_m | sweep_all_m | fixed_m(<m>)
inline MeasurementPolicy parse_measurement_policy(std::string_view s) {
  if (s == "uniform_random_m") return {MeasurementPolicy::Kind::uniform_random, 0};
  if (s == "sweep_all_m") return {MeasurementPolicy::Kind::sweep_all, 0};
  if (s.starts_with("fixed_m(") && s.ends_with(")"))
    return {MeasurementPolicy::Kind::fixed, parse_unsigned(s.substr(8, s.size() - 9))};
  throw std::invalid_argument("unknown measurement policy '" + std::string(s) + "'");
}

inline bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(s) + "'");
}

/// Applies one configuration key. Unknown keys are errors.
inline void apply_setting(SweepConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "function") {
    const auto kind = parse_function_kind(value);
    if (!kind) throw std::invalid_argument("unknown function '" + std::string(value) + "'");
    c.function = *kind;
  } else if (key == "n") {
    c.n = parse_unsigned(value);
  } else if (key == "alpha") {
    c.alpha = parse_double(value);
  } else if (key == "power_db_grid") {
    c.power_db_grid = parse_power_grid(value);
  } else if (key == "sigma2_db") {
    c.sigma2_db = parse_double(value);
  } else if (key == "trials") {
    c.trials = parse_unsigned(value);
  } else if (key == "first_trial") {
    c.first_trial = parse_unsigned(value);
  } else if (key == "threshold_multiplier") {
    c.threshold_multiplier = parse_double(value);
  } else if (key == "schemes") {
    c.schemes.clear();
    for (auto s : split(value, ',')) {
      const auto scheme = parse_sweep_scheme(trim(s));
      if (!scheme) throw std::invalid_argument("unknown scheme '" + std::string(trim(s)) + "'");
      c.schemes.push_back(*scheme);
    }
  } else if (key == "seed") {
    c.seed = parse_unsigned(value);
  } else if (key == "measurement_policy") {
    c.policy = parse_measurement_policy(value);
  } else if (key == "dsb_epsilon") {
    c.dsb_epsilon = parse_double(value);
  } else if (key == "dsb_carrier") {
    c.dsb_carrier = parse_unsigned(value);
  } else if (key == "chirp_f_mod") {
    c.chirp_f_mod = parse_double(value);
  } else if (key == "steepness") {
    c.params.steepness = parse_double(value);
  } else if (key == "peak") {
    c.params.peak = parse_double(value);
  } else if (key == "f_max") {
    c.params.f_max = parse_double(value);
  } else if (key == "centering") {
    if (value == "grid_midpoint") c.params.centering = Centering::grid_midpoint;
    else if (value == "half_n") c.params.centering = Centering::half_n;
    else throw std::invalid_argument("unknown centering '" + std::string(value) + "'");
  } else {
    throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
  }
}

/// key = value lines; '#' starts a comment.
inline void apply_config(SweepConfig& c, std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    try {
      apply_setting(c, trim(v.substr(0, eq)), v.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline SweepConfig load_config_file(const std::string& path, SweepConfig base = {}) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config '" + path + "'");
  apply_config(base, is);
  return base;
}

}  // namespace dctfm
