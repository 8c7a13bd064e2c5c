// Run configuration: flat `key = value` text with `#` comments.

#pragma once

#include "ghzn/format.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ghzn {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  double visibility = 0.6395;
  std::int64_t counts_per_point = 250;
  std::int64_t points_per_scan = 32;
  std::int64_t repeats = 4;
  std::uint64_t seed = 1;
  double rf_phase = 0.0;
  double significance_k = 3.0;

  void validate() const {
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw ConfigError("visibility must lie in [0, 1]");
    if (counts_per_point < 1) throw ConfigError("counts_per_point must be >= 1");
    if (points_per_scan < 5) throw ConfigError("points_per_scan must be >= 5");
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (!std::isfinite(rf_phase)) throw ConfigError("rf_phase must be finite");
    if (!(significance_k >= 0.0) || !std::isfinite(significance_k)) {
      throw ConfigError("significance_k must be finite and non-negative");
    }
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

template <typename T>
T parse_config_value(std::string_view key, std::string_view text, int line) {
  const auto v = fmt::parse_number<T>(text);
  if (!v) throw ConfigError("invalid value for '" + std::string(key) + "': '" + std::string(text) + "'", line);
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(*v)) throw ConfigError("non-finite value for '" + std::string(key) + "'", line);
  }
  return *v;
}

}  // namespace detail

/// Applies one `key = value` pair. Unknown keys raise ConfigError.
inline void set_config_key(RunConfig& cfg, std::string_view key, std::string_view value, int line = 0) {
  using detail::parse_config_value;
  if (key == "visibility") cfg.visibility = parse_config_value<double>(key, value, line);
  else if (key == "counts_per_point") cfg.counts_per_point = parse_config_value<std::int64_t>(key, value, line);
  else if (key == "points_per_scan") cfg.points_per_scan = parse_config_value<std::int64_t>(key, value, line);
  else if (key == "repeats") cfg.repeats = parse_config_value<std::int64_t>(key, value, line);
  else if (key == "seed") cfg.seed = parse_config_value<std::uint64_t>(key, value, line);
  else if (key == "rf_phase") cfg.rf_phase = parse_config_value<double>(key, value, line);
  else if (key == "significance_k") cfg.significance_k = parse_config_value<double>(key, value, line);
  else throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

/// Parses a configuration; keys not present keep their defaults. Range
/// violations are reported with the line that set the offending key.
inline RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = fmt::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const auto key = fmt::trim(line.substr(0, eq));
    const auto value = fmt::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    set_config_key(cfg, key, value, line_no);
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_no);
    }
  }
  cfg.validate();
  return cfg;
}

inline RunConfig parse_run_config(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

inline std::string write_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "visibility = " << fmt::shortest(cfg.visibility) << '\n'
      << "counts_per_point = " << cfg.counts_per_point << '\n'
      << "points_per_scan = " << cfg.points_per_scan << '\n'
      << "repeats = " << cfg.repeats << '\n'
      << "seed = " << cfg.seed << '\n'
      << "rf_phase = " << fmt::shortest(cfg.rf_phase) << '\n'
      << "significance_k = " << fmt::shortest(cfg.significance_k) << '\n';
  return out.str();
}

}  // namespace ghzn
