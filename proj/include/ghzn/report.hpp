// Mermin run report: human-readable summary (as `#` lines) followed by a
// machine-readable `key = value` block. Parsing ignores the comment lines.

#pragma once

#include "ghzn/analysis.hpp"
#include "ghzn/format.hpp"
#include "ghzn/ghz_logic.hpp"
#include "ghzn/run_config.hpp"

#include <array>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ghzn {

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReportEntry {
  std::string label;
  double value = 0.0;
  double sigma = 0.0;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct Report {
  std::array<ReportEntry, 4> entries;  // xxx, xyy, yxy, yyx
  double m = 0.0;
  double sigma_m = 0.0;
  double nchv_bound = MerminReport::kNchvBound;
  double quantum_bound = MerminReport::kQuantumBound;
  double significance_k = 3.0;
  bool violated = false;
  std::string mode = "noisy";
  RunConfig config;
  std::string timestamp = "none";

  /// Signed Mermin sum recomputed from the entries.
  double recomputed_m() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) sum += kMerminTerms[k].sign * entries[k].value;
    return sum;
  }

  friend bool operator==(const Report&, const Report&) = default;
};

inline Report make_report(const MerminReport& mr, const RunConfig& cfg, bool noiseless, std::string timestamp = "none") {
  Report r;
  for (std::size_t k = 0; k < 4; ++k) {
    r.entries[k] = {kMerminTerms[k].label(), mr.estimates[k].value, mr.estimates[k].sigma};
  }
  r.m = mr.m;
  r.sigma_m = mr.sigma_m;
  r.significance_k = mr.significance_k;
  r.violated = mr.nchv_violated;
  r.mode = noiseless ? "noiseless" : "noisy";
  r.config = cfg;
  r.timestamp = std::move(timestamp);
  return r;
}

namespace detail {

inline std::string fixed(double v, int digits, bool plus_sign = false) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  std::string s(buf, res.ptr);
  if (plus_sign && v >= 0.0) s.insert(s.begin(), '+');
  return s;
}

}  // namespace detail

inline std::string format_report_text(const Report& r) {
  std::ostringstream out;
  out << "Mermin test on the GHZ-like spin/path/energy state (" << r.mode << ")\n";
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& e = r.entries[k];
    out << "  E[" << e.label << "] = " << detail::fixed(e.value, 5, true) << " +/- " << detail::fixed(e.sigma, 5)
        << '\n';
  }
  out << "  M = " << detail::fixed(r.m, 5) << " +/- " << detail::fixed(r.sigma_m, 5) << "  (noncontextual bound "
      << fmt::shortest(r.nchv_bound) << ", quantum bound " << fmt::shortest(r.quantum_bound) << ")\n";
  out << "  verdict: "
      << (r.violated ? "noncontextual bound violated" : "no violation at the requested significance") << " (|M| vs "
      << fmt::shortest(r.nchv_bound) << " + " << fmt::shortest(r.significance_k) << " sigma_M)\n";
  return out.str();
}

inline std::string serialize_report(const Report& r) {
  std::ostringstream out;
  std::istringstream text(format_report_text(r));
  for (std::string line; std::getline(text, line);) out << "# " << line << '\n';
  for (const auto& e : r.entries) {
    out << "expectation." << e.label << ".value = " << fmt::shortest(e.value) << '\n';
    out << "expectation." << e.label << ".sigma = " << fmt::shortest(e.sigma) << '\n';
  }
  out << "M = " << fmt::shortest(r.m) << '\n'
      << "sigma_M = " << fmt::shortest(r.sigma_m) << '\n'
      << "nchv_bound = " << fmt::shortest(r.nchv_bound) << '\n'
      << "quantum_bound = " << fmt::shortest(r.quantum_bound) << '\n'
      << "significance_k = " << fmt::shortest(r.significance_k) << '\n'
      << "verdict = " << (r.violated ? "violated" : "not_violated") << '\n'
      << "mode = " << r.mode << '\n';
  std::istringstream cfg(write_run_config(r.config));
  for (std::string line; std::getline(cfg, line);) out << "config." << line << '\n';
  out << "timestamp = " << r.timestamp << '\n';
  return out.str();
}

inline Report parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto line = fmt::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ReportParseError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key(fmt::trim(line.substr(0, eq)));
    if (!kv.emplace(key, std::string(fmt::trim(line.substr(eq + 1)))).second) {
      throw ReportParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  auto take = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ReportParseError("missing key '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_double = [&](const std::string& key) {
    const auto v = fmt::parse_number<double>(take(key));
    if (!v) throw ReportParseError("invalid number for '" + key + "'");
    return *v;
  };

  Report r;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string label = kMerminTerms[k].label();
    r.entries[k] = {label, take_double("expectation." + label + ".value"), take_double("expectation." + label + ".sigma")};
  }
  r.m = take_double("M");
  r.sigma_m = take_double("sigma_M");
  r.nchv_bound = take_double("nchv_bound");
  r.quantum_bound = take_double("quantum_bound");
  r.significance_k = take_double("significance_k");
  const auto verdict = take("verdict");
  if (verdict != "violated" && verdict != "not_violated") throw ReportParseError("invalid verdict '" + verdict + "'");
  r.violated = verdict == "violated";
  r.mode = take("mode");
  r.timestamp = take("timestamp");

  std::ostringstream cfg_text;
  for (auto it = kv.begin(); it != kv.end();) {
    if (it->first.rfind("config.", 0) == 0) {
      cfg_text << it->first.substr(7) << " = " << it->second << '\n';
      it = kv.erase(it);
    } else {
      ++it;
    }
  }
  if (!kv.empty()) throw ReportParseError("unknown key '" + kv.begin()->first + "'");
  try {
    r.config = parse_run_config(cfg_text.str());
  } catch (const ConfigError& e) {
    throw ReportParseError(std::string("config echo: ") + e.what());
  }
  return r;
}

}  // namespace ghzn
