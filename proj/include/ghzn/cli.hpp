// Subcommand implementations behind the `ghzn` executable. Each returns a
// process exit code and writes human-readable progress to `log`.

#pragma once

#include "ghzn/experiment.hpp"
#include "ghzn/format.hpp"
#include "ghzn/ghz_logic.hpp"
#include "ghzn/report.hpp"
#include "ghzn/run_config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace ghzn::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kInvalidArguments = 2,
  kIoError = 3,
};

inline bool write_file(const std::string& path, const std::string& content, std::ostream& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    log << "error: cannot open '" << path << "' for writing\n";
    return false;
  }
  out << content;
  out.flush();
  if (!out) {
    log << "error: failed writing '" << path << "'\n";
    return false;
  }
  return true;
}

inline int cmd_ghz_check(std::ostream& out) {
  bool ok = true;
  for (GhzSign sign : {GhzSign::minus, GhzSign::plus}) {
    const auto rep = check_eigenrelations(ghz_state(sign), sign);
    out << "ghz(" << to_string(sign) << ") eigenrelations:\n";
    for (const auto& rel : rep.relations) {
      out << "  " << rel.label << " -> " << (rel.expected > 0 ? "+1" : "-1") << "  residual = " << fmt::shortest(rel.residual)
          << (rel.holds ? "  ok" : "  FAILED") << '\n';
    }
    ok = ok && rep.all_hold();
  }

  const auto nchv = enumerate_nchv();
  out << "satisfying assignments: " << nchv.satisfying << "/" << nchv.total << '\n';
  out << "left-hand-side product +1 for every assignment: " << (nchv.parity_always_plus ? "yes" : "no") << '\n';
  out << "classical max |M| = " << nchv.max_abs_mermin << '\n';
  ok = ok && nchv.total == kNchvAssignments && nchv.satisfying == 0 && nchv.parity_always_plus && nchv.max_abs_mermin == 2;

  const double quantum_max = eigenvalues(mermin_operator()).maxCoeff();
  const double ghz_m = mermin_value(densify(ghz_state(GhzSign::plus)));
  out << "quantum max = " << fmt::shortest(std::round(quantum_max * 1e9) / 1e9) << '\n';
  out << "M on ghz(plus) = " << fmt::shortest(std::round(ghz_m * 1e9) / 1e9) << '\n';
  ok = ok && std::abs(quantum_max - 4.0) < 1e-9 && std::abs(ghz_m - 4.0) < 1e-9;

  out << (ok ? "all checks passed\n" : "CHECK FAILED\n");
  return ok ? kSuccess : kCheckFailed;
}

inline std::string scan_csv(const SimulatedScan& scan) {
  std::string csv = "chi_rad,expected_intensity,counts,count_error\n";
  for (std::size_t i = 0; i < scan.data.points.size(); ++i) {
    const auto& p = scan.data.points[i];
    csv += fmt::sig17(p.chi);
    csv += ',';
    csv += fmt::sig17(scan.expected[i]);
    csv += ',';
    csv += fmt::sig17(p.counts);
    csv += ',';
    csv += fmt::sig17(p.count_error);
    csv += '\n';
  }
  return csv;
}

/// Simulates one chi-scan. On the 16-setting grid the RNG stream matches
/// repeat 0 of that setting in `mermin`; off-grid settings use stream 0.
inline SimulatedScan simulate_single_scan(double alpha, double gamma, const RunConfig& cfg, bool noiseless) {
  cfg.validate();
  const DensityMatrix rho = experiment_state(cfg);
  const ScanPlan plan = make_scan_plan(cfg, alpha, gamma);
  std::uint64_t stream = 0;
  if (const auto qa = quarter_turn_index(alpha), qg = quarter_turn_index(gamma); qa && qg) {
    stream = stream_id_for(ScanSetting{*qa, *qg}.index(), 0, cfg.repeats);
  }
  if (noiseless) return simulate_scan(plan, rho, nullptr, stream);
  RngStream rng(cfg.seed, stream);
  return simulate_scan(plan, rho, &rng, stream);
}

inline int cmd_scan(double alpha, double gamma, const RunConfig& cfg, bool noiseless, const std::string& output,
                    std::ostream& log) {
  if (!std::isfinite(alpha) || !std::isfinite(gamma)) {
    log << "error: alpha and gamma must be finite\n";
    return kInvalidArguments;
  }
  SimulatedScan scan;
  try {
    scan = simulate_single_scan(alpha, gamma, cfg, noiseless);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kInvalidArguments;
  }
  if (!write_file(output, scan_csv(scan), log)) return kIoError;
  log << "wrote " << scan.data.points.size() << " points to " << output << '\n';
  return kSuccess;
}

inline int cmd_mermin(const RunConfig& cfg, bool noiseless, const std::string& output, std::ostream& log,
                      const std::string& timestamp = "none") {
  ExperimentResult result;
  try {
    result = run_mermin_experiment(cfg, noiseless);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const AnalysisError& e) {
    log << "analysis error: " << e.what() << '\n';
    return kCheckFailed;
  }
  const Report report = make_report(result.report, cfg, noiseless, timestamp);
  log << format_report_text(report);
  if (!write_file(output, serialize_report(report), log)) return kIoError;
  return kSuccess;
}

}  // namespace ghzn::cli
