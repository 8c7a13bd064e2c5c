// ghzn: GHZ contradiction check, chi-scan simulation and the full Mermin run.
//
//   ghzn ghz-check
//   ghzn scan --alpha R --gamma R [--noiseless] -o FILE
//   ghzn mermin [--noiseless] [--visibility V] [--seed N] -o FILE
//
// Every subcommand accepts --config FILE (flat `key = value`).

#include "ghzn/cli.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<double> visibility;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Run configuration file (key = value)");
}

void add_overrides(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--visibility", opts.visibility, "Fringe visibility in [0, 1]");
  cmd->add_option("--seed", opts.seed, "RNG seed");
}

ghzn::RunConfig resolve_config(const CommonOptions& opts) {
  ghzn::RunConfig cfg;
  if (!opts.config_path.empty()) cfg = ghzn::load_run_config(opts.config_path);
  if (opts.visibility) cfg.visibility = *opts.visibility;
  if (opts.seed) cfg.seed = *opts.seed;
  cfg.validate();
  return cfg;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ghzn::cli;

  CLI::App app{"Single-neutron GHZ simulator and Mermin analysis"};
  app.require_subcommand(1);

  CommonOptions check_opts;
  auto* check = app.add_subcommand("ghz-check", "Eigenrelations and exhaustive noncontextual enumeration");
  add_common(check, check_opts);

  CommonOptions scan_opts;
  double alpha = 0.0, gamma = 0.0;
  bool scan_noiseless = false;
  std::string scan_out;
  auto* scan = app.add_subcommand("scan", "Simulate one chi-scan and write CSV");
  add_common(scan, scan_opts);
  add_overrides(scan, scan_opts);
  scan->add_option("--alpha", alpha, "Spin phase (rad)")->required();
  scan->add_option("--gamma", gamma, "Energy phase (rad)")->required();
  scan->add_flag("--noiseless", scan_noiseless, "Write expected intensities instead of Poisson counts");
  scan->add_option("-o,--output", scan_out, "Output CSV path")->required();

  CommonOptions mermin_opts;
  bool mermin_noiseless = false;
  bool with_timestamp = false;
  std::string mermin_out;
  auto* mermin = app.add_subcommand("mermin", "Run all 16 scan settings and evaluate M");
  add_common(mermin, mermin_opts);
  add_overrides(mermin, mermin_opts);
  mermin->add_flag("--noiseless", mermin_noiseless, "Skip counting noise");
  mermin->add_flag("--timestamp", with_timestamp, "Record the wall-clock time in the report");
  mermin->add_option("-o,--output", mermin_out, "Report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidArguments;
  }

  CommonOptions* active = check->parsed() ? &check_opts : scan->parsed() ? &scan_opts : &mermin_opts;
  ghzn::RunConfig cfg;
  try {
    cfg = resolve_config(*active);
  } catch (const ghzn::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }

  if (check->parsed()) return cmd_ghz_check(std::cout);
  if (scan->parsed()) return cmd_scan(alpha, gamma, cfg, scan_noiseless, scan_out, std::cerr);
  return cmd_mermin(cfg, mermin_noiseless, mermin_out, std::cout, with_timestamp ? utc_timestamp() : "none");
}
