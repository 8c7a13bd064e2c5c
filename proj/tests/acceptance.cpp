// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
//   acceptance <path-to-ghzn-cli> <scratch-dir>

#include "ghzn/analysis.hpp"
#include "ghzn/beamline.hpp"
#include "ghzn/experiment.hpp"
#include "ghzn/ghz_logic.hpp"
#include "ghzn/noise.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace ghzn;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << name << ": " << detail << std::endl;
  if (!pass) ++g_failures;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double mean_of(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

void ac1_eigenrelations() {
  const auto rep = check_eigenrelations(ghz_state(GhzSign::minus), GhzSign::minus, 1e-12);
  const bool signs = rep.relations[0].expected == 1 && rep.relations[1].expected == 1 && rep.relations[2].expected == 1 &&
                     rep.relations[3].expected == -1;
  report(1, "GHZ eigenrelations", rep.all_hold() && signs && rep.max_residual() < 1e-12,
         "A_i -> +1, xxx -> -1, max residual = " + num(rep.max_residual()) + " (< 1e-12)");
}

void ac2_nchv() {
  const auto r = enumerate_nchv();
  const bool pass = r.total == 64 && r.satisfying == 0 && r.parity_always_plus && r.max_abs_mermin == 2;
  report(2, "NCHV impossibility", pass,
         "satisfying " + std::to_string(r.satisfying) + "/" + std::to_string(r.total) + ", LHS product +1 always: " +
             (r.parity_always_plus ? "yes" : "no") + ", classical max |M| = " + std::to_string(r.max_abs_mermin));
}

void ac3_quantum_bound() {
  const double top = eigenvalues(mermin_operator()).maxCoeff();
  const double ghz = mermin_value(densify(ghz_state(GhzSign::plus)));
  report(3, "Quantum bound", std::abs(top - 4) < 1e-9 && std::abs(ghz - 4) < 1e-9,
         "largest eigenvalue = " + num(top) + ", <M> on ghz(plus) = " + num(ghz) + " (tol 1e-9)");
}

void ac4_headline() {
  RunConfig cfg;  // V = 0.6395
  const double m = run_mermin_experiment(cfg, true).report.m;
  cfg.visibility = 1.0;
  const double m1 = run_mermin_experiment(cfg, true).report.m;
  report(4, "Headline M (noiseless pipeline)", std::abs(m - 2.558) < 1e-3 && std::abs(m1 - 4.0) < 1e-6,
         "V=0.6395 -> M = " + num(m) + " (2.558 +/- 1e-3); V=1 -> M = " + num(m1) + " (4 +/- 1e-6)");
}

void ac5_arithmetic() {
  const double vals[4] = {0.659, -0.632, -0.603, -0.664};
  std::array<ExpectationEstimate, 4> est;
  for (std::size_t k = 0; k < 4; ++k) {
    est[k].term = kMerminTerms[k];
    est[k].value = vals[k];
    est[k].sigma = 0.002;
  }
  const auto r = mermin_from_expectations(est);
  report(5, "Reported values -> M", std::abs(r.m - 2.558) < 1e-12 && std::abs(r.sigma_m - 0.004) < 1e-12,
         "M = " + num(r.m) + ", sigma_M = " + num(r.sigma_m) + " (2.558, 0.004; float tol 1e-12)");
}

void ac6_oracle_equivalence() {
  std::mt19937_64 rng(20240606);
  std::uniform_real_distribution<double> uv(0.0, 1.0), up(0.0, 2 * kPi);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    RunConfig cfg;
    cfg.visibility = uv(rng);
    cfg.rf_phase = up(rng);
    const auto res = run_mermin_experiment(cfg, true);
    const auto rho = experiment_state(cfg);
    for (std::size_t k = 0; k < 4; ++k) {
      const double exact = expectation(rho, term_observable(kMerminTerms[k]));
      worst = std::max(worst, std::abs(res.report.estimates[k].value - exact));
    }
  }
  report(6, "Oracle equivalence", worst < 1e-6, "20 random (V, rf_phase): max |E_pipeline - tr(rho sss)| = " + num(worst));
}

void ac7_statistics() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> ms, sigmas;
  for (int rep = 0; rep < 200; ++rep) {
    RunConfig cfg;
    cfg.counts_per_point = 250;
    cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
    const auto r = run_mermin_experiment(cfg, false).report;
    ms.push_back(r.m);
    sigmas.push_back(r.sigma_m);
  }
  const double emp = stddev_of(ms);
  const double rep_sigma = mean_of(sigmas);
  const double ratio = emp / rep_sigma;

  // sigma_M versus counts over a 16x range, least-squares slope in log-log.
  const std::vector<std::int64_t> counts{100, 200, 400, 800, 1600};
  std::vector<double> lx, ly;
  for (auto c : counts) {
    std::vector<double> s;
    for (int rep = 0; rep < 20; ++rep) {
      RunConfig cfg;
      cfg.counts_per_point = c;
      cfg.seed = 5000 + static_cast<std::uint64_t>(rep);
      s.push_back(run_mermin_experiment(cfg, false).report.sigma_m);
    }
    lx.push_back(std::log(static_cast<double>(c)));
    ly.push_back(std::log(mean_of(s)));
  }
  const double mx = mean_of(lx), my = mean_of(ly);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  report(7, "Statistical calibration", std::abs(ratio - 1) <= 0.25 && std::abs(slope + 0.5) <= 0.05 && secs < 60,
         "std(M) = " + num(emp) + " vs sigma_M = " + num(rep_sigma) + " (ratio " + num(ratio) +
             ", within 25%), slope = " + num(slope) + " (-0.5 +/- 0.05), runtime " + num(secs) + " s (< 60)");
}

void ac8_fit_recovery() {
  ScanResult clean;
  for (double chi : equally_spaced_chi(16)) clean.points.push_back(ScanPoint::from_counts(chi, 250 + 160 * std::cos(chi + 0.7)));
  const auto f = fit_sinusoid(clean);
  const double err = std::max({std::abs(f.offset - 250), std::abs(f.amplitude - 160), std::abs(f.phase - 0.7)});

  std::vector<double> p0, p1, p2;
  for (int t = 0; t < 500; ++t) {
    RngStream rng(777, static_cast<std::uint64_t>(t));
    ScanResult s;
    for (double chi : equally_spaced_chi(16)) {
      s.points.push_back(ScanPoint::from_counts(chi, static_cast<double>(rng.poisson(250 + 160 * std::cos(chi + 0.7)))));
    }
    const auto fit = fit_sinusoid(s);
    p0.push_back((fit.offset - 250) / fit.offset_sigma());
    p1.push_back((fit.amplitude - 160) / fit.amplitude_sigma());
    p2.push_back(std::remainder(fit.phase - 0.7, 2 * kPi) / fit.phase_sigma());
  }
  bool unbiased = true;
  std::string detail;
  for (const auto* p : {&p0, &p1, &p2}) {
    const double se = stddev_of(*p) / std::sqrt(500.0);
    const double m = mean_of(*p);
    unbiased = unbiased && std::abs(m) < 2 * se;
    detail += num(m) + "/" + num(2 * se) + " ";
  }
  report(8, "Fit recovery", err < 1e-9 && unbiased,
         "noiseless max error = " + num(err) + " (< 1e-9); pull means vs 2 s.e. (a0, a1, phi0): " + detail);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void ac9_determinism(const std::string& cli, const std::filesystem::path& dir) {
  const auto cfg = dir / "acceptance_run.cfg";
  {
    std::ofstream out(cfg);
    out << "visibility = 0.6395\ncounts_per_point = 250\nrepeats = 4\nseed = 424242\n";
  }
  const auto a = dir / "acceptance_mermin_a.txt", b = dir / "acceptance_mermin_b.txt";
  const auto ca = dir / "acceptance_scan_a.csv", cb = dir / "acceptance_scan_b.csv";
  const int rc = run_cli(cli, "mermin --config " + cfg.string() + " -o " + a.string()) +
                 run_cli(cli, "mermin --config " + cfg.string() + " -o " + b.string()) +
                 run_cli(cli, "scan --alpha 1.5707963267948966 --gamma 0 --config " + cfg.string() + " -o " + ca.string()) +
                 run_cli(cli, "scan --alpha 1.5707963267948966 --gamma 0 --config " + cfg.string() + " -o " + cb.string());
  const auto ra = slurp(a), rb = slurp(b);
  const bool same = rc == 0 && !ra.empty() && ra == rb && !slurp(ca).empty() && slurp(ca) == slurp(cb);
  report(9, "Determinism", same,
         "two `mermin` runs (seed 424242): " + std::string(ra == rb && !ra.empty() ? "byte-identical" : "DIFFER") +
             ", " + std::to_string(ra.size()) + " bytes; scan CSVs " + (slurp(ca) == slurp(cb) ? "identical" : "DIFFER"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <ghzn-cli> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path dir = argv[2];

  const std::vector<void (*)()> checks{ac1_eigenrelations, ac2_nchv,  ac3_quantum_bound, ac4_headline,
                                       ac5_arithmetic,     ac6_oracle_equivalence, ac7_statistics, ac8_fit_recovery};
  for (auto* check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      std::cout << "[FAIL] exception: " << e.what() << std::endl;
      ++g_failures;
    }
  }
  try {
    ac9_determinism(cli, dir);
  } catch (const std::exception& e) {
    std::cout << "[FAIL] AC9 exception: " << e.what() << std::endl;
    ++g_failures;
  }

  std::cout << (g_failures == 0 ? "all acceptance criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
