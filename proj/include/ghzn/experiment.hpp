// End-to-end simulation of the 16-scan Mermin measurement: state
// preparation, contrast loss, chi-scans with counting noise, fits,
// extraction and the Mermin sum.

#pragma once

#include "ghzn/analysis.hpp"
#include "ghzn/beamline.hpp"
#include "ghzn/ghz_logic.hpp"
#include "ghzn/noise.hpp"
#include "ghzn/run_config.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ghzn {

inline constexpr int kPhaseSteps = 4;
inline constexpr int kScanSettings = kPhaseSteps * kPhaseSteps;

/// Setting index = 4 * (alpha / (pi/2)) + gamma / (pi/2).
struct ScanSetting {
  int alpha_step = 0;
  int gamma_step = 0;

  int index() const { return kPhaseSteps * alpha_step + gamma_step; }
  double alpha() const { return alpha_step * 0.5 * kPi; }
  double gamma() const { return gamma_step * 0.5 * kPi; }

  static ScanSetting from_index(int i) { return {i / kPhaseSteps, i % kPhaseSteps}; }
};

/// The ensemble state the apparatus sees: prepared GHZ-like state with its
/// three-fold coherence scaled by the visibility.
inline DensityMatrix experiment_state(const RunConfig& cfg) {
  BeamlineConfig beam;
  beam.rf_phase = cfg.rf_phase;
  beam.source_rate = 8.0 * static_cast<double>(cfg.counts_per_point);
  return ghz_dephase(densify(prepare_neutron_ghz(beam)), cfg.visibility);
}

inline std::uint64_t stream_id_for(int setting_index, std::int64_t repeat, std::int64_t repeats) {
  return static_cast<std::uint64_t>(setting_index) * static_cast<std::uint64_t>(repeats) +
         static_cast<std::uint64_t>(repeat);
}

struct SimulatedScan {
  ScanResult data;
  std::vector<double> expected;  // noiseless intensity at each chi
};

/// Expected intensities on the plan's grid, then either Poisson counts drawn
/// from `rng` or, in noiseless mode, the expectations themselves.
inline SimulatedScan simulate_scan(const ScanPlan& plan, const DensityMatrix& rho, RngStream* rng,
                                   std::size_t scan_id = 0) {
  const auto curve = ideal_intensity_curve(plan, rho);
  SimulatedScan out;
  out.data.scan_id = scan_id;
  out.data.alpha = plan.alpha;
  out.data.gamma = plan.gamma;
  out.data.points.reserve(curve.size());
  out.expected.reserve(curve.size());
  for (const auto& pt : curve) {
    const double counts = rng ? static_cast<double>(rng->poisson(pt.expected_intensity)) : pt.expected_intensity;
    out.data.points.push_back(ScanPoint::from_counts(pt.chi, counts));
    out.expected.push_back(pt.expected_intensity);
  }
  return out;
}

inline ScanPlan make_scan_plan(const RunConfig& cfg, double alpha, double gamma) {
  ScanPlan plan;
  plan.alpha = alpha;
  plan.gamma = gamma;
  plan.chi_grid = equally_spaced_chi(static_cast<std::size_t>(cfg.points_per_scan));
  plan.counts_per_point = cfg.counts_per_point;
  plan.visibility = cfg.visibility;
  plan.seed = cfg.seed;
  return plan;
}

struct ExperimentResult {
  std::vector<SimulatedScan> scans;  // setting-major, then repeat
  std::vector<FittedScan> fits;
  MerminReport report;
};

/// Runs all 16 (alpha, gamma) settings times `repeats`. Scan ids equal the
/// RNG stream ids: setting_index * repeats + repeat.
inline ExperimentResult run_mermin_experiment(const RunConfig& cfg, bool noiseless, const FitOptions& fit_options = {}) {
  cfg.validate();
  const DensityMatrix rho = experiment_state(cfg);

  ExperimentResult result;
  result.scans.reserve(static_cast<std::size_t>(kScanSettings * cfg.repeats));
  for (int s = 0; s < kScanSettings; ++s) {
    const auto setting = ScanSetting::from_index(s);
    const ScanPlan plan = make_scan_plan(cfg, setting.alpha(), setting.gamma());
    for (std::int64_t r = 0; r < cfg.repeats; ++r) {
      const auto id = stream_id_for(s, r, cfg.repeats);
      if (noiseless) {
        result.scans.push_back(simulate_scan(plan, rho, nullptr, id));
      } else {
        RngStream rng(cfg.seed, id);
        result.scans.push_back(simulate_scan(plan, rho, &rng, id));
      }
    }
  }

  result.fits.reserve(result.scans.size());
  for (const auto& scan : result.scans) {
    try {
      result.fits.push_back({scan.data.scan_id, scan.data.alpha, scan.data.gamma, fit_sinusoid(scan.data, fit_options)});
    } catch (const FitError& e) {
      throw AnalysisError("scan " + std::to_string(scan.data.scan_id) + ": " + e.what());
    }
  }

  std::array<ExpectationEstimate, 4> estimates;
  for (std::size_t k = 0; k < kMerminTerms.size(); ++k) {
    estimates[k] = extract_expectation(result.fits, kMerminTerms[k]);
  }
  result.report = mermin_from_expectations(estimates, cfg.significance_k);
  return result;
}

}  // namespace ghzn
