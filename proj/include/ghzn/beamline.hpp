// The interferometer as an effective circuit: beam splitter on the path,
// an RF flip on path II that swaps spin and energy label together, and a
// joint in-plane projection after the phase manipulations alpha (spin),
// chi (path) and gamma (energy).

#pragma once

#include "ghzn/qcore.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ghzn {

struct BeamlineConfig {
  double rf_frequency = 58'000.0;       // Hz, metadata only
  double rf_half_frequency = 29'000.0;  // Hz, metadata only
  double rf_phase = 0.0;                // phase of the oscillating field
  double source_rate = 2000.0;          // expected counts per scan point, all 8 outcomes

  void validate() const {
    if (!(rf_frequency > 0.0) || !(rf_half_frequency > 0.0)) {
      throw std::invalid_argument("BeamlineConfig: RF frequencies must be positive");
    }
    if (std::abs(rf_half_frequency - rf_frequency / 2.0) > 1e-9 * rf_frequency) {
      throw std::invalid_argument("BeamlineConfig: rf_half_frequency must equal rf_frequency / 2");
    }
    if (!std::isfinite(rf_phase)) throw std::invalid_argument("BeamlineConfig: rf_phase must be finite");
    if (!(source_rate >= 0.0) || !std::isfinite(source_rate)) {
      throw std::invalid_argument("BeamlineConfig: source_rate must be finite and non-negative");
    }
  }
};

/// Phases stored as given; compare with `same_modulo_2pi`.
struct PhaseSettings {
  double alpha = 0.0;  // spin
  double chi = 0.0;    // path
  double gamma = 0.0;  // energy
};

inline bool same_modulo_2pi(double a, double b, double tol = 1e-9) {
  const double d = std::remainder(a - b, 2.0 * kPi);
  return std::abs(d) <= tol;
}

/// One chi-scan at fixed (alpha, gamma).
///
/// `counts_per_point` is the mean detected count per chi point averaged over
/// the fringe, so the total rate into all eight outcomes is 8 * counts_per_point.
struct ScanPlan {
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<double> chi_grid;
  std::int64_t counts_per_point = 250;
  double visibility = 0.6395;
  std::uint64_t seed = 1;

  double source_rate() const { return 8.0 * static_cast<double>(counts_per_point); }

  void validate() const {
    if (chi_grid.empty()) throw std::invalid_argument("ScanPlan: chi grid is empty");
    for (std::size_t i = 1; i < chi_grid.size(); ++i) {
      if (!(chi_grid[i] > chi_grid[i - 1])) {
        throw std::invalid_argument("ScanPlan: chi grid must be strictly increasing");
      }
    }
    if (counts_per_point <= 0) throw std::invalid_argument("ScanPlan: counts_per_point must be positive");
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw std::invalid_argument("ScanPlan: visibility outside [0, 1]");
  }
};

/// `n` points equally spaced over [0, 2pi).
inline std::vector<double> equally_spaced_chi(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

/// diag(1, e^{i theta}) on one degree of freedom.
inline TripleOp phase_unitary(Dof dof, double theta) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, theta);
  return embed(dof, SingleQubitOp::as_unitary(m));
}

/// Symmetric beam splitter on the path: |I> -> (|I> + |II>)/sqrt2.
inline TripleOp path_beam_splitter() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat2 h;
  h << r, r, r, -r;
  return embed(Dof::path, SingleQubitOp::as_unitary(h));
}

/// RF flipper in path II: |up, E0> -> e^{i phi}|down, E0 - hbar w> and the
/// reverse transition with e^{-i phi}; the two states that would leave the
/// two-level energy space are left alone. Path I is untouched.
inline TripleOp rf_flip_path_two(double rf_phase) {
  Mat8 m = Mat8::Identity();
  const int up_e0 = basis_index(0, 1, 0);
  const int down_e1 = basis_index(1, 1, 1);
  m(up_e0, up_e0) = 0.0;
  m(down_e1, down_e1) = 0.0;
  m(down_e1, up_e0) = std::polar(1.0, rf_phase);
  m(up_e0, down_e1) = std::polar(1.0, -rf_phase);
  return TripleOp::as_unitary(m);
}

/// |up, I, E0> through the beam splitter and the path-II RF flipper:
/// (|up, I, E0> + e^{i phi}|down, II, E0 - hbar w>)/sqrt2.
inline PureState prepare_neutron_ghz(const BeamlineConfig& config = {}) {
  config.validate();
  const PureState incident = PureState::basis(basis_index(0, 0, 0));
  return rf_flip_path_two(config.rf_phase) * (path_beam_splitter() * incident);
}

/// Projector onto the +1 eigenvector of in_plane_observable(theta).
inline SingleQubitOp plus_projector(double theta) {
  return 0.5 * (identity2() + in_plane_observable(theta));
}

inline TripleOp joint_projector(const PhaseSettings& s) {
  return tensor3(plus_projector(s.alpha), plus_projector(s.chi), plus_projector(s.gamma));
}

/// Probability that the neutron passes the joint (+,+,+) in-plane projection.
inline double detection_probability(const DensityMatrix& rho, const PhaseSettings& settings) {
  const double p = expectation(rho, joint_projector(settings));
  // Clamp rounding noise at the physical boundaries.
  if (p < 0.0 && p > -kDerivedTol) return 0.0;
  if (p > 1.0 && p < 1.0 + kDerivedTol) return 1.0;
  return p;
}

struct IntensityPoint {
  double chi;
  double expected_intensity;
};

inline std::vector<IntensityPoint> ideal_intensity_curve(const ScanPlan& plan, const DensityMatrix& rho,
                                                         double source_rate) {
  plan.validate();
  std::vector<IntensityPoint> curve;
  curve.reserve(plan.chi_grid.size());
  for (double chi : plan.chi_grid) {
    curve.push_back({chi, source_rate * detection_probability(rho, {plan.alpha, chi, plan.gamma})});
  }
  return curve;
}

inline std::vector<IntensityPoint> ideal_intensity_curve(const ScanPlan& plan, const DensityMatrix& rho) {
  return ideal_intensity_curve(plan, rho, plan.source_rate());
}

}  // namespace ghzn
