// Scan analysis: weighted least-squares sinusoid fits, extraction of
// triple-correlation expectation values from fitted curves, inverse-variance
// averaging, and the Mermin verdict.

#pragma once

#include "ghzn/ghz_logic.hpp"
#include "ghzn/qcore.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ghzn {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanPoint {
  double chi = 0.0;
  double counts = 0.0;  // integral for measured data, real in noiseless mode
  double count_error = 1.0;

  static ScanPoint from_counts(double chi, double counts) {
    return {chi, counts, std::sqrt(std::max(counts, 1.0))};
  }
};

struct ScanResult {
  std::size_t scan_id = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<ScanPoint> points;

  /// At least five points, chi strictly increasing, and the grid covering one
  /// full period: (max - min) plus the mean spacing must reach 2pi.
  void validate() const {
    const std::size_t n = points.size();
    if (n < 5) throw FitError("scan " + std::to_string(scan_id) + ": fewer than 5 points");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = points[i];
      if (!std::isfinite(p.chi) || !std::isfinite(p.counts) || p.counts < 0.0 || !(p.count_error > 0.0)) {
        throw FitError("scan " + std::to_string(scan_id) + ": invalid point " + std::to_string(i));
      }
      if (i > 0 && !(p.chi > points[i - 1].chi)) {
        throw FitError("scan " + std::to_string(scan_id) + ": chi values not strictly increasing");
      }
    }
    const double span = points.back().chi - points.front().chi;
    const double spacing = span / static_cast<double>(n - 1);
    if (span + spacing < 2.0 * kPi - 1e-9) {
      throw FitError("scan " + std::to_string(scan_id) + ": chi grid does not cover a full period");
    }
  }
};

enum class FitWeighting {
  /// Weights 1/count_error^2 taken from the data.
  data,
  /// Start from data weights, then iterate with weights 1/max(I_fit(chi), 1)
  /// until the parameters settle. For Poisson data this converges to the
  /// maximum-likelihood fit and removes the downward offset bias of
  /// data-derived weights. On noiseless data both modes coincide.
  model,
};

struct FitOptions {
  FitWeighting weighting = FitWeighting::model;
  int max_iterations = 50;
  double tolerance = 1e-13;
};

/// I(chi) = offset + amplitude * cos(chi + phase).
struct FitResult {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (offset, amplitude, phase)
  double contrast = 0.0;
  double contrast_sigma = 0.0;
  double chi2_per_dof = 0.0;
  bool amplitude_identifiable = true;
  int iterations = 0;

  // Linear form offset + b cos(chi) + c sin(chi) and its covariance.
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Matrix3d linear_covariance = Eigen::Matrix3d::Zero();

  double offset_sigma() const { return std::sqrt(covariance(0, 0)); }
  double amplitude_sigma() const { return std::sqrt(covariance(1, 1)); }
  double phase_sigma() const { return std::sqrt(covariance(2, 2)); }

  static Eigen::Vector3d design_row(double chi) { return {1.0, std::cos(chi), std::sin(chi)}; }

  double intensity(double chi) const { return design_row(chi).dot(linear); }
};

namespace detail {

inline Eigen::Vector3d solve_weighted(const std::vector<ScanPoint>& pts, const std::vector<double>& weights,
                                      Eigen::Matrix3d& normal) {
  normal.setZero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector3d x = FitResult::design_row(pts[i].chi);
    normal.noalias() += weights[i] * x * x.transpose();
    rhs.noalias() += weights[i] * pts[i].counts * x;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(normal, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(2);
  if (!(hi > 0.0) || lo <= 1e-12 * hi) {
    throw FitError("degenerate design matrix (chi values do not resolve cos and sin)");
  }
  return normal.ldlt().solve(rhs);
}

}  // namespace detail

/// Weighted least squares of I(chi) = a0 + a1 cos(chi + phi0), solved in the
/// linear form a0 + b cos(chi) + c sin(chi), so a1 = hypot(b, c) and
/// phi0 = atan2(-c, b). Parameter covariance is the inverse normal matrix,
/// propagated to (a0, a1, phi0) at first order. Throws FitError on a
/// degenerate design; an amplitude within 3 sigma of zero is flagged rather
/// than rejected.
inline FitResult fit_sinusoid(const ScanResult& scan, const FitOptions& options = {}) {
  scan.validate();
  const auto& pts = scan.points;
  const std::size_t n = pts.size();

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / (pts[i].count_error * pts[i].count_error);

  Eigen::Matrix3d normal;
  Eigen::Vector3d p = detail::solve_weighted(pts, w, normal);
  int iterations = 1;
  if (options.weighting == FitWeighting::model) {
    for (; iterations < options.max_iterations; ++iterations) {
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = 1.0 / std::max(FitResult::design_row(pts[i].chi).dot(p), 1.0);
      }
      const Eigen::Vector3d next = detail::solve_weighted(pts, w, normal);
      const double change = (next - p).cwiseAbs().maxCoeff();
      p = next;
      if (change <= options.tolerance * (1.0 + p.cwiseAbs().maxCoeff())) break;
    }
  }

  FitResult fit;
  fit.iterations = iterations;
  fit.linear = p;
  fit.linear_covariance = normal.inverse();
  fit.linear_covariance = 0.5 * (fit.linear_covariance + fit.linear_covariance.transpose()).eval();

  const double a0 = p(0), b = p(1), c = p(2);
  const double a1 = std::hypot(b, c);
  fit.offset = a0;
  fit.amplitude = a1;
  fit.phase = std::atan2(-c, b);

  const Eigen::Matrix3d& lc = fit.linear_covariance;
  double var_a1 = 0.0;
  if (a1 > 0.0) {
    Eigen::Matrix3d jac;
    jac << 1.0, 0.0, 0.0,  //
        0.0, b / a1, c / a1,  //
        0.0, c / (a1 * a1), -b / (a1 * a1);
    fit.covariance = jac * lc * jac.transpose();
    var_a1 = fit.covariance(1, 1);
  } else {
    // Phase undefined: report the variance of a uniform phase.
    var_a1 = 0.5 * (lc(1, 1) + lc(2, 2));
    fit.covariance.setZero();
    fit.covariance(0, 0) = lc(0, 0);
    fit.covariance(1, 1) = var_a1;
    fit.covariance(2, 2) = kPi * kPi / 3.0;
  }
  fit.amplitude_identifiable = a1 > 3.0 * std::sqrt(var_a1);

  if (a0 > 0.0) {
    fit.contrast = a1 / a0;
    const Eigen::Vector2d g(-a1 / (a0 * a0), 1.0 / a0);
    fit.contrast_sigma = std::sqrt(std::max(0.0, g.dot(fit.covariance.topLeftCorner<2, 2>() * g)));
  }

  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = pts[i].counts - fit.intensity(pts[i].chi);
    chi2 += w[i] * r * r;
  }
  fit.chi2_per_dof = chi2 / static_cast<double>(n - 3);
  return fit;
}

/// Index k in 0..3 when `angle` equals k*pi/2 modulo 2pi, otherwise nullopt.
inline std::optional<int> quarter_turn_index(double angle, double tol = 1e-9) {
  const double q = angle / (0.5 * kPi);
  const double k = std::round(q);
  if (std::abs(q - k) * 0.5 * kPi > tol) return std::nullopt;
  return static_cast<int>(((static_cast<long long>(k) % 4) + 4) % 4);
}

struct FittedScan {
  std::size_t scan_id = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  FitResult fit;
};

struct Provenance {
  std::size_t scan_id = 0;
  double alpha = 0.0;
  double gamma = 0.0;
};

struct ExpectationEstimate {
  MerminTerm term{};
  double value = 0.0;
  double sigma = 0.0;
  std::vector<Provenance> provenance;
};

struct WeightedMean {
  double mean = 0.0;
  double sigma = 0.0;
};

/// Inverse-variance weighted mean; sigma = 1/sqrt(sum 1/sigma_i^2).
inline WeightedMean weighted_average(std::span<const double> values, std::span<const double> sigmas) {
  if (values.empty()) throw AnalysisError("weighted_average: empty input");
  if (values.size() != sigmas.size()) throw AnalysisError("weighted_average: length mismatch");
  double sw = 0.0, swx = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(sigmas[i] > 0.0)) throw AnalysisError("weighted_average: sigma must be positive");
    const double w = 1.0 / (sigmas[i] * sigmas[i]);
    sw += w;
    swx += w * values[i];
  }
  return {swx / sw, 1.0 / std::sqrt(sw)};
}

/// Normalised difference of the fitted curve at beta and beta + pi, with
/// first-order error from the fit covariance.
inline WeightedMean fringe_asymmetry(const FitResult& fit, double beta) {
  const double i1 = fit.intensity(beta);
  const double i2 = fit.intensity(beta + kPi);
  const double den = i1 + i2;
  if (!(den > 0.0)) throw AnalysisError("non-positive fitted intensity sum (corrupt fit)");
  const double e = (i1 - i2) / den;
  const Eigen::Vector3d grad =
      (2.0 * i2 / (den * den)) * FitResult::design_row(beta) - (2.0 * i1 / (den * den)) * FitResult::design_row(beta + kPi);
  const double var = grad.dot(fit.linear_covariance * grad);
  return {e, std::sqrt(std::max(var, 0.0))};
}

/// Estimates E[sigma^s sigma^p sigma^e] for one Mermin term.
///
/// Spin axis x uses alpha in {0, pi}, y uses {pi/2, 3pi/2}; the energy axis
/// selects gamma the same way. The path axis fixes the read-out lines
/// (0, pi) for x and (pi/2, 3pi/2) for y. A complementary setting (base + pi)
/// measures the negated observable, so its asymmetry is multiplied by -1 per
/// shifted phase. All determinations are combined by inverse-variance
/// weighting; each of the four (alpha, gamma) combinations must be present.
inline ExpectationEstimate extract_expectation(std::span<const FittedScan> fits, const MerminTerm& term) {
  for (Axis a : term.axes) {
    if (a == Axis::z) throw AnalysisError("extract_expectation: only x/y axes are measurable in-plane");
  }
  const int spin_parity = term.axis(Dof::spin) == Axis::x ? 0 : 1;
  const int energy_parity = term.axis(Dof::energy) == Axis::x ? 0 : 1;
  const double beta = term.axis(Dof::path) == Axis::x ? 0.0 : 0.5 * kPi;

  std::vector<double> values, sigmas;
  std::array<bool, 4> seen{};
  ExpectationEstimate est;
  est.term = term;
  for (const auto& f : fits) {
    const auto qa = quarter_turn_index(f.alpha);
    const auto qg = quarter_turn_index(f.gamma);
    if (!qa || !qg || *qa % 2 != spin_parity || *qg % 2 != energy_parity) continue;
    const int sign = (*qa >= 2 ? -1 : 1) * (*qg >= 2 ? -1 : 1);
    WeightedMean e;
    try {
      e = fringe_asymmetry(f.fit, beta);
    } catch (const AnalysisError& err) {
      throw AnalysisError("scan " + std::to_string(f.scan_id) + ": " + err.what());
    }
    if (!(e.sigma > 0.0)) {
      throw AnalysisError("scan " + std::to_string(f.scan_id) + ": zero uncertainty on extracted value");
    }
    values.push_back(sign * e.mean);
    sigmas.push_back(e.sigma);
    seen[2 * (*qa >= 2) + (*qg >= 2)] = true;
    est.provenance.push_back({f.scan_id, f.alpha, f.gamma});
  }
  for (int k = 0; k < 4; ++k) {
    if (!seen[k]) {
      const double a = (spin_parity + 2 * (k / 2)) * 0.5 * kPi;
      const double g = (energy_parity + 2 * (k % 2)) * 0.5 * kPi;
      std::ostringstream msg;
      msg << "extract_expectation(" << term.label() << "): missing setting alpha=" << a << " gamma=" << g;
      throw AnalysisError(msg.str());
    }
  }
  const auto avg = weighted_average(values, sigmas);
  est.value = avg.mean;
  est.sigma = avg.sigma;
  return est;
}

struct MerminReport {
  std::array<ExpectationEstimate, 4> estimates;  // kMerminTerms order
  double m = 0.0;
  double sigma_m = 0.0;
  double significance_k = 3.0;
  bool nchv_violated = false;

  static constexpr double kNchvBound = 2.0;
  static constexpr double kQuantumBound = 4.0;
};

/// M = E_xxx - E_xyy - E_yxy - E_yyx with quadrature error. Violation is
/// declared when |M| > 2 + k sigma_M.
inline MerminReport mermin_from_expectations(std::span<const ExpectationEstimate> estimates,
                                             double significance_k = 3.0) {
  if (estimates.size() != kMerminTerms.size()) {
    throw AnalysisError("mermin_from_expectations: need exactly one estimate per Mermin term");
  }
  if (!(significance_k >= 0.0)) throw AnalysisError("mermin_from_expectations: k must be non-negative");
  MerminReport r;
  r.significance_k = significance_k;
  std::array<bool, 4> filled{};
  for (const auto& e : estimates) {
    const auto it = std::find_if(kMerminTerms.begin(), kMerminTerms.end(),
                                 [&](const MerminTerm& t) { return t.axes == e.term.axes; });
    if (it == kMerminTerms.end()) throw AnalysisError("term " + e.term.label() + " is not part of the Mermin sum");
    const auto k = static_cast<std::size_t>(it - kMerminTerms.begin());
    if (filled[k]) throw AnalysisError("duplicate estimate for term " + e.term.label());
    if (!(e.sigma >= 0.0) || !std::isfinite(e.value)) throw AnalysisError("invalid estimate for term " + e.term.label());
    filled[k] = true;
    r.estimates[k] = e;
    r.estimates[k].term = *it;
  }
  double var = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    r.m += kMerminTerms[k].sign * r.estimates[k].value;
    var += r.estimates[k].sigma * r.estimates[k].sigma;
  }
  r.sigma_m = std::sqrt(var);
  r.nchv_violated = std::abs(r.m) > MerminReport::kNchvBound + significance_k * r.sigma_m;
  return r;
}

}  // namespace ghzn
