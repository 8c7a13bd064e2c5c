// GHZ states, the Mermin operator, and the exhaustive noncontextual
// value-assignment oracle.

#pragma once

#include "ghzn/qcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

namespace ghzn {

/// plus:  (|000> + |111>)/sqrt2, the state the beamline prepares.
/// minus: (|000> - |111>)/sqrt2, the textbook three-particle convention.
enum class GhzSign { plus, minus };

inline const char* to_string(GhzSign s) { return s == GhzSign::plus ? "plus" : "minus"; }

inline PureState ghz_state(GhzSign sign) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec8 v = Vec8::Zero();
  v(0) = r;
  v(7) = sign == GhzSign::plus ? r : -r;
  return PureState(v);
}

/// One signed product term sigma^s sigma^p sigma^e of the Mermin sum.
struct MerminTerm {
  std::array<Axis, 3> axes;  // spin, path, energy
  int sign;                  // +1 or -1

  Axis axis(Dof d) const { return axes[static_cast<int>(d)]; }

  std::string label() const { return {to_char(axes[0]), to_char(axes[1]), to_char(axes[2])}; }

  friend bool operator==(const MerminTerm&, const MerminTerm&) = default;
};

/// M = E[xxx] - E[xyy] - E[yxy] - E[yyx]. Shared by the quantum operator, the
/// classical enumeration and the data analysis.
inline constexpr std::array<MerminTerm, 4> kMerminTerms{{
    {{Axis::x, Axis::x, Axis::x}, +1},
    {{Axis::x, Axis::y, Axis::y}, -1},
    {{Axis::y, Axis::x, Axis::y}, -1},
    {{Axis::y, Axis::y, Axis::x}, -1},
}};

using AxisTriple = std::array<Axis, 3>;

inline TripleOp product_observable(const AxisTriple& axes) {
  return tensor3(pauli(axes[0]), pauli(axes[1]), pauli(axes[2]));
}

inline TripleOp term_observable(const MerminTerm& term) { return product_observable(term.axes); }

/// The three mutually commuting operators xyy, yxy, yyx.
inline std::array<TripleOp, 3> ghz_stabilizers() {
  return {product_observable(AxisTriple{Axis::x, Axis::y, Axis::y}), product_observable(AxisTriple{Axis::y, Axis::x, Axis::y}),
          product_observable(AxisTriple{Axis::y, Axis::y, Axis::x})};
}

inline TripleOp xxx_operator() { return product_observable(AxisTriple{Axis::x, Axis::x, Axis::x}); }

struct EigenRelation {
  std::string label;       // "xyy", "yxy", "yyx", "xxx"
  double expected = 0.0;   // eigenvalue required by the relation
  double residual = 0.0;   // || O psi - expected psi ||
  bool holds = false;
};

struct EigenRelationReport {
  GhzSign sign = GhzSign::minus;
  std::array<EigenRelation, 4> relations;

  bool all_hold() const {
    return std::all_of(relations.begin(), relations.end(), [](const EigenRelation& r) { return r.holds; });
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& r : relations) m = std::max(m, r.residual);
    return m;
  }
};

/// Checks A_i psi = +psi and xxx psi = -psi (minus convention) or the
/// sign-flipped relations (plus convention). A relation holds when its
/// residual is below `tol`.
inline EigenRelationReport check_eigenrelations(const PureState& state, GhzSign sign, double tol = kDerivedTol) {
  if (!state.is_normalized(1e-8)) {
    throw InvalidState("check_eigenrelations: state is not normalized");
  }
  const double flip = sign == GhzSign::minus ? 1.0 : -1.0;
  const auto stabs = ghz_stabilizers();
  const std::array<std::string, 4> labels{"xyy", "yxy", "yyx", "xxx"};

  EigenRelationReport report;
  report.sign = sign;
  for (int k = 0; k < 4; ++k) {
    const TripleOp op = k < 3 ? stabs[k] : xxx_operator();
    const double expected = k < 3 ? flip : -flip;
    const Vec8 diff = (op * state).amplitudes() - expected * state.amplitudes();
    EigenRelation& rel = report.relations[k];
    rel.label = labels[k];
    rel.expected = expected;
    rel.residual = diff.norm();
    rel.holds = rel.residual < tol;
  }
  return report;
}

/// Predefined +-1 outcomes m_x and m_y for each degree of freedom.
struct NchvAssignment {
  std::array<std::array<int, 2>, 3> m{};  // [dof][0 = x, 1 = y]

  /// Bit k of `index` (0..63) picks -1 for value k, in the order
  /// m_x_s, m_y_s, m_x_p, m_y_p, m_x_e, m_y_e.
  static NchvAssignment from_index(int index) {
    NchvAssignment a;
    for (int k = 0; k < 6; ++k) {
      a.m[k / 2][k % 2] = ((index >> k) & 1) ? -1 : 1;
    }
    return a;
  }

  int value(Dof d, Axis axis) const {
    if (axis == Axis::z) throw std::invalid_argument("NchvAssignment: only x and y outcomes are predefined");
    return m[static_cast<int>(d)][axis == Axis::x ? 0 : 1];
  }

  int product(const std::array<Axis, 3>& axes) const {
    return value(Dof::spin, axes[0]) * value(Dof::path, axes[1]) * value(Dof::energy, axes[2]);
  }

  /// Classical Mermin sum evaluated with the shared term table.
  int mermin_sum() const {
    int sum = 0;
    for (const auto& t : kMerminTerms) sum += t.sign * product(t.axes);
    return sum;
  }
};

inline constexpr int kNchvAssignments = 64;

struct NchvReport {
  int total = 0;
  int satisfying = 0;              // assignments obeying all four relations
  bool parity_always_plus = true;  // product of the four left-hand sides
  int max_abs_mermin = 0;
  int min_mermin = 0;
  int max_mermin = 0;
};

/// Exhaustive check over all 64 deterministic assignments of the relations
///   m_x^s m_y^p m_y^e = 1, m_y^s m_x^p m_y^e = 1,
///   m_y^s m_y^p m_x^e = 1, m_x^s m_x^p m_x^e = -1.
inline NchvReport enumerate_nchv() {
  constexpr std::array<std::array<Axis, 3>, 4> lhs{{
      {Axis::x, Axis::y, Axis::y},
      {Axis::y, Axis::x, Axis::y},
      {Axis::y, Axis::y, Axis::x},
      {Axis::x, Axis::x, Axis::x},
  }};
  constexpr std::array<int, 4> rhs{1, 1, 1, -1};

  NchvReport r;
  r.min_mermin = 1 << 20;
  r.max_mermin = -(1 << 20);
  for (int idx = 0; idx < kNchvAssignments; ++idx) {
    const auto a = NchvAssignment::from_index(idx);
    bool ok = true;
    int parity = 1;
    for (int k = 0; k < 4; ++k) {
      const int v = a.product(lhs[k]);
      parity *= v;
      ok = ok && v == rhs[k];
    }
    r.total += 1;
    r.satisfying += ok ? 1 : 0;
    r.parity_always_plus = r.parity_always_plus && parity == 1;
    const int m = a.mermin_sum();
    r.max_abs_mermin = std::max(r.max_abs_mermin, std::abs(m));
    r.min_mermin = std::min(r.min_mermin, m);
    r.max_mermin = std::max(r.max_mermin, m);
  }
  return r;
}

inline TripleOp mermin_operator() {
  Mat8 m = Mat8::Zero();
  for (const auto& t : kMerminTerms) m += static_cast<double>(t.sign) * term_observable(t).matrix();
  return TripleOp::as_observable(m);
}

inline double mermin_value(const DensityMatrix& rho) {
  static const TripleOp op = mermin_operator();
  return expectation(rho, op);
}

}  // namespace ghzn
