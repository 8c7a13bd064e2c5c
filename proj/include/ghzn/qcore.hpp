// Dense linear algebra for three two-level subsystems (spin, path, energy).
//
// Basis ordering is spin-major: index b = 4*s + 2*p + e with s, p, e in {0, 1}.
//   s = 0 <-> |up>,   s = 1 <-> |down>
//   p = 0 <-> |I>,    p = 1 <-> |II>
//   e = 0 <-> |E0>,   e = 1 <-> |E0 - hbar*omega>
// Every module in this library uses this ordering.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ghzn {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kQubits = 3;
inline constexpr int kDim = 8;

/// Tolerance for construction invariants (hermiticity, unitarity, norm).
inline constexpr double kConstructTol = 1e-12;
/// Tolerance for derived checks (realness of traces, idempotency, positivity).
inline constexpr double kDerivedTol = 1e-10;

using Vec8 = Eigen::Matrix<cplx, kDim, 1>;
using Mat8 = Eigen::Matrix<cplx, kDim, kDim>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;

enum class Dof { spin = 0, path = 1, energy = 2 };
enum class Axis { x, y, z };

inline constexpr std::array<Dof, 3> kAllDofs{Dof::spin, Dof::path, Dof::energy};

/// Bit position of a degree of freedom inside a basis index.
constexpr int dof_shift(Dof d) { return 2 - static_cast<int>(d); }

constexpr int basis_index(int s, int p, int e) { return 4 * s + 2 * p + e; }

constexpr int basis_label(int index, Dof d) { return (index >> dof_shift(d)) & 1; }

inline const char* to_string(Dof d) {
  switch (d) {
    case Dof::spin: return "spin";
    case Dof::path: return "path";
    case Dof::energy: return "energy";
  }
  return "?";
}

inline char to_char(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidOperator : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <typename M>
double max_abs(const M& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename M>
bool is_hermitian(const M& m, double tol) {
  return max_abs(m - m.adjoint()) <= tol;
}

template <typename M>
bool is_unitary(const M& m, double tol) {
  return max_abs(m.adjoint() * m - M::Identity()) <= tol;
}

}  // namespace detail

/// What an operator has been checked to be. `general` carries no promise.
enum class OpKind { general, unitary, observable };

/// Square complex operator on `Dim` dimensions with an optional verified tag.
///
/// Tagging happens only through `as_unitary()` / `as_observable()`, which
/// verify the property at kConstructTol and throw InvalidOperator otherwise.
/// Arithmetic drops the tag; re-tag the result if it is needed downstream.
template <int Dim>
class Operator {
 public:
  using Matrix = Eigen::Matrix<cplx, Dim, Dim>;

  Operator() : m_(Matrix::Zero()) {}
  explicit Operator(const Matrix& m) : m_(m) {}

  static Operator identity() { return Operator(Matrix::Identity()); }

  static Operator as_unitary(const Matrix& m) {
    if (!detail::is_unitary(m, kConstructTol)) {
      throw InvalidOperator("operator is not unitary within tolerance");
    }
    Operator op(m);
    op.kind_ = OpKind::unitary;
    return op;
  }

  static Operator as_observable(const Matrix& m) {
    if (!detail::is_hermitian(m, kConstructTol)) {
      throw InvalidOperator("operator is not Hermitian within tolerance");
    }
    Operator op(m);
    op.kind_ = OpKind::observable;
    return op;
  }

  const Matrix& matrix() const { return m_; }
  OpKind kind() const { return kind_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  bool is_hermitian(double tol = kConstructTol) const { return detail::is_hermitian(m_, tol); }
  bool is_unitary(double tol = kConstructTol) const { return detail::is_unitary(m_, tol); }

  cplx trace() const { return m_.trace(); }
  Operator adjoint() const { return Operator(m_.adjoint()); }

  friend Operator operator*(const Operator& a, const Operator& b) { return Operator(a.m_ * b.m_); }
  friend Operator operator+(const Operator& a, const Operator& b) { return Operator(a.m_ + b.m_); }
  friend Operator operator-(const Operator& a, const Operator& b) { return Operator(a.m_ - b.m_); }
  friend Operator operator-(const Operator& a) { return Operator(-a.m_); }
  friend Operator operator*(cplx s, const Operator& a) { return Operator(s * a.m_); }
  friend Operator operator*(double s, const Operator& a) { return Operator(cplx(s) * a.m_); }

  /// Largest absolute entry-wise difference.
  friend double distance(const Operator& a, const Operator& b) { return detail::max_abs(a.m_ - b.m_); }

 private:
  Matrix m_;
  OpKind kind_ = OpKind::general;
};

using SingleQubitOp = Operator<2>;
using TripleOp = Operator<kDim>;

/// Eight amplitudes over spin (x) path (x) energy.
///
/// Construction does not enforce normalization so that callers can build and
/// then reject unnormalized vectors; operations that need a physical state
/// check `norm()` themselves.
class PureState {
 public:
  PureState() : amps_(Vec8::Zero()) { amps_(0) = 1.0; }
  explicit PureState(const Vec8& amps) : amps_(amps) {}

  static PureState basis(int index) {
    if (index < 0 || index >= kDim) {
      throw std::out_of_range("basis index must be in [0, 8)");
    }
    Vec8 v = Vec8::Zero();
    v(index) = 1.0;
    return PureState(v);
  }

  const Vec8& amplitudes() const { return amps_; }
  cplx operator[](int index) const { return amps_(index); }
  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = kConstructTol) const { return std::abs(amps_.squaredNorm() - 1.0) <= tol; }

  friend cplx inner(const PureState& bra, const PureState& ket) { return bra.amps_.dot(ket.amps_); }
  friend double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

  friend PureState operator*(const TripleOp& op, const PureState& psi) { return PureState(op.matrix() * psi.amps_); }

 private:
  Vec8 amps_;
};

/// 8x8 density matrix. Always valid: Hermitian and unit trace within
/// kConstructTol, eigenvalues no lower than -kDerivedTol.
class DensityMatrix {
 public:
  /// Validates and wraps `m`; throws InvalidState on any violated invariant.
  explicit DensityMatrix(const Mat8& m) : m_(m) {
    if (!detail::is_hermitian(m_, kConstructTol)) {
      throw InvalidState("density matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - cplx(1.0)) > kConstructTol) {
      throw InvalidState("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Mat8> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kDerivedTol) {
      throw InvalidState("density matrix has a negative eigenvalue");
    }
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(Mat8::Identity() / 8.0); }

  const Mat8& matrix() const { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  double purity() const { return (m_ * m_).trace().real(); }

  /// Convex combination weight*a + (1 - weight)*b.
  friend DensityMatrix mix(double weight, const DensityMatrix& a, const DensityMatrix& b) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
      throw std::invalid_argument("mixing weight must be in [0, 1]");
    }
    return DensityMatrix(weight * a.m_ + (1.0 - weight) * b.m_);
  }

 private:
  Mat8 m_;
};

inline SingleQubitOp identity2() { return SingleQubitOp::identity(); }

inline SingleQubitOp pauli(Axis axis) {
  const cplx i(0.0, 1.0);
  Mat2 m;
  switch (axis) {
    case Axis::x: m << 0.0, 1.0, 1.0, 0.0; break;
    case Axis::y: m << 0.0, -i, i, 0.0; break;
    case Axis::z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return SingleQubitOp::as_observable(m);
}

/// cos(theta) sigma_x + sin(theta) sigma_y: the +-1 observable measured by
/// projecting onto the equator of the Bloch sphere at azimuth theta.
inline SingleQubitOp in_plane_observable(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("in_plane_observable: angle must be finite");
  }
  const cplx phase = std::polar(1.0, theta);
  Mat2 m;
  m << 0.0, std::conj(phase), phase, 0.0;
  return SingleQubitOp::as_observable(m);
}

/// Kronecker product in spin (x) path (x) energy order. Preserves a tag
/// shared by all three factors.
inline TripleOp tensor3(const SingleQubitOp& a, const SingleQubitOp& b, const SingleQubitOp& c) {
  Mat8 m;
  for (int r = 0; r < kDim; ++r) {
    for (int col = 0; col < kDim; ++col) {
      m(r, col) = a(r >> 2, col >> 2) * b((r >> 1) & 1, (col >> 1) & 1) * c(r & 1, col & 1);
    }
  }
  if (a.kind() == b.kind() && b.kind() == c.kind()) {
    if (a.kind() == OpKind::unitary) return TripleOp::as_unitary(m);
    if (a.kind() == OpKind::observable) return TripleOp::as_observable(m);
  }
  return TripleOp(m);
}

/// Embeds a single-qubit operator on one degree of freedom.
inline TripleOp embed(Dof dof, const SingleQubitOp& op) {
  const auto id = identity2();
  switch (dof) {
    case Dof::spin: return tensor3(op, id, id);
    case Dof::path: return tensor3(id, op, id);
    case Dof::energy: return tensor3(id, id, op);
  }
  return TripleOp::identity();
}

/// trace(rho * obs). Throws InvalidOperator if `obs` is not Hermitian.
inline double expectation(const DensityMatrix& rho, const TripleOp& obs) {
  if (!obs.is_hermitian()) {
    throw InvalidOperator("expectation: observable is not Hermitian");
  }
  // trace(A B) = sum_ij A_ij B_ji
  const cplx t = rho.matrix().cwiseProduct(obs.matrix().transpose()).sum();
  if (std::abs(t.imag()) > kDerivedTol) {
    throw InvalidOperator("expectation: trace is not real");
  }
  return t.real();
}

/// |psi><psi|. Rejects vectors whose squared norm is off by more than 1e-8.
inline DensityMatrix densify(const PureState& psi) {
  if (!psi.is_normalized(1e-8)) {
    throw InvalidState("densify: state is not normalized");
  }
  const Vec8& v = psi.amplitudes();
  Mat8 m = v * v.adjoint();
  // Remove rounding asymmetry so the Hermiticity check is exact.
  m = (0.5 * (m + m.adjoint())).eval();
  m /= m.trace().real();
  return DensityMatrix(m);
}

/// Sorted real eigenvalues of a Hermitian operator.
template <int Dim>
Eigen::Matrix<double, Dim, 1> eigenvalues(const Operator<Dim>& op) {
  if (!op.is_hermitian()) {
    throw InvalidOperator("eigenvalues: operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<typename Operator<Dim>::Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace ghzn
