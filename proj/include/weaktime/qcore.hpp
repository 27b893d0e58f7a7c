#pragma once

// Dense complex linear algebra used by every other module: Hermitian
// eigendecomposition, unitary propagators, commutators, norms and
// expectation values. Everything here is templated on the real scalar type
// and works with plain Eigen matrices, so expressions can be passed in
// without forcing a temporary.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weaktime/errors.hpp"

namespace weaktime {

template <typename Real>
using OperatorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using KetT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Operator = OperatorT<double>;
using Ket = KetT<double>;
using RealVector = RealVectorT<double>;

/// Relative tolerance used for every Hermiticity check in the library.
inline constexpr double kHermitianTol = 1e-10;

template <typename Real>
struct SpectrumT {
  RealVectorT<Real> eigenvalues;  // ascending
  OperatorT<Real> basis;          // columns are eigenvectors
};
using Spectrum = SpectrumT<double>;

template <typename Derived>
typename Derived::RealScalar frob_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

/// max_ij |A_ij - conj(A_ji)|
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  if (a.size() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double rel_tol = kHermitianTol) {
  if (a.rows() != a.cols() || !a.allFinite()) return false;
  return hermiticity_defect(a) <= rel_tol * (1 + frob_norm(a));
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimMismatch(what + ": expected a non-empty square matrix, got " +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw ValidationError(what + ": non-finite entries");
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
  require_square(a, what);
  if (!is_hermitian(a)) {
    throw NotHermitian(what + ": not Hermitian (defect " +
                       std::to_string(static_cast<double>(hermiticity_defect(a))) + ")");
  }
}

template <typename DerivedA, typename DerivedB>
void require_same_dim(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                      const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimMismatch(what + ": dimension mismatch (" + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()) + ")");
  }
}

template <typename Derived>
auto hermitian_eig(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  require_hermitian(a, "hermitian_eig");
  // Only the lower triangle is read; symmetrize first so both halves count.
  const OperatorT<Real> h = (a + a.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<OperatorT<Real>> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("hermitian_eig: eigendecomposition did not converge");
  }
  return SpectrumT<Real>{solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i H t) from a precomputed spectrum of H.
template <typename Real>
OperatorT<Real> evolve_unitary(const SpectrumT<Real>& spectrum, Real t) {
  const KetT<Real> phases = (spectrum.eigenvalues.template cast<std::complex<Real>>() *
                             std::complex<Real>(0, -t))
                                .array()
                                .exp()
                                .matrix();
  return spectrum.basis * phases.asDiagonal() * spectrum.basis.adjoint();
}

template <typename Derived>
auto evolve_unitary(const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar t) {
  return evolve_unitary(hermitian_eig(h), t);
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  require_same_dim(a, b, "commutator");
  using Real = typename DerivedA::RealScalar;
  OperatorT<Real> c = a * b;
  c.noalias() -= b * a;
  return c;
}

template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  require_same_dim(a, b, "anticommutator");
  using Real = typename DerivedA::RealScalar;
  OperatorT<Real> c = a * b;
  c.noalias() += b * a;
  return c;
}

/// System state, either a normalized ket or a density matrix.
template <typename Real>
class StateT {
 public:
  static StateT pure(KetT<Real> psi) {
    StateT s;
    s.ket_ = std::move(psi);
    s.validate();
    return s;
  }

  static StateT density(OperatorT<Real> rho) {
    StateT s;
    s.rho_ = std::move(rho);
    s.validate();
    return s;
  }

  Eigen::Index dim() const { return ket_ ? ket_->size() : rho_.rows(); }
  bool is_pure() const { return ket_.has_value(); }
  const KetT<Real>& ket() const {
    if (!ket_) throw MixedStateUnsupported("state is a density matrix, not a ket");
    return *ket_;
  }

  OperatorT<Real> density_matrix() const {
    if (ket_) return *ket_ * ket_->adjoint();
    return rho_;
  }

  /// Convex decomposition into pure states: the ket itself, or the
  /// eigen-ensemble of the density matrix (weights below 1e-14 dropped).
  std::vector<std::pair<Real, KetT<Real>>> ensemble() const {
    if (ket_) return {{Real(1), *ket_}};
    const auto spec = hermitian_eig(rho_);
    std::vector<std::pair<Real, KetT<Real>>> members;
    for (Eigen::Index i = spec.eigenvalues.size() - 1; i >= 0; --i) {
      if (spec.eigenvalues(i) > Real(1e-14)) {
        members.emplace_back(spec.eigenvalues(i), spec.basis.col(i));
      }
    }
    return members;
  }

 private:
  StateT() = default;

  void validate() const {
    if (ket_) {
      if (ket_->size() < 1 || !ket_->allFinite()) throw InvalidState("state vector is empty or non-finite");
      const Real n2 = ket_->squaredNorm();
      if (std::abs(n2 - Real(1)) > Real(1e-10)) {
        throw InvalidState("state vector norm^2 is " + std::to_string(static_cast<double>(n2)) +
                           ", expected 1");
      }
      return;
    }
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1 || !rho_.allFinite()) {
      throw InvalidState("density matrix must be a finite non-empty square matrix");
    }
    if (hermiticity_defect(rho_) > Real(1e-10)) throw InvalidState("density matrix is not Hermitian");
    const Real tr = rho_.trace().real();
    if (std::abs(tr - Real(1)) > Real(1e-10)) {
      throw InvalidState("density matrix trace is " + std::to_string(static_cast<double>(tr)) +
                         ", expected 1");
    }
    const auto spec = hermitian_eig(rho_);
    if (spec.eigenvalues(0) < Real(-1e-10)) throw InvalidState("density matrix has a negative eigenvalue");
  }

  std::optional<KetT<Real>> ket_;
  OperatorT<Real> rho_;
};
using State = StateT<double>;

/// Tr(rho A); <psi|A|psi> for pure states.
template <typename Real, typename Derived>
std::complex<Real> expectation(const StateT<Real>& state, const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != state.dim() || a.cols() != state.dim()) {
    throw DimMismatch("expectation: operator is " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + ", state has dim " + std::to_string(state.dim()));
  }
  if (state.is_pure()) return state.ket().dot(a * state.ket());
  return (state.density_matrix() * a).trace();
}

/// Real part of a value that must be real, after checking the discarded
/// imaginary part is below `tol * (1 + |re|)`.
inline double checked_real(Complex z, const char* what, double tol = 1e-10) {
  if (std::abs(z.imag()) > tol * (1 + std::abs(z.real()))) {
    throw NumericalFailure(std::string(what) + ": imaginary residue " + std::to_string(z.imag()) +
                           " exceeds tolerance");
  }
  return z.real();
}

namespace pauli {

inline Operator identity(Eigen::Index dim = 2) { return Operator::Identity(dim, dim); }

inline Operator sigma1() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Operator sigma2() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Operator sigma3() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// sigma_{+-} = (sigma1 +- i sigma2) / 2
inline Operator sigma_plus() { return (sigma1() + Complex(0, 1) * sigma2()) / 2.0; }
inline Operator sigma_minus() { return (sigma1() - Complex(0, 1) * sigma2()) / 2.0; }

}  // namespace pauli

}  // namespace weaktime
