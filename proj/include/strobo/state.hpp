#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <string>

#include "strobo/basis.hpp"
#include "strobo/errors.hpp"

namespace strobo {

template <typename Scalar>
using StateVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using StateVectorXcd = StateVector<double>;

namespace detail {

template <typename A, typename B>
void requireSameSize(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                     const char* what) {
  if (a.size() != b.size()) {
    throw SizeError(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace detail

/// Number of qubits encoded by a state of the given length.
inline int qubitCountForDimension(Eigen::Index dim) {
  const auto d = static_cast<std::uint64_t>(dim);
  if (dim < 2 || !std::has_single_bit(d)) {
    throw SizeError("state length " + std::to_string(dim) + " is not a power of two >= 2");
  }
  const int n = std::countr_zero(d);
  checkQubitCount(n);
  return n;
}

template <typename Scalar = double>
StateVector<Scalar> basisState(int n_qubits, std::uint64_t index) {
  const auto dim = hilbertDimension(n_qubits);
  if (index >= dim) throw SizeError("basis index out of range");
  StateVector<Scalar> psi = StateVector<Scalar>::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(index)) = std::complex<Scalar>(1);
  return psi;
}

/// |00...0>, every qubit polarized along +z.
template <typename Scalar = double>
StateVector<Scalar> allZeroState(int n_qubits) {
  return basisState<Scalar>(n_qubits, 0);
}

/// <psi|D|psi> for an operator diagonal in the computational basis.
template <typename StateDerived, typename DiagDerived>
typename DiagDerived::Scalar expectation(const Eigen::MatrixBase<StateDerived>& psi,
                                         const Eigen::MatrixBase<DiagDerived>& diag) {
  detail::requireSameSize(psi, diag, "expectation");
  return psi.cwiseAbs2().cwiseProduct(diag).sum();
}

/// <psi|D^2|psi> - <psi|D|psi>^2, accumulated about the mean.
template <typename StateDerived, typename DiagDerived>
typename DiagDerived::Scalar variance(const Eigen::MatrixBase<StateDerived>& psi,
                                      const Eigen::MatrixBase<DiagDerived>& diag) {
  using Real = typename DiagDerived::Scalar;
  const Real mean = expectation(psi, diag);
  return psi.cwiseAbs2().cwiseProduct((diag.array() - mean).square().matrix()).sum();
}

/// <a|b>, conjugate-linear in the first argument.
template <typename A, typename B>
typename A::Scalar innerProduct(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  detail::requireSameSize(a, b, "innerProduct");
  return a.dot(b);
}

/// <a|D|b> for a diagonal D.
template <typename A, typename DiagDerived, typename B>
typename A::Scalar diagonalMatrixElement(const Eigen::MatrixBase<A>& a,
                                         const Eigen::MatrixBase<DiagDerived>& diag,
                                         const Eigen::MatrixBase<B>& b) {
  detail::requireSameSize(a, b, "diagonalMatrixElement");
  detail::requireSameSize(a, diag, "diagonalMatrixElement");
  using Complex = typename A::Scalar;
  return a.dot(diag.template cast<Complex>().cwiseProduct(b));
}

}  // namespace strobo
