#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "varbound/types.hpp"

namespace varbound {

// Magnitude entries below this fraction of the vector norm are treated as
// exact zeros. Fractional powers in the inequality kernels turn roundoff of
// size eps into contributions of size eps^(1-lambda), far above the bound
// tolerances, so the cleanup has to happen before magnitudes reach a kernel.
inline constexpr double kMagnitudeSnapTolerance = 1e-13;

namespace detail {

template <typename Scalar>
Scalar discard_imaginary(const std::complex<Scalar>& value, const char* who) {
  if (std::abs(value.imag()) >= Scalar(kImaginaryResidueTolerance)) {
    throw std::runtime_error(
        std::string(who) + ": imaginary residue " +
        std::to_string(static_cast<double>(value.imag())) +
        " exceeds tolerance 1e-10 (non-Hermitian input escaped validation?)");
  }
  return value.real();
}

}  // namespace detail

/// <x|y>: conjugate-linear in x, linear in y.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar inner(const Eigen::MatrixBase<DerivedX>& x,
                                const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("inner: length mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  return x.dot(y);
}

/// <psi|A|psi>, with the imaginary roundoff residue checked and discarded.
template <typename Scalar>
Scalar expectation(const HermitianObservableT<Scalar>& a,
                   const PureStateT<Scalar>& psi) {
  detail::require_same_dim(a.dim(), psi.dim(), "expectation");
  const std::complex<Scalar> raw =
      psi.vector().dot(a.matrix() * psi.vector());
  return detail::discard_imaginary(raw, "expectation");
}

/// (A - <A> I)|psi>. Orthogonal to |psi> up to roundoff.
template <typename Scalar>
ComplexVector<Scalar> centered_apply(const HermitianObservableT<Scalar>& a,
                                     const PureStateT<Scalar>& psi) {
  detail::require_same_dim(a.dim(), psi.dim(), "centered_apply");
  const Scalar mean = expectation(a, psi);
  return a.matrix() * psi.vector() - mean * psi.vector();
}

/// (Delta A)^2 = <A^2> - <A>^2, computed as the squared norm of the centered
/// image and clamped at zero.
template <typename Scalar>
Scalar variance(const HermitianObservableT<Scalar>& a,
                const PureStateT<Scalar>& psi) {
  const Scalar squared = centered_apply(a, psi).squaredNorm();
  return std::max(Scalar(0), squared);
}

/// Coordinates alpha_i = <phi_i|(A - <A>I)|psi> of the centered image in the
/// given basis. Sum of |alpha_i|^2 equals the variance for any basis.
template <typename Scalar>
ComplexVector<Scalar> amplitudes(const HermitianObservableT<Scalar>& a,
                                 const PureStateT<Scalar>& psi,
                                 const OrthonormalBasisT<Scalar>& basis) {
  detail::require_same_dim(a.dim(), psi.dim(), "amplitudes");
  detail::require_same_dim(a.dim(), basis.dim(), "amplitudes");
  return basis.matrix().adjoint() * centered_apply(a, psi);
}

/// <psi|(AB - BA)|psi>; purely imaginary up to roundoff for Hermitian inputs.
/// The two orderings are evaluated through independent pipelines so that the
/// imaginary-only property stays a testable fact rather than a construction.
template <typename Scalar>
std::complex<Scalar> commutator_expectation(
    const HermitianObservableT<Scalar>& a, const HermitianObservableT<Scalar>& b,
    const PureStateT<Scalar>& psi) {
  detail::require_same_dim(a.dim(), b.dim(), "commutator_expectation");
  detail::require_same_dim(a.dim(), psi.dim(), "commutator_expectation");
  const auto& v = psi.vector();
  const std::complex<Scalar> ab = v.dot(a.matrix() * (b.matrix() * v));
  const std::complex<Scalar> ba = v.dot(b.matrix() * (a.matrix() * v));
  return ab - ba;
}

/// <psi|(AB + BA)|psi>, real up to roundoff; residue checked and discarded.
template <typename Scalar>
Scalar anticommutator_expectation(const HermitianObservableT<Scalar>& a,
                                  const HermitianObservableT<Scalar>& b,
                                  const PureStateT<Scalar>& psi) {
  detail::require_same_dim(a.dim(), b.dim(), "anticommutator_expectation");
  detail::require_same_dim(a.dim(), psi.dim(), "anticommutator_expectation");
  const auto& v = psi.vector();
  const std::complex<Scalar> ab = v.dot(a.matrix() * (b.matrix() * v));
  const std::complex<Scalar> ba = v.dot(b.matrix() * (a.matrix() * v));
  return detail::discard_imaginary(ab + ba, "anticommutator_expectation");
}

/// Entrywise |v_i| with sub-roundoff entries snapped to exact zero.
template <typename Scalar>
RealVector<Scalar> magnitudes(const ComplexVector<Scalar>& v) {
  RealVector<Scalar> mags = v.cwiseAbs();
  const Scalar floor = Scalar(kMagnitudeSnapTolerance) * mags.norm();
  for (Eigen::Index i = 0; i < mags.size(); ++i) {
    if (mags[i] < floor) mags[i] = Scalar(0);
  }
  return mags;
}

}  // namespace varbound
