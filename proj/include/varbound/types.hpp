#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace varbound {

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = ComplexMatrix<double>;
using VectorXc = ComplexVector<double>;
using VectorXr = RealVector<double>;

// Construction-time validation tolerances. Operations downstream assume
// validated inputs and do not re-check.
inline constexpr double kStateNormTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-10;
// Physically real quantities may carry an imaginary roundoff residue up to
// this magnitude; anything larger signals a corrupted input.
inline constexpr double kImaginaryResidueTolerance = 1e-10;

/// Unit-norm complex vector |psi> on an n-dimensional Hilbert space.
template <typename Scalar = double>
class PureStateT {
 public:
  using Vector = ComplexVector<Scalar>;

  template <typename Derived>
  explicit PureStateT(const Eigen::MatrixBase<Derived>& amplitudes)
      : amplitudes_(amplitudes) {
    if (amplitudes_.size() < 1) {
      throw std::invalid_argument("pure state: dimension must be at least 1");
    }
    if (!amplitudes_.allFinite()) {
      throw std::invalid_argument("pure state: amplitudes must be finite");
    }
    const Scalar norm = amplitudes_.norm();
    if (std::abs(norm - Scalar(1)) > Scalar(kStateNormTolerance)) {
      throw std::invalid_argument(
          "pure state: norm " + std::to_string(static_cast<double>(norm)) +
          " violates unit normalization (tolerance 1e-12)");
    }
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& vector() const { return amplitudes_; }

 private:
  Vector amplitudes_;
};

using PureState = PureStateT<double>;

/// Square complex matrix equal to its conjugate transpose.
template <typename Scalar = double>
class HermitianObservableT {
 public:
  using Matrix = ComplexMatrix<Scalar>;

  template <typename Derived>
  explicit HermitianObservableT(const Eigen::MatrixBase<Derived>& entries)
      : entries_(entries) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
      throw std::invalid_argument("observable: matrix must be square, got " +
                                  std::to_string(entries_.rows()) + "x" +
                                  std::to_string(entries_.cols()));
    }
    if (!entries_.allFinite()) {
      throw std::invalid_argument("observable: entries must be finite");
    }
    const Scalar asym =
        (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > Scalar(kHermiticityTolerance)) {
      throw std::invalid_argument(
          "observable: hermiticity violation, max |M - adjoint(M)| = " +
          std::to_string(static_cast<double>(asym)) +
          " exceeds tolerance 1e-12");
    }
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

using HermitianObservable = HermitianObservableT<double>;

/// Unitary matrix whose columns are the basis vectors |phi_i>.
template <typename Scalar = double>
class OrthonormalBasisT {
 public:
  using Matrix = ComplexMatrix<Scalar>;

  template <typename Derived>
  explicit OrthonormalBasisT(const Eigen::MatrixBase<Derived>& columns)
      : columns_(columns) {
    if (columns_.rows() < 1 || columns_.rows() != columns_.cols()) {
      throw std::invalid_argument("basis: matrix must be square");
    }
    if (!columns_.allFinite()) {
      throw std::invalid_argument("basis: entries must be finite");
    }
    const Matrix gram = columns_.adjoint() * columns_;
    const Scalar defect =
        (gram - Matrix::Identity(columns_.rows(), columns_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (defect > Scalar(kUnitarityTolerance)) {
      throw std::invalid_argument(
          "basis: unitarity violation, max |U*U - I| = " +
          std::to_string(static_cast<double>(defect)) +
          " exceeds tolerance 1e-10");
    }
  }

  static OrthonormalBasisT identity(Eigen::Index n) {
    return OrthonormalBasisT(Matrix::Identity(n, n));
  }

  Eigen::Index dim() const { return columns_.rows(); }
  const Matrix& matrix() const { return columns_; }
  auto column(Eigen::Index i) const { return columns_.col(i); }

 private:
  Matrix columns_;
};

using OrthonormalBasis = OrthonormalBasisT<double>;

namespace detail {

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* who) {
  if (a != b) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace detail

}  // namespace varbound
