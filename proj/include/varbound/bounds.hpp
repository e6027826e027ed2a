#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "varbound/qcore.hpp"
#include "varbound/types.hpp"

namespace varbound {

/// Interpolation weight lambda in [0, 1].
class Weight {
 public:
  explicit Weight(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw std::invalid_argument("weight: lambda must lie in [0, 1], got " +
                                  std::to_string(value));
    }
  }
  double value() const { return value_; }

 private:
  double value_;
};

/// All bound values plus the variance product for one (A, B, psi, basis)
/// instance. Every bound field is at most `product` up to roundoff.
template <typename Scalar = double>
struct BoundReportT {
  Scalar variance_a{};
  Scalar variance_b{};
  Scalar product{};
  Scalar robertson{};
  Scalar schrodinger{};
  Scalar mbp{};
  std::map<double, Scalar> callebaut;  // keyed by lambda, ascending
  Scalar milne{};
  Scalar combined{};
};

using BoundReport = BoundReportT<double>;

namespace detail {

// pow over nonnegative bases with the conventions pow(0, 0) = 1 and
// pow(0, e) = 0 for e > 0. Exact fast paths for e in {0, 1, 2} keep the
// lambda endpoints bit-identical to the plain sums they collapse to.
template <typename Scalar>
Scalar pow_nonneg(Scalar base, Scalar exponent) {
  if (exponent == Scalar(0)) return Scalar(1);
  if (base == Scalar(0)) return Scalar(0);
  if (exponent == Scalar(1)) return base;
  if (exponent == Scalar(2)) return base * base;
  return std::pow(base, exponent);
}

template <typename Scalar>
void require_magnitude_vector(const RealVector<Scalar>& v, const char* who) {
  if (!v.allFinite() || (v.array() < Scalar(0)).any()) {
    throw std::invalid_argument(std::string(who) +
                                ": entries must be finite and nonnegative");
  }
}

template <typename Scalar>
void require_equal_length(const RealVector<Scalar>& a,
                          const RealVector<Scalar>& b, const char* who) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(who) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

}  // namespace detail

/// Weighted interpolation product
///   sum_i a_i^(1+l) b_i^(1-l) * sum_i a_i^(1-l) b_i^(1+l),
/// sandwiched between (sum a_i b_i)^2 and sum a_i^2 * sum b_i^2 for any
/// lambda in [0, 1].
template <typename Scalar>
Scalar callebaut_product(const RealVector<Scalar>& a,
                         const RealVector<Scalar>& b, Weight w) {
  detail::require_equal_length(a, b, "callebaut_product");
  detail::require_magnitude_vector(a, "callebaut_product");
  detail::require_magnitude_vector(b, "callebaut_product");
  const Scalar lambda = Scalar(w.value());
  const Scalar up = Scalar(1) + lambda;
  const Scalar down = Scalar(1) - lambda;
  Scalar sum_up = 0;
  Scalar sum_down = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    sum_up += detail::pow_nonneg(a[i], up) * detail::pow_nonneg(b[i], down);
    sum_down += detail::pow_nonneg(a[i], down) * detail::pow_nonneg(b[i], up);
  }
  return sum_up * sum_down;
}

/// Milne product
///   sum_i (a_i^2 + b_i^2) * sum_i a_i^2 b_i^2 / (a_i^2 + b_i^2),
/// with an all-zero pair contributing nothing to the second sum. Sandwiched
/// like the weighted product above.
template <typename Scalar>
Scalar milne_product(const RealVector<Scalar>& a, const RealVector<Scalar>& b) {
  detail::require_equal_length(a, b, "milne_product");
  detail::require_magnitude_vector(a, "milne_product");
  detail::require_magnitude_vector(b, "milne_product");
  Scalar total = 0;
  Scalar harmonic = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Scalar aa = a[i] * a[i];
    const Scalar bb = b[i] * b[i];
    const Scalar s = aa + bb;
    total += s;
    if (s > Scalar(0)) harmonic += aa * bb / s;
  }
  return total * harmonic;
}

/// (1/4) |<[A, B]>|^2.
template <typename Scalar>
Scalar robertson_bound(const HermitianObservableT<Scalar>& a,
                       const HermitianObservableT<Scalar>& b,
                       const PureStateT<Scalar>& psi) {
  return Scalar(0.25) * std::norm(commutator_expectation(a, b, psi));
}

/// (1/4) |<[A, B]>|^2 + (<{A, B}>/2 - <A><B>)^2.
template <typename Scalar>
Scalar schrodinger_bound(const HermitianObservableT<Scalar>& a,
                         const HermitianObservableT<Scalar>& b,
                         const PureStateT<Scalar>& psi) {
  const Scalar covariance =
      Scalar(0.5) * anticommutator_expectation(a, b, psi) -
      expectation(a, psi) * expectation(b, psi);
  return robertson_bound(a, b, psi) + covariance * covariance;
}

/// Basis-dependent Cauchy-Schwarz bound in amplitude form,
/// (sum_n |alpha_n| |beta_n|)^2.
template <typename Scalar>
Scalar mbp_bound(const HermitianObservableT<Scalar>& a,
                 const HermitianObservableT<Scalar>& b,
                 const PureStateT<Scalar>& psi,
                 const OrthonormalBasisT<Scalar>& basis) {
  const RealVector<Scalar> am = magnitudes(amplitudes(a, psi, basis));
  const RealVector<Scalar> bm = magnitudes(amplitudes(b, psi, basis));
  Scalar overlap = 0;
  for (Eigen::Index i = 0; i < am.size(); ++i) {
    overlap += am[i] * bm[i];
  }
  return overlap * overlap;
}

/// Same bound evaluated in literal operator form,
///   (1/4) (sum_n |<[Abar, Bbar_n]> + <{Abar, Bbar_n}>|)^2
/// with Bbar_n = |phi_n><phi_n| Bbar. Each projected operator is built
/// explicitly and sandwiched term by term; agreement with the amplitude form
/// is an algebraic identity, and the two code paths share nothing beyond the
/// centered operators, so this doubles as a cross-check of mbp_bound.
template <typename Scalar>
Scalar mbp_bound_literal(const HermitianObservableT<Scalar>& a,
                         const HermitianObservableT<Scalar>& b,
                         const PureStateT<Scalar>& psi,
                         const OrthonormalBasisT<Scalar>& basis) {
  detail::require_same_dim(a.dim(), b.dim(), "mbp_bound_literal");
  detail::require_same_dim(a.dim(), psi.dim(), "mbp_bound_literal");
  detail::require_same_dim(a.dim(), basis.dim(), "mbp_bound_literal");
  const Eigen::Index n = a.dim();
  const auto& v = psi.vector();
  const ComplexMatrix<Scalar> eye = ComplexMatrix<Scalar>::Identity(n, n);
  const ComplexMatrix<Scalar> a_bar = a.matrix() - expectation(a, psi) * eye;
  const ComplexMatrix<Scalar> b_bar = b.matrix() - expectation(b, psi) * eye;
  Scalar sum = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const ComplexVector<Scalar> phi = basis.matrix().col(k);
    const ComplexMatrix<Scalar> b_k = phi * (phi.adjoint() * b_bar);
    const std::complex<Scalar> commutator =
        v.dot(a_bar * (b_k * v)) - v.dot(b_k * (a_bar * v));
    const std::complex<Scalar> anticommutator =
        v.dot(a_bar * (b_k * v)) + v.dot(b_k * (a_bar * v));
    sum += std::abs(commutator + anticommutator);
  }
  return sum * sum / Scalar(4);
}

/// max over { callebaut_product at each weight, milne_product }, all from the
/// amplitudes in the given basis.
template <typename Scalar>
Scalar combined_bound(const HermitianObservableT<Scalar>& a,
                      const HermitianObservableT<Scalar>& b,
                      const PureStateT<Scalar>& psi,
                      const OrthonormalBasisT<Scalar>& basis,
                      const std::vector<Weight>& weights) {
  if (weights.empty()) {
    throw std::invalid_argument("combined_bound: weights must be nonempty");
  }
  const RealVector<Scalar> am = magnitudes(amplitudes(a, psi, basis));
  const RealVector<Scalar> bm = magnitudes(amplitudes(b, psi, basis));
  Scalar best = milne_product(am, bm);
  for (const Weight& w : weights) {
    best = std::max(best, callebaut_product(am, bm, w));
  }
  return best;
}

/// Evaluates every bound for one instance.
template <typename Scalar>
BoundReportT<Scalar> full_report(const HermitianObservableT<Scalar>& a,
                                 const HermitianObservableT<Scalar>& b,
                                 const PureStateT<Scalar>& psi,
                                 const OrthonormalBasisT<Scalar>& basis,
                                 const std::vector<Weight>& weights) {
  if (weights.empty()) {
    throw std::invalid_argument("full_report: weights must be nonempty");
  }
  BoundReportT<Scalar> report;
  report.variance_a = variance(a, psi);
  report.variance_b = variance(b, psi);
  report.product = report.variance_a * report.variance_b;
  report.robertson = robertson_bound(a, b, psi);
  report.schrodinger = schrodinger_bound(a, b, psi);
  report.mbp = mbp_bound(a, b, psi, basis);
  const RealVector<Scalar> am = magnitudes(amplitudes(a, psi, basis));
  const RealVector<Scalar> bm = magnitudes(amplitudes(b, psi, basis));
  report.milne = milne_product(am, bm);
  report.combined = report.milne;
  for (const Weight& w : weights) {
    const Scalar value = callebaut_product(am, bm, w);
    report.callebaut[w.value()] = value;
    report.combined = std::max(report.combined, value);
  }
  return report;
}

}  // namespace varbound
