#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "varbound/basisopt.hpp"
#include "varbound/bounds.hpp"
#include "varbound/rng.hpp"
#include "varbound/types.hpp"

namespace varbound {

template <typename Scalar = double>
struct Spin1OperatorsT {
  HermitianObservableT<Scalar> lx;
  HermitianObservableT<Scalar> ly;
  HermitianObservableT<Scalar> lz;
};

using Spin1Operators = Spin1OperatorsT<double>;

/// Spin-1 angular momentum matrices (hbar = 1) in the L_z eigenbasis ordered
/// by eigenvalue 1, 0, -1.
template <typename Scalar = double>
Spin1OperatorsT<Scalar> spin1_operators() {
  using C = std::complex<Scalar>;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  ComplexMatrix<Scalar> lx(3, 3);
  lx << C(0), C(r), C(0),
        C(r), C(0), C(r),
        C(0), C(r), C(0);
  ComplexMatrix<Scalar> ly(3, 3);
  ly << C(0), C(0, -r), C(0),
        C(0, r), C(0), C(0, -r),
        C(0), C(0, r), C(0);
  ComplexMatrix<Scalar> lz(3, 3);
  lz << C(1), C(0), C(0),
        C(0), C(0), C(0),
        C(0), C(0), C(-1);
  return {HermitianObservableT<Scalar>(lx), HermitianObservableT<Scalar>(ly),
          HermitianObservableT<Scalar>(lz)};
}

/// cos(theta) |1> - sin(theta) |0> in the spin-1 representation above, i.e.
/// the vector (cos theta, -sin theta, 0).
template <typename Scalar = double>
PureStateT<Scalar> theta_state(Scalar theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("theta_state: theta must be finite");
  }
  ComplexVector<Scalar> v(3);
  v << std::complex<Scalar>(std::cos(theta)),
      std::complex<Scalar>(-std::sin(theta)), std::complex<Scalar>(0);
  return PureStateT<Scalar>(v);
}

template <typename Scalar = double>
struct PauliOperatorsT {
  HermitianObservableT<Scalar> x;
  HermitianObservableT<Scalar> y;
  HermitianObservableT<Scalar> z;
};

using PauliOperators = PauliOperatorsT<double>;

template <typename Scalar = double>
PauliOperatorsT<Scalar> pauli_operators() {
  using C = std::complex<Scalar>;
  ComplexMatrix<Scalar> x(2, 2), y(2, 2), z(2, 2);
  x << C(0), C(1), C(1), C(0);
  y << C(0), C(0, -1), C(0, 1), C(0);
  z << C(1), C(0), C(0), C(-1);
  return {HermitianObservableT<Scalar>(x), HermitianObservableT<Scalar>(y),
          HermitianObservableT<Scalar>(z)};
}

/// G + adjoint(G) with independent standard-normal real and imaginary parts,
/// deterministic per (n, seed).
inline HermitianObservable random_hermitian(Eigen::Index n,
                                            std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_hermitian: n must be >= 1");
  DeterministicRng rng(seed);
  MatrixXc g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  return HermitianObservable(g + g.adjoint());
}

/// Normalized complex Gaussian vector, deterministic per (n, seed). An
/// exactly-zero draw retries on the next substream.
inline PureState random_state(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_state: n must be >= 1");
  for (std::uint64_t attempt = 0;; ++attempt) {
    DeterministicRng rng(derive_seed(seed, attempt));
    VectorXc v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v[i] = std::complex<double>(rng.normal(), rng.normal());
    }
    const double norm = v.norm();
    if (norm > 0.0) return PureState(v / norm);
  }
}

/// Uniformly random rotation angles -> basis, deterministic per (n, seed).
inline OrthonormalBasis random_basis(Eigen::Index n, std::uint64_t seed) {
  DeterministicRng rng(seed);
  VectorXr flat(n * (n - 1));
  for (Eigen::Index k = 0; k + 1 < flat.size(); k += 2) {
    flat[k] = rng.uniform(0.0, std::numbers::pi / 2);
    flat[k + 1] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return unitary_from_params(BasisParams::from_flat(n, flat), n);
}

enum class BasisMode { kStandard, kOptimized };

struct SweepSpec {
  double theta_start = 0.0;
  double theta_end = std::numbers::pi;
  int steps = 181;
  std::vector<Weight> weights;
  BasisMode basis_mode = BasisMode::kStandard;
  OptimizerConfig optimizer;  // used only in optimized mode
};

struct SweepRow {
  double theta;
  BoundReport report;
  std::map<double, double> l1;  // optimized callebaut per lambda, if requested
  std::optional<double> l2;     // optimized milne, if requested
};

/// Evaluates the full report on an evenly spaced theta grid; rows ascend in
/// theta. In optimized mode each row additionally carries the basis-optimized
/// callebaut and milne values.
inline std::vector<SweepRow> sweep(
    const HermitianObservable& a, const HermitianObservable& b,
    const std::function<PureState(double)>& state_family,
    const SweepSpec& spec) {
  if (spec.steps < 2) {
    throw std::invalid_argument("sweep: steps must be >= 2");
  }
  if (!(spec.theta_end > spec.theta_start)) {
    throw std::invalid_argument("sweep: theta_end must exceed theta_start");
  }
  if (spec.weights.empty()) {
    throw std::invalid_argument("sweep: weights must be nonempty");
  }
  detail::require_same_dim(a.dim(), b.dim(), "sweep");
  const OrthonormalBasis standard = OrthonormalBasis::identity(a.dim());

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.steps));
  for (int j = 0; j < spec.steps; ++j) {
    const double theta =
        spec.theta_start + static_cast<double>(j) *
                               (spec.theta_end - spec.theta_start) /
                               static_cast<double>(spec.steps - 1);
    const PureState psi = state_family(theta);
    SweepRow row{theta, full_report(a, b, psi, standard, spec.weights), {}, {}};
    if (spec.basis_mode == BasisMode::kOptimized) {
      for (const Weight& w : spec.weights) {
        row.l1[w.value()] =
            optimize(a, b, psi, BoundKind::callebaut(w), spec.optimizer)
                .best_value;
      }
      row.l2 =
          optimize(a, b, psi, BoundKind::milne(), spec.optimizer).best_value;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace varbound
