#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "varbound/bounds.hpp"
#include "varbound/qcore.hpp"
#include "varbound/rng.hpp"
#include "varbound/types.hpp"

namespace varbound {

/// Selects which bound the basis search maximizes.
class BoundKind {
 public:
  static BoundKind callebaut(Weight lambda) {
    return BoundKind(Family::kCallebaut, lambda.value());
  }
  static BoundKind milne() { return BoundKind(Family::kMilne, 0.0); }

  bool is_callebaut() const { return family_ == Family::kCallebaut; }
  Weight lambda() const {
    if (!is_callebaut()) {
      throw std::logic_error("bound kind: milne has no lambda");
    }
    return Weight(lambda_);
  }
  std::string name() const {
    return is_callebaut() ? "callebaut" : "milne";
  }

 private:
  enum class Family { kCallebaut, kMilne };
  BoundKind(Family family, double lambda) : family_(family), lambda_(lambda) {}
  Family family_;
  double lambda_;
};

/// Angles of a product of complex plane rotations, one (theta, phi) pair per
/// coordinate plane (i, j) with i < j, in lexicographic order. theta is
/// wrapped into [0, pi/2] and phi into [0, 2 pi); wrapping changes the
/// generated matrix only by column sign flips, which the bound objectives
/// ignore. Column phases are deliberately not parameterized for the same
/// reason.
template <typename Scalar = double>
class BasisParamsT {
 public:
  struct Rotation {
    Scalar theta;
    Scalar phi;
  };

  BasisParamsT(Eigen::Index dimension, std::vector<Rotation> rotations)
      : dimension_(dimension), rotations_(std::move(rotations)) {
    const Eigen::Index expected = dimension * (dimension - 1) / 2;
    if (dimension < 1 ||
        static_cast<Eigen::Index>(rotations_.size()) != expected) {
      throw std::invalid_argument(
          "basis params: dimension " + std::to_string(dimension) +
          " requires " + std::to_string(expected) + " rotations, got " +
          std::to_string(rotations_.size()));
    }
    for (const Rotation& r : rotations_) {
      if (!std::isfinite(r.theta) || !std::isfinite(r.phi)) {
        throw std::invalid_argument("basis params: angles must be finite");
      }
    }
    wrap_canonically();
  }

  static BasisParamsT zero(Eigen::Index dimension) {
    return BasisParamsT(
        dimension,
        std::vector<Rotation>(
            static_cast<std::size_t>(dimension * (dimension - 1) / 2),
            Rotation{Scalar(0), Scalar(0)}));
  }

  /// Unpacks [theta_0, phi_0, theta_1, phi_1, ...].
  static BasisParamsT from_flat(Eigen::Index dimension,
                                const RealVector<Scalar>& flat) {
    if (flat.size() != dimension * (dimension - 1)) {
      throw std::invalid_argument(
          "basis params: flat vector has wrong length " +
          std::to_string(flat.size()));
    }
    std::vector<Rotation> rotations;
    rotations.reserve(static_cast<std::size_t>(flat.size() / 2));
    for (Eigen::Index k = 0; k + 1 < flat.size(); k += 2) {
      rotations.push_back(Rotation{flat[k], flat[k + 1]});
    }
    return BasisParamsT(dimension, std::move(rotations));
  }

  Eigen::Index dimension() const { return dimension_; }
  const std::vector<Rotation>& rotations() const { return rotations_; }

  RealVector<Scalar> flat() const {
    RealVector<Scalar> out(2 * static_cast<Eigen::Index>(rotations_.size()));
    for (std::size_t k = 0; k < rotations_.size(); ++k) {
      out[2 * static_cast<Eigen::Index>(k)] = rotations_[k].theta;
      out[2 * static_cast<Eigen::Index>(k) + 1] = rotations_[k].phi;
    }
    return out;
  }

 private:
  // Reducing theta by pi, or replacing (theta, phi) with (pi - theta,
  // phi + pi), negates the 2x2 block of that factor, i.e. multiplies the
  // factor by column signs D on its plane. D does not commute with later
  // factors outright: pushing it through a factor that touches exactly one
  // flipped index advances that factor's phi by pi. Propagating every D to
  // the end this way leaves only column signs on the generated matrix, so
  // the wrapped parameters are objective-equivalent to the raw ones.
  void wrap_canonically() {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    std::vector<bool> flipped(static_cast<std::size_t>(dimension_), false);
    std::size_t k = 0;
    for (Eigen::Index a = 0; a < dimension_; ++a) {
      for (Eigen::Index b = a + 1; b < dimension_; ++b) {
        const auto ia = static_cast<std::size_t>(a);
        const auto ib = static_cast<std::size_t>(b);
        Rotation& r = rotations_[k++];
        if (flipped[ia] != flipped[ib]) r.phi += pi;
        r.theta = std::fmod(r.theta, two_pi);
        if (r.theta < Scalar(0)) r.theta += two_pi;
        if (r.theta >= pi) {
          r.theta -= pi;
          flipped[ia] = !flipped[ia];
          flipped[ib] = !flipped[ib];
        }
        if (r.theta > pi / Scalar(2)) {
          r.theta = pi - r.theta;
          r.phi += pi;
          flipped[ia] = !flipped[ia];
          flipped[ib] = !flipped[ib];
        }
        r.phi = std::fmod(r.phi, two_pi);
        if (r.phi < Scalar(0)) r.phi += two_pi;
      }
    }
  }

  Eigen::Index dimension_;
  std::vector<Rotation> rotations_;
};

using BasisParams = BasisParamsT<double>;

struct OptimizerConfig {
  int restarts = 16;
  int max_iterations = 2000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
};

template <typename Scalar = double>
struct OptResultT {
  Scalar best_value;
  BasisParamsT<Scalar> best_params;
  OrthonormalBasisT<Scalar> best_basis;
  std::int64_t evaluations;
  std::vector<Scalar> per_restart_values;
};

using OptResult = OptResultT<double>;

namespace detail {

// U <- U * G(i, j, theta, phi), mixing columns i and j:
//   col_i' =  cos(t) col_i + e^{+i phi} sin(t) col_j
//   col_j' = -e^{-i phi} sin(t) col_i + cos(t) col_j
template <typename Scalar>
void apply_plane_rotation(ComplexMatrix<Scalar>& u, Eigen::Index i,
                          Eigen::Index j, Scalar theta, Scalar phi) {
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  const std::complex<Scalar> phase = std::polar(Scalar(1), phi);
  const ComplexVector<Scalar> col_i = u.col(i);
  u.col(i) = c * col_i + (phase * s) * u.col(j);
  u.col(j) = (-std::conj(phase) * s) * col_i + c * u.col(j);
}

/// Ordered product of plane rotations applied to the identity; `flat` packs
/// (theta, phi) pairs in the lexicographic plane order.
template <typename Scalar>
ComplexMatrix<Scalar> givens_product(Eigen::Index n,
                                     const RealVector<Scalar>& flat) {
  if (flat.size() != n * (n - 1)) {
    throw std::invalid_argument("givens_product: expected " +
                                std::to_string(n * (n - 1)) +
                                " angles, got " + std::to_string(flat.size()));
  }
  ComplexMatrix<Scalar> u = ComplexMatrix<Scalar>::Identity(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      apply_plane_rotation(u, i, j, flat[2 * k], flat[2 * k + 1]);
      ++k;
    }
  }
  return u;
}

struct NelderMeadOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-10;
  double diameter_tolerance = 1e-9;
};

template <typename Scalar>
struct NelderMeadOutcome {
  RealVector<Scalar> x;
  Scalar f;
  int iterations;
};

/// Downhill simplex minimization (standard Lagarias coefficients). Stops when
/// the simplex objective spread falls below f_tolerance, when the simplex
/// collapses below diameter_tolerance, or at max_iterations.
template <typename Scalar, typename F>
NelderMeadOutcome<Scalar> nelder_mead(F&& f, const RealVector<Scalar>& start,
                                      Scalar step,
                                      const NelderMeadOptions& options) {
  const Eigen::Index d = start.size();
  std::vector<RealVector<Scalar>> xs(static_cast<std::size_t>(d) + 1, start);
  for (Eigen::Index k = 0; k < d; ++k) {
    xs[static_cast<std::size_t>(k) + 1][k] += step;
  }
  std::vector<Scalar> fs(xs.size());
  for (std::size_t v = 0; v < xs.size(); ++v) fs[v] = f(xs[v]);

  std::vector<std::size_t> order(xs.size());
  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    if (fs[worst] - fs[best] < Scalar(options.f_tolerance)) break;
    Scalar diameter = 0;
    for (std::size_t v = 0; v < xs.size(); ++v) {
      diameter = std::max(
          diameter, (xs[v] - xs[best]).template lpNorm<Eigen::Infinity>());
    }
    if (diameter < Scalar(options.diameter_tolerance)) break;

    RealVector<Scalar> centroid = RealVector<Scalar>::Zero(d);
    for (std::size_t v = 0; v < order.size(); ++v) {
      if (order[v] != worst) centroid += xs[order[v]];
    }
    centroid /= Scalar(static_cast<double>(d));

    const RealVector<Scalar> reflected = centroid + (centroid - xs[worst]);
    const Scalar f_reflected = f(reflected);
    if (f_reflected < fs[best]) {
      const RealVector<Scalar> expanded =
          centroid + Scalar(2) * (reflected - centroid);
      const Scalar f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fs[worst];
    const RealVector<Scalar> contracted =
        outside ? RealVector<Scalar>(centroid +
                                     Scalar(0.5) * (reflected - centroid))
                : RealVector<Scalar>(centroid +
                                     Scalar(0.5) * (xs[worst] - centroid));
    const Scalar f_contracted = f(contracted);
    if (f_contracted < (outside ? f_reflected : fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }
    for (std::size_t v = 0; v < xs.size(); ++v) {  // shrink toward best
      if (v == best) continue;
      xs[v] = xs[best] + Scalar(0.5) * (xs[v] - xs[best]);
      fs[v] = f(xs[v]);
    }
  }

  std::size_t winner = 0;
  for (std::size_t v = 1; v < xs.size(); ++v) {
    if (fs[v] < fs[winner]) winner = v;
  }
  return NelderMeadOutcome<Scalar>{xs[winner], fs[winner], iteration};
}

}  // namespace detail

/// Builds the basis generated by the rotation product for `p`.
template <typename Scalar>
OrthonormalBasisT<Scalar> unitary_from_params(const BasisParamsT<Scalar>& p,
                                              Eigen::Index n) {
  if (p.dimension() != n) {
    throw std::invalid_argument(
        "unitary_from_params: params are for dimension " +
        std::to_string(p.dimension()) + ", requested " + std::to_string(n));
  }
  return OrthonormalBasisT<Scalar>(detail::givens_product(n, p.flat()));
}

/// Reusable bound evaluator for a fixed (A, B, psi, kind). The centered
/// images of A and B do not depend on the basis, so they are formed once.
template <typename Scalar = double>
class BoundObjectiveT {
 public:
  BoundObjectiveT(const HermitianObservableT<Scalar>& a,
                  const HermitianObservableT<Scalar>& b,
                  const PureStateT<Scalar>& psi, BoundKind kind)
      : dimension_(a.dim()),
        centered_a_(centered_apply(a, psi)),
        centered_b_(centered_apply(b, psi)),
        kind_(kind) {
    detail::require_same_dim(a.dim(), b.dim(), "bound objective");
    detail::require_same_dim(a.dim(), psi.dim(), "bound objective");
  }

  Eigen::Index dimension() const { return dimension_; }
  Eigen::Index angle_count() const { return dimension_ * (dimension_ - 1); }

  /// Evaluates at a packed angle vector (any real angles, no wrapping).
  Scalar operator()(const RealVector<Scalar>& flat_angles) const {
    const ComplexMatrix<Scalar> u =
        detail::givens_product(dimension_, flat_angles);
    const RealVector<Scalar> am =
        magnitudes<Scalar>(u.adjoint() * centered_a_);
    const RealVector<Scalar> bm =
        magnitudes<Scalar>(u.adjoint() * centered_b_);
    return kind_.is_callebaut() ? callebaut_product(am, bm, kind_.lambda())
                                : milne_product(am, bm);
  }

 private:
  Eigen::Index dimension_;
  ComplexVector<Scalar> centered_a_;
  ComplexVector<Scalar> centered_b_;
  BoundKind kind_;
};

using BoundObjective = BoundObjectiveT<double>;

/// Bound value for the basis generated by `p`. At zero params this equals the
/// standard-basis value from the bounds module.
template <typename Scalar>
Scalar objective(const BasisParamsT<Scalar>& p,
                 const HermitianObservableT<Scalar>& a,
                 const HermitianObservableT<Scalar>& b,
                 const PureStateT<Scalar>& psi, BoundKind kind) {
  detail::require_same_dim(p.dimension(), a.dim(), "objective");
  const BoundObjectiveT<Scalar> f(a, b, psi, kind);
  return f(p.flat());
}

/// Maximizes the selected bound over bases with multi-restart Nelder-Mead in
/// angle space. Restart 0 always starts from the standard basis, so the
/// result never falls below the fixed-basis bound; remaining restarts draw
/// uniform random angles from a stream seeded with cfg.seed + restart index.
template <typename Scalar>
OptResultT<Scalar> optimize(const HermitianObservableT<Scalar>& a,
                            const HermitianObservableT<Scalar>& b,
                            const PureStateT<Scalar>& psi, BoundKind kind,
                            const OptimizerConfig& cfg) {
  if (cfg.restarts < 1 || cfg.max_iterations < 1 || !(cfg.tolerance > 0)) {
    throw std::invalid_argument(
        "optimize: config requires restarts >= 1, max_iterations >= 1, "
        "tolerance > 0");
  }
  const BoundObjectiveT<Scalar> f(a, b, psi, kind);
  const Eigen::Index n = f.dimension();
  const Eigen::Index dof = f.angle_count();
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;

  std::int64_t evaluations = 0;
  auto count_negated = [&](const RealVector<Scalar>& x) {
    ++evaluations;
    return -f(x);
  };

  const detail::NelderMeadOptions nm_options{cfg.max_iterations, cfg.tolerance,
                                             1e-9};
  std::vector<Scalar> per_restart;
  per_restart.reserve(static_cast<std::size_t>(cfg.restarts));
  std::optional<BasisParamsT<Scalar>> best_params;
  Scalar best_value = 0;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    RealVector<Scalar> start = RealVector<Scalar>::Zero(dof);
    if (restart > 0) {
      DeterministicRng rng(cfg.seed + static_cast<std::uint64_t>(restart));
      for (Eigen::Index k = 0; k + 1 < dof; k += 2) {
        start[k] = Scalar(rng.uniform(0.0, std::numbers::pi / 2));
        start[k + 1] = Scalar(rng.uniform(0.0, 2.0 * std::numbers::pi));
      }
    }

    BasisParamsT<Scalar> params = BasisParamsT<Scalar>::zero(n);
    Scalar value;
    if (dof == 0) {
      value = f(start);
      ++evaluations;
    } else {
      const auto outcome = detail::nelder_mead<Scalar>(
          count_negated, start, Scalar(0.35), nm_options);
      params = BasisParamsT<Scalar>::from_flat(n, outcome.x);
      value = f(params.flat());  // canonical-wrapped angles, same value
      ++evaluations;
      if (restart == 0) {
        const Scalar standard = f(RealVector<Scalar>::Zero(dof));
        ++evaluations;
        if (standard > value) {
          params = BasisParamsT<Scalar>::zero(n);
          value = standard;
        }
      }
    }
    per_restart.push_back(value);
    if (!best_params.has_value() || value > best_value) {
      best_params = params;
      best_value = value;
    }
  }

  return OptResultT<Scalar>{best_value, *best_params,
                            unitary_from_params(*best_params, n), evaluations,
                            std::move(per_restart)};
}

/// max over { optimized milne, optimized callebaut(lambda) for each weight }.
template <typename Scalar>
Scalar l1_l2_combined(const HermitianObservableT<Scalar>& a,
                      const HermitianObservableT<Scalar>& b,
                      const PureStateT<Scalar>& psi,
                      const std::vector<Weight>& weights,
                      const OptimizerConfig& cfg) {
  if (weights.empty()) {
    throw std::invalid_argument("l1_l2_combined: weights must be nonempty");
  }
  Scalar best = optimize(a, b, psi, BoundKind::milne(), cfg).best_value;
  for (const Weight& w : weights) {
    best = std::max(
        best, optimize(a, b, psi, BoundKind::callebaut(w), cfg).best_value);
  }
  return best;
}

}  // namespace varbound
