#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "varbound/basisopt.hpp"
#include "varbound/bounds.hpp"
#include "varbound/qcore.hpp"
#include "varbound/rng.hpp"
#include "varbound/scenarios.hpp"
#include "varbound/types.hpp"

namespace varbound {

struct VerifyFailure {
  std::string check;
  std::string instance;
  std::string observed;
};

/// Aggregate outcome of a verification run. `worst_margin` is the most
/// negative slack seen across all inequality checks; a check fails exactly
/// when its slack drops below minus its tolerance.
struct VerifyReport {
  std::int64_t checks_run = 0;
  std::vector<VerifyFailure> failures;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::map<std::string, std::int64_t> checks_by_name;
};

namespace detail {

/// Neumaier-compensated accumulator. Reference sums in this module must not
/// share the plain left-fold pipeline of the bounds kernels they check.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline void record_margin(VerifyReport& report, const std::string& check,
                          const std::string& instance, double margin,
                          double tolerance, const std::string& observed) {
  ++report.checks_run;
  ++report.checks_by_name[check];
  report.worst_margin = std::min(report.worst_margin, margin);
  if (!(margin >= -tolerance)) {
    report.failures.push_back(VerifyFailure{check, instance, observed});
  }
}

inline void merge(VerifyReport& into, const VerifyReport& from) {
  into.checks_run += from.checks_run;
  into.failures.insert(into.failures.end(), from.failures.begin(),
                       from.failures.end());
  into.worst_margin = std::min(into.worst_margin, from.worst_margin);
  for (const auto& [name, count] : from.checks_by_name) {
    into.checks_by_name[name] += count;
  }
}

inline std::string describe(double lhs, double rhs) {
  std::ostringstream out;
  out.precision(17);
  out << lhs << " vs " << rhs;
  return out.str();
}

/// Reference ends of both sandwiches, recomputed with compensated sums.
inline double reference_lower(const VectorXr& a, const VectorXr& b) {
  CompensatedSum overlap;
  for (Eigen::Index i = 0; i < a.size(); ++i) overlap.add(a[i] * b[i]);
  return overlap.value() * overlap.value();
}

inline double reference_upper(const VectorXr& a, const VectorXr& b) {
  CompensatedSum aa, bb;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    aa.add(a[i] * a[i]);
    bb.add(b[i] * b[i]);
  }
  return aa.value() * bb.value();
}

inline VectorXr random_magnitudes(Eigen::Index n, std::uint64_t seed,
                                  bool strictly_positive) {
  DeterministicRng rng(seed);
  VectorXr v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = std::abs(rng.normal());
    if (strictly_positive && x == 0.0) x = 0.5;
    v[i] = x;
  }
  return v;
}

}  // namespace detail

/// Best objective value over `samples` uniformly drawn bases; a lower witness
/// for the supremum the optimizer chases. Extending `samples` with the same
/// seed extends the same draw stream, so the result is monotone in it.
inline double random_basis_search(const HermitianObservable& a,
                                  const HermitianObservable& b,
                                  const PureState& psi, BoundKind kind,
                                  std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) {
    throw std::invalid_argument("random_basis_search: samples must be >= 1");
  }
  const BoundObjective f(a, b, psi, kind);
  const Eigen::Index dof = f.angle_count();
  DeterministicRng rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  VectorXr flat(dof);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Eigen::Index k = 0; k + 1 < dof; k += 2) {
      flat[k] = rng.uniform(0.0, std::numbers::pi / 2);
      flat[k + 1] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    best = std::max(best, f(flat));
  }
  return best;
}

/// Asserts both Callebaut sandwich inequalities at every grid weight against
/// compensated reference ends (relative tolerance 1e-10), and nondecreasing
/// values along an ascending grid. With a zero entry present, monotonicity is
/// skipped at the lambda = 1 endpoint, where the zero-power convention makes
/// the value jump; the sandwich itself is still asserted there.
inline VerifyReport check_sandwich_callebaut(const VectorXr& a,
                                             const VectorXr& b,
                                             const std::vector<Weight>& grid) {
  constexpr double tol = 1e-10;
  VerifyReport report;
  const double lower = detail::reference_lower(a, b);
  const double upper = detail::reference_upper(a, b);
  const double scale = std::max({1.0, lower, upper});
  const bool strictly_positive =
      (a.array() > 0.0).all() && (b.array() > 0.0).all();

  double previous = 0.0;
  bool have_previous = false;
  for (const Weight& w : grid) {
    const double mid = callebaut_product(a, b, w);
    std::ostringstream instance;
    instance << "n=" << a.size() << " lambda=" << w.value();
    detail::record_margin(report, "callebaut_sandwich_lower", instance.str(),
                          (mid - lower) / scale, tol,
                          detail::describe(lower, mid));
    detail::record_margin(report, "callebaut_sandwich_upper", instance.str(),
                          (upper - mid) / scale, tol,
                          detail::describe(mid, upper));
    if (have_previous) {
      const bool skip_endpoint = !strictly_positive && w.value() == 1.0;
      if (!skip_endpoint) {
        detail::record_margin(report, "callebaut_monotone", instance.str(),
                              (mid - previous) / scale, tol,
                              detail::describe(previous, mid));
      }
    }
    previous = mid;
    have_previous = true;
  }
  return report;
}

/// Asserts (sum ab)^2 <= milne_product <= sum a^2 sum b^2 at relative
/// tolerance 1e-10 against compensated reference ends.
inline VerifyReport check_sandwich_milne(const VectorXr& a, const VectorXr& b) {
  constexpr double tol = 1e-10;
  VerifyReport report;
  const double lower = detail::reference_lower(a, b);
  const double upper = detail::reference_upper(a, b);
  const double scale = std::max({1.0, lower, upper});
  const double mid = milne_product(a, b);
  std::ostringstream instance;
  instance << "n=" << a.size();
  detail::record_margin(report, "milne_sandwich_lower", instance.str(),
                        (mid - lower) / scale, tol,
                        detail::describe(lower, mid));
  detail::record_margin(report, "milne_sandwich_upper", instance.str(),
                        (upper - mid) / scale, tol,
                        detail::describe(mid, upper));
  return report;
}

namespace detail {

inline void check_close(VerifyReport& report, const std::string& check,
                        const std::string& instance, double observed,
                        double expected, double tolerance) {
  record_margin(report, check, instance, -std::abs(observed - expected),
                tolerance, describe(observed, expected));
}

inline void verify_spin1_fixtures(VerifyReport& report) {
  constexpr double tol = 1e-10;
  const auto ops = spin1_operators();
  const OrthonormalBasis standard = OrthonormalBasis::identity(3);
  const std::vector<Weight> weights{Weight(1.0 / 3.0), Weight(0.5)};

  struct Fixture {
    double theta;
    double product, robertson, schrodinger, mbp, milne, cal13, cal12;
  };
  const std::vector<Fixture> fixtures = {
      {0.0, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25},
      {std::numbers::pi / 4, 0.1875, 0.0625, 0.0625, 0.0625, 0.125, 0.0625,
       0.0625},
  };
  for (const Fixture& fx : fixtures) {
    const auto r =
        full_report(ops.lx, ops.ly, theta_state(fx.theta), standard, weights);
    const std::string at = "theta=" + std::to_string(fx.theta);
    check_close(report, "spin1_product", at, r.product, fx.product, tol);
    check_close(report, "spin1_robertson", at, r.robertson, fx.robertson, tol);
    check_close(report, "spin1_schrodinger", at, r.schrodinger, fx.schrodinger,
                tol);
    check_close(report, "spin1_mbp", at, r.mbp, fx.mbp, tol);
    check_close(report, "spin1_milne", at, r.milne, fx.milne, tol);
    check_close(report, "spin1_callebaut", at, r.callebaut.at(1.0 / 3.0),
                fx.cal13, tol);
    check_close(report, "spin1_callebaut", at, r.callebaut.at(0.5), fx.cal12,
                tol);
  }
  // theta = pi/2: product 1, robertson 0, basis-dependent bounds tight.
  const auto r = full_report(ops.lx, ops.ly,
                             theta_state(std::numbers::pi / 2), standard,
                             weights);
  check_close(report, "spin1_product", "theta=pi/2", r.product, 1.0, tol);
  check_close(report, "spin1_robertson", "theta=pi/2", r.robertson, 0.0, tol);
  check_close(report, "spin1_mbp", "theta=pi/2", r.mbp, 1.0, tol);
  check_close(report, "spin1_milne", "theta=pi/2", r.milne, 1.0, tol);
}

inline void verify_construction_rejections(VerifyReport& report) {
  // Expected-failure passes: invalid inputs must be rejected at construction.
  {
    MatrixXc m(2, 2);
    m << std::complex<double>(0, 0), std::complex<double>(1, 0),
        std::complex<double>(2, 0), std::complex<double>(0, 0);
    bool rejected = false;
    try {
      HermitianObservable bad(m);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    record_margin(report, "reject_non_hermitian", "2x2", rejected ? 0.0 : -1.0,
                  0.0, rejected ? "rejected" : "accepted");
  }
  {
    VectorXc v(2);
    v << std::complex<double>(1, 0), std::complex<double>(1, 0);
    bool rejected = false;
    try {
      PureState bad(v);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    record_margin(report, "reject_unnormalized_state", "n=2",
                  rejected ? 0.0 : -1.0, 0.0,
                  rejected ? "rejected" : "accepted");
  }
  {
    MatrixXc m = MatrixXc::Identity(2, 2) * std::complex<double>(1.5, 0);
    bool rejected = false;
    try {
      OrthonormalBasis bad(m);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    record_margin(report, "reject_non_unitary_basis", "2x2",
                  rejected ? 0.0 : -1.0, 0.0,
                  rejected ? "rejected" : "accepted");
  }
}

}  // namespace detail

/// Runs the full cross-check battery: Parseval sums, literal-vs-amplitude
/// agreement of the projected-operator bound, dominance of the weighted and
/// Milne bounds over it, upper-bound soundness, sandwich scans, spin-1
/// analytic fixtures, optimizer anchoring, and construction rejections.
/// Deterministic per (seed, trials). `inject_fault` plants one failing check
/// so harnesses can confirm the failure path end to end.
inline VerifyReport verify_suite(std::uint64_t seed, int trials,
                                 bool inject_fault = false) {
  if (trials < 1) {
    throw std::invalid_argument("verify_suite: trials must be >= 1");
  }
  VerifyReport report;
  detail::verify_spin1_fixtures(report);
  detail::verify_construction_rejections(report);

  const std::vector<Weight> report_weights{Weight(1.0 / 3.0), Weight(0.5)};
  std::vector<Weight> lambda_grid;
  for (int k = 0; k < 10; ++k) lambda_grid.emplace_back(0.1 * k);
  lambda_grid.emplace_back(1.0);  // exact endpoint, not 0.1 * 10

  for (int t = 0; t < trials; ++t) {
    const Eigen::Index n = 2 + (t % 5);
    const auto a = random_hermitian(n, derive_seed(seed, 1000 + 10 * t));
    const auto b = random_hermitian(n, derive_seed(seed, 1001 + 10 * t));
    const auto psi = random_state(n, derive_seed(seed, 1002 + 10 * t));
    const auto basis = random_basis(n, derive_seed(seed, 1003 + 10 * t));
    std::ostringstream inst;
    inst << "trial=" << t << " n=" << n;

    {
      // Parseval: compensated magnitude-square sum vs the variance.
      const VectorXc alpha = amplitudes(a, psi, basis);
      detail::CompensatedSum parseval;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        parseval.add(std::norm(alpha[i]));
      }
      detail::check_close(report, "parseval", inst.str(), parseval.value(),
                          variance(a, psi), 1e-10);
    }
    {
      // Literal operator form of the projected bound vs the amplitude form,
      // on unit-Frobenius copies so the 1e-12 agreement is scale-meaningful.
      const HermitianObservable an(a.matrix() / a.matrix().norm());
      const HermitianObservable bn(b.matrix() / b.matrix().norm());
      detail::check_close(report, "mbp_literal_agreement", inst.str(),
                          mbp_bound_literal(an, bn, psi, basis),
                          mbp_bound(an, bn, psi, basis), 1e-12);
    }
    {
      const auto r = full_report(a, b, psi, basis, report_weights);
      const double scale = std::max(1.0, r.product);
      detail::record_margin(report, "dominance_milne_over_mbp", inst.str(),
                            (r.milne - r.mbp) / scale, 1e-10,
                            detail::describe(r.mbp, r.milne));
      for (const auto& [lambda, value] : r.callebaut) {
        detail::record_margin(report, "dominance_callebaut_over_mbp",
                              inst.str(), (value - r.mbp) / scale, 1e-10,
                              detail::describe(r.mbp, value));
      }
      const auto check_upper = [&](const char* name, double bound) {
        detail::record_margin(report, "soundness_upper", inst.str() + " " + name,
                              r.product - bound, 1e-8,
                              detail::describe(bound, r.product));
      };
      check_upper("robertson", r.robertson);
      check_upper("schrodinger", r.schrodinger);
      check_upper("mbp", r.mbp);
      check_upper("milne", r.milne);
      for (const auto& [lambda, value] : r.callebaut) {
        check_upper("callebaut", value);
      }
      detail::record_margin(report, "robertson_le_schrodinger", inst.str(),
                            (r.schrodinger - r.robertson) / scale, 1e-12,
                            detail::describe(r.robertson, r.schrodinger));
    }
    {
      const Eigen::Index len = 2 + (t % 7);
      const VectorXr ra = detail::random_magnitudes(
          len, derive_seed(seed, 1004 + 10 * t), false);
      const VectorXr rb = detail::random_magnitudes(
          len, derive_seed(seed, 1005 + 10 * t), false);
      detail::merge(report, check_sandwich_callebaut(ra, rb, lambda_grid));
      detail::merge(report, check_sandwich_milne(ra, rb));
    }
  }

  // Optimizer anchoring on a subset of trials with a reduced configuration.
  const int optimizer_trials = std::max(1, trials / 10);
  for (int t = 0; t < optimizer_trials; ++t) {
    const Eigen::Index n = 3;
    const auto a = random_hermitian(n, derive_seed(seed, 5000 + 4 * t));
    const auto b = random_hermitian(n, derive_seed(seed, 5001 + 4 * t));
    const auto psi = random_state(n, derive_seed(seed, 5002 + 4 * t));
    const BoundKind kind = (t % 2 == 0)
                               ? BoundKind::milne()
                               : BoundKind::callebaut(Weight(0.5));
    OptimizerConfig cfg;
    cfg.restarts = 3;
    cfg.max_iterations = 250;
    cfg.tolerance = 1e-9;
    cfg.seed = derive_seed(seed, 5003 + 4 * t);
    const auto result = optimize(a, b, psi, kind, cfg);
    const double standard =
        objective(BasisParams::zero(n), a, b, psi, kind);
    const double product = variance(a, psi) * variance(b, psi);
    std::ostringstream inst;
    inst << "trial=" << t << " kind=" << kind.name();
    detail::record_margin(report, "optimizer_anchor", inst.str(),
                          result.best_value - standard, 1e-12,
                          detail::describe(standard, result.best_value));
    detail::record_margin(report, "optimizer_soundness", inst.str(),
                          product - result.best_value, 1e-8,
                          detail::describe(result.best_value, product));
  }

  if (inject_fault) {
    detail::record_margin(report, "injected_fault", "harness", -1.0, 0.0,
                          "deliberate failure for harness validation");
  }
  return report;
}

}  // namespace varbound
