#include "varbound/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <vector>

#include "varbound/basisopt.hpp"
#include "varbound/bounds.hpp"
#include "varbound/csv.hpp"
#include "varbound/oracle.hpp"
#include "varbound/scenarios.hpp"

namespace varbound {

namespace {

std::string lambda_suffix(double lambda) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", lambda);
  return buffer;
}

void print_field(std::ostream& out, const std::string& key, double value) {
  out << key << " " << format_value(value) << "\n";
}

// The report fields are mathematically bracketed by [0, product]; a breach
// beyond roundoff means the pipeline itself is corrupt, which is exit code 1
// territory rather than a user error.
void require_report_invariants(const BoundReport& r) {
  const double ceiling = r.product + 1e-8;
  const auto check = [&](const char* name, double value) {
    if (!(value >= 0.0) || !(value <= ceiling)) {
      throw std::logic_error(std::string("bound report invariant violated: ") +
                             name + " = " + format_value(value) +
                             ", product = " + format_value(r.product));
    }
  };
  check("robertson", r.robertson);
  check("schrodinger", r.schrodinger);
  check("mbp", r.mbp);
  check("milne", r.milne);
  check("combined", r.combined);
  for (const auto& [lambda, value] : r.callebaut) check("callebaut", value);
}

int classify(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const ScenarioError*>(&e) != nullptr ||
      dynamic_cast<const std::invalid_argument*>(&e) != nullptr) {
    return kExitUsage;
  }
  return kExitFailure;
}

}  // namespace

int run_bounds(const BoundsCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    Scenario scenario = load_scenario(cmd.scenario_path);
    const BasisMode mode = cmd.basis_override.value_or(scenario.basis);
    const OrthonormalBasis standard =
        OrthonormalBasis::identity(scenario.dimension);
    const BoundReport report =
        full_report(scenario.observable_a, scenario.observable_b,
                    scenario.state, standard, scenario.weights);
    require_report_invariants(report);

    print_field(out, "variance_a", report.variance_a);
    print_field(out, "variance_b", report.variance_b);
    print_field(out, "product", report.product);
    print_field(out, "robertson", report.robertson);
    print_field(out, "schrodinger", report.schrodinger);
    print_field(out, "mbp", report.mbp);
    for (const auto& [lambda, value] : report.callebaut) {
      print_field(out, "callebaut_" + lambda_suffix(lambda), value);
    }
    print_field(out, "milne", report.milne);
    print_field(out, "combined", report.combined);

    if (mode == BasisMode::kOptimized) {
      std::int64_t evaluations = 0;
      for (const Weight& w : scenario.weights) {
        const auto result =
            optimize(scenario.observable_a, scenario.observable_b,
                     scenario.state, BoundKind::callebaut(w),
                     scenario.optimizer);
        print_field(out, "l1_" + lambda_suffix(w.value()), result.best_value);
        evaluations += result.evaluations;
      }
      const auto milne_result =
          optimize(scenario.observable_a, scenario.observable_b,
                   scenario.state, BoundKind::milne(), scenario.optimizer);
      print_field(out, "l2", milne_result.best_value);
      evaluations += milne_result.evaluations;
      out << "optimizer_restarts " << scenario.optimizer.restarts << "\n";
      out << "optimizer_seed " << scenario.optimizer.seed << "\n";
      out << "optimizer_evaluations " << evaluations << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return classify(e, err);
  }
}

int run_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    Scenario scenario = load_scenario(cmd.scenario_path);
    if (!scenario.theta.has_value()) {
      throw ScenarioError("sweep: scenario state must use the theta preset");
    }
    SweepSpec spec;
    spec.theta_start = cmd.theta_start;
    spec.theta_end = cmd.theta_end;
    spec.steps = cmd.steps;
    spec.weights = scenario.weights;
    spec.basis_mode = scenario.basis;
    spec.optimizer = scenario.optimizer;

    const auto rows =
        sweep(scenario.observable_a, scenario.observable_b,
              [](double theta) { return theta_state(theta); }, spec);
    write_sweep_csv(cmd.output_path, rows);
    out << "wrote " << rows.size() << " rows to " << cmd.output_path.string()
        << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return classify(e, err);
  }
}

int run_optimize(const OptimizeCommand& cmd, std::ostream& out,
                 std::ostream& err) {
  try {
    Scenario scenario = load_scenario(cmd.scenario_path);
    if (cmd.restarts.has_value()) scenario.optimizer.restarts = *cmd.restarts;
    if (cmd.seed.has_value()) scenario.optimizer.seed = *cmd.seed;

    BoundKind kind = BoundKind::milne();
    if (cmd.kind == "callebaut") {
      if (!cmd.lambda.has_value()) {
        throw ScenarioError("optimize: --lambda is required for callebaut");
      }
      kind = BoundKind::callebaut(Weight(*cmd.lambda));
    } else if (cmd.kind == "milne") {
      if (cmd.lambda.has_value()) {
        throw ScenarioError("optimize: --lambda only applies to callebaut");
      }
    } else {
      throw ScenarioError("optimize: kind must be 'callebaut' or 'milne'");
    }

    const auto result = optimize(scenario.observable_a, scenario.observable_b,
                                 scenario.state, kind, scenario.optimizer);

    out << "kind " << kind.name() << "\n";
    if (kind.is_callebaut()) {
      out << "lambda " << lambda_suffix(kind.lambda().value()) << "\n";
    }
    print_field(out, "best_value", result.best_value);
    out << "evaluations " << result.evaluations << "\n";
    out << "restarts " << result.per_restart_values.size() << "\n";
    out << "per_restart_values";
    for (const double v : result.per_restart_values) {
      out << " " << format_value(v);
    }
    out << "\n";
    out << "best_basis\n";
    const MatrixXc& u = result.best_basis.matrix();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) {
        out << (j == 0 ? "" : " ") << "(" << format_value(u(i, j).real())
            << "," << format_value(u(i, j).imag()) << ")";
      }
      out << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return classify(e, err);
  }
}

int run_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const VerifyReport report =
        verify_suite(cmd.seed, cmd.trials, cmd.inject_fault);
    out << "checks_run " << report.checks_run << "\n";
    for (const auto& [name, count] : report.checks_by_name) {
      out << "check " << name << " " << count << "\n";
    }
    out << "worst_margin " << format_value(report.worst_margin) << "\n";
    out << "failures " << report.failures.size() << "\n";
    const std::size_t shown = std::min<std::size_t>(report.failures.size(), 25);
    for (std::size_t k = 0; k < shown; ++k) {
      const VerifyFailure& f = report.failures[k];
      out << "FAIL " << f.check << " [" << f.instance << "]: " << f.observed
          << "\n";
    }
    if (report.failures.size() > shown) {
      out << "... " << (report.failures.size() - shown) << " more\n";
    }
    return report.failures.empty() ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    return classify(e, err);
  }
}

}  // namespace varbound
