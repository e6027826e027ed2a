#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include "support/process.hpp"
#include "varbound/csv.hpp"
#include "varbound/scenario.hpp"
#include "varbound/scenarios.hpp"

using namespace varbound;
using varbound::testsupport::run_command;
using varbound::testsupport::scratch_dir;
using varbound::testsupport::write_file;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kSpin1Scenario = R"({
  "dimension": 3,
  "observable_a": {"preset": "spin1_lx"},
  "observable_b": {"preset": "spin1_ly"},
  "state": {"preset": "theta", "theta": 0.7853981633974483},
  "weights": [0.3333333333333333, 0.5],
  "basis": "standard"
})";

std::string cli() { return std::string(VARBOUND_BIN); }

}  // namespace

TEST_CASE("scenario parsing with presets") {
  const Scenario s = parse_scenario(kSpin1Scenario);
  CHECK(s.dimension == 3);
  CHECK(s.theta.has_value());
  CHECK(*s.theta == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(s.weights.size() == 2);
  CHECK(s.basis == BasisMode::kStandard);
  CHECK(s.optimizer.restarts == 16);  // defaults apply when absent

  const auto ops = spin1_operators();
  CHECK((s.observable_a.matrix() - ops.lx.matrix()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("scenario parsing with explicit matrices and vectors") {
  const char* text = R"({
    "dimension": 2,
    "observable_a": {"matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]},
    "observable_b": {"matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
    "state": {"vector": [[1,0],[0,0]]},
    "weights": [0.5],
    "basis": "optimized",
    "optimizer": {"restarts": 3, "max_iterations": 50, "tolerance": 1e-8,
                  "seed": 9}
  })";
  const Scenario s = parse_scenario(text);
  CHECK(s.dimension == 2);
  CHECK_FALSE(s.theta.has_value());
  CHECK(s.basis == BasisMode::kOptimized);
  CHECK(s.optimizer.restarts == 3);
  CHECK(s.optimizer.seed == 9);
  CHECK(s.observable_a.matrix()(0, 1) == std::complex<double>(1.0));
}

TEST_CASE("scenario validation failures") {
  const auto expect_error = [](const char* text, const char* needle) {
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains(needle),
                         ScenarioError);
  };
  expect_error("{", "parse error");
  expect_error(R"({"dimension": 0, "observable_a": {}, "observable_b": {},
                   "state": {}, "weights": [0.5]})",
               "positive integer");
  expect_error(R"({"dimension": 2,
                   "observable_a": {"matrix": [[[0,0],[1,0]],[[2,0],[0,0]]]},
                   "observable_b": {"preset": "pauli_x"},
                   "state": {"vector": [[1,0],[0,0]]},
                   "weights": [0.5]})",
               "hermiticity");
  expect_error(R"({"dimension": 3,
                   "observable_a": {"preset": "nope"},
                   "observable_b": {"preset": "spin1_ly"},
                   "state": {"preset": "theta", "theta": 0},
                   "weights": [0.5]})",
               "unknown preset");
  expect_error(R"({"dimension": 2,
                   "observable_a": {"preset": "spin1_lx"},
                   "observable_b": {"preset": "pauli_x"},
                   "state": {"vector": [[1,0],[0,0]]},
                   "weights": [0.5]})",
               "dimension");
  expect_error(R"({"dimension": 2,
                   "observable_a": {"preset": "pauli_x"},
                   "observable_b": {"preset": "pauli_y"},
                   "state": {"preset": "theta", "theta": 0},
                   "weights": [0.5]})",
               "dimension 3");
  expect_error(R"({"dimension": 2,
                   "observable_a": {"preset": "pauli_x"},
                   "observable_b": {"preset": "pauli_y"},
                   "state": {"vector": [[1,0],[0,0]]},
                   "weights": [1.5]})",
               "[0, 1]");
  expect_error(R"({"dimension": 2,
                   "observable_a": {"preset": "pauli_x"},
                   "observable_b": {"preset": "pauli_y"},
                   "state": {"vector": [[1,0],[0,0]]},
                   "weights": []})",
               "nonempty");
  expect_error(R"({"dimension": 2, "bogus": 1,
                   "observable_a": {"preset": "pauli_x"},
                   "observable_b": {"preset": "pauli_y"},
                   "state": {"vector": [[1,0],[0,0]]},
                   "weights": [0.5]})",
               "unknown field");
  expect_error(R"({"dimension": 2,
                   "observable_a": {"preset": "pauli_x"},
                   "observable_b": {"preset": "pauli_y"},
                   "state": {"vector": [[1,0],[0,0]]},
                   "weights": [0.5], "basis": "diagonal"})",
               "standard");
}

TEST_CASE("value formatting carries 12 significant digits") {
  CHECK(format_value(0.1875) == "0.187500000000");
  CHECK(format_value(0.125) == "0.125000000000");
  CHECK(format_value(0.0625) == "0.0625000000000");
  CHECK(format_value(1.0) == "1.00000000000");
  CHECK(format_value(0.0) == "0.00000000000");

  CHECK(format_exact(0.0) == "0");
  const double theta = 177.0 * kPi / 180.0;
  double parsed = 0.0;
  const std::string text = format_exact(theta);
  parsed = std::stod(text);
  CHECK(parsed == theta);
}

TEST_CASE("sweep csv round trip") {
  const auto ops = spin1_operators();
  SweepSpec spec;
  spec.theta_start = 0.0;
  spec.theta_end = kPi;
  spec.steps = 12;
  spec.weights = {Weight(1.0 / 3.0), Weight(0.5)};
  const auto rows =
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, spec);

  const auto dir = scratch_dir();
  const auto path = dir / "sweep.csv";
  write_sweep_csv(path, rows);

  const std::string content = varbound::testsupport::slurp(path);
  const std::string header = content.substr(0, content.find('\n'));
  CHECK(header ==
        "theta,var_a,var_b,product,robertson,schrodinger,mbp,milne,"
        "callebaut_0.333333,callebaut_0.500000");

  const SweepTable table = read_sweep_csv(path);
  REQUIRE(table.rows.size() == rows.size());
  REQUIRE(table.lambdas.size() == 2);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const SweepRow& expect = rows[j];
    const SweepRow& got = table.rows[j];
    CHECK(got.theta == expect.theta);  // exact round trip for the grid key
    const auto close = [](double x, double y) {
      return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
    };
    CHECK(close(got.report.variance_a, expect.report.variance_a));
    CHECK(close(got.report.variance_b, expect.report.variance_b));
    CHECK(close(got.report.product, expect.report.product));
    CHECK(close(got.report.robertson, expect.report.robertson));
    CHECK(close(got.report.schrodinger, expect.report.schrodinger));
    CHECK(close(got.report.mbp, expect.report.mbp));
    CHECK(close(got.report.milne, expect.report.milne));
    // header lambdas carry 6 decimals, so compare column values in order
    REQUIRE(got.report.callebaut.size() == expect.report.callebaut.size());
    auto got_it = got.report.callebaut.begin();
    for (const auto& [lambda, value] : expect.report.callebaut) {
      CHECK(close(got_it->second, value));
      ++got_it;
    }
  }
}

TEST_CASE("sweep csv write is atomic on failure") {
  const auto ops = spin1_operators();
  SweepSpec spec;
  spec.steps = 2;
  spec.theta_start = 0.0;
  spec.theta_end = 1.0;
  spec.weights = {Weight(0.5)};
  const auto rows =
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, spec);

  const std::filesystem::path bogus = "/nonexistent_dir/sweep.csv";
  CHECK_THROWS_AS(write_sweep_csv(bogus, rows), ScenarioError);
  CHECK_FALSE(std::filesystem::exists(bogus));
  CHECK_FALSE(std::filesystem::exists("/nonexistent_dir/sweep.csv.tmp"));
}

TEST_CASE("cli bounds on the worked example") {
  const auto dir = scratch_dir();
  const auto scenario = dir / "spin1.json";
  write_file(scenario, kSpin1Scenario);

  const auto result =
      run_command(cli() + " bounds --scenario " + scenario.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("product 0.187500000000") != std::string::npos);
  CHECK(result.out.find("milne 0.125000000000") != std::string::npos);
  CHECK(result.out.find("mbp 0.0625000000000") != std::string::npos);
  CHECK(result.out.find("callebaut_0.333333 0.0625000000000") !=
        std::string::npos);
  CHECK(result.out.find("combined 0.125000000000") != std::string::npos);
}

TEST_CASE("cli bounds with optimized basis prints L1 and L2") {
  const auto dir = scratch_dir();
  const auto scenario = dir / "spin1_opt.json";
  write_file(scenario, R"({
    "dimension": 3,
    "observable_a": {"preset": "spin1_lx"},
    "observable_b": {"preset": "spin1_ly"},
    "state": {"preset": "theta", "theta": 0.0},
    "weights": [0.5],
    "basis": "optimized",
    "optimizer": {"restarts": 4, "max_iterations": 300, "seed": 3}
  })");
  const auto result =
      run_command(cli() + " bounds --scenario " + scenario.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("l1_0.500000 ") != std::string::npos);
  CHECK(result.out.find("l2 ") != std::string::npos);
  CHECK(result.out.find("optimizer_evaluations ") != std::string::npos);
}

TEST_CASE("cli rejects a non-hermitian scenario with exit code 2") {
  const auto dir = scratch_dir();
  const auto scenario = dir / "bad.json";
  write_file(scenario, R"({
    "dimension": 2,
    "observable_a": {"matrix": [[[0,0],[1,0]],[[2,0],[0,0]]]},
    "observable_b": {"preset": "pauli_y"},
    "state": {"vector": [[1,0],[0,0]]},
    "weights": [0.5]
  })");
  const auto result =
      run_command(cli() + " bounds --scenario " + scenario.string());
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("hermiticity") != std::string::npos);
}

TEST_CASE("cli sweep writes header plus steps rows") {
  const auto dir = scratch_dir();
  const auto scenario = dir / "spin1.json";
  write_file(scenario, kSpin1Scenario);
  const auto csv = dir / "out.csv";

  const auto result = run_command(
      cli() + " sweep --scenario " + scenario.string() +
      " --theta-start 0 --theta-end 3.141592653589793 --steps 2 --output " +
      csv.string());
  CHECK(result.exit_code == 0);
  const std::string content = varbound::testsupport::slurp(csv);
  CHECK(std::count(content.begin(), content.end(), '\n') == 3);
}

TEST_CASE("cli sweep requires the theta preset") {
  const auto dir = scratch_dir();
  const auto scenario = dir / "vector_state.json";
  write_file(scenario, R"({
    "dimension": 2,
    "observable_a": {"preset": "pauli_x"},
    "observable_b": {"preset": "pauli_y"},
    "state": {"vector": [[1,0],[0,0]]},
    "weights": [0.5]
  })");
  const auto result = run_command(
      cli() + " sweep --scenario " + scenario.string() +
      " --theta-start 0 --theta-end 1 --steps 5 --output " +
      (dir / "o.csv").string());
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("theta preset") != std::string::npos);
}

TEST_CASE("cli optimize requires lambda for callebaut") {
  const auto dir = scratch_dir();
  const auto scenario = dir / "spin1.json";
  write_file(scenario, kSpin1Scenario);

  const auto missing = run_command(cli() + " optimize --scenario " +
                                   scenario.string() + " --kind callebaut");
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("lambda") != std::string::npos);

  const auto ok = run_command(
      cli() + " optimize --scenario " + scenario.string() +
      " --kind milne --restarts 2 --seed 4");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("best_value ") != std::string::npos);
  CHECK(ok.out.find("best_basis") != std::string::npos);
}

TEST_CASE("cli verify small run exits cleanly") {
  const auto ok = run_command(cli() + " verify --seed 5 --trials 10");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("worst_margin ") != std::string::npos);
  CHECK(ok.out.find("failures 0") != std::string::npos);

  const auto injected =
      run_command(cli() + " verify --seed 5 --trials 2 --inject-fault");
  CHECK(injected.exit_code == 1);
  CHECK(injected.out.find("injected_fault") != std::string::npos);
}
