#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "varbound/bounds.hpp"
#include "varbound/scenarios.hpp"

using namespace varbound;

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

}  // namespace

TEST_CASE("spin-1 operator entries") {
  const auto ops = spin1_operators();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(ops.lx.matrix()(0, 1).real() == doctest::Approx(r).epsilon(1e-14));
  CHECK(ops.lx.matrix()(0, 0) == std::complex<double>(0.0));
  CHECK(ops.ly.matrix()(1, 0) == std::complex<double>(0.0, r));
  CHECK(ops.lz.matrix()(0, 0) == std::complex<double>(1.0));
  CHECK(ops.lz.matrix()(1, 1) == std::complex<double>(0.0));
  CHECK(ops.lz.matrix()(2, 2) == std::complex<double>(-1.0));
}

TEST_CASE("spin-1 commutation relations") {
  const auto ops = spin1_operators();
  const MatrixXc& lx = ops.lx.matrix();
  const MatrixXc& ly = ops.ly.matrix();
  const MatrixXc& lz = ops.lz.matrix();
  CHECK(((lx * ly - ly * lx) - kI * lz).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(((ly * lz - lz * ly) - kI * lx).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(((lz * lx - lx * lz) - kI * ly).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("theta state") {
  const PureState zero = theta_state(0.0);
  CHECK(zero.vector()[0] == std::complex<double>(1.0));
  CHECK(zero.vector()[1] == std::complex<double>(0.0));
  CHECK(zero.vector()[2] == std::complex<double>(0.0));

  const double r = 1.0 / std::sqrt(2.0);
  const PureState quarter = theta_state(kPi / 4);
  CHECK(std::abs(quarter.vector()[0] - r) < 1e-12);
  CHECK(std::abs(quarter.vector()[1] + r) < 1e-12);

  for (const double theta : {0.1, 1.0, 2.5}) {
    CHECK(std::abs(theta_state(theta).vector().norm() - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(theta_state(std::nan("")), std::invalid_argument);
}

TEST_CASE("pauli operators") {
  const auto pauli = pauli_operators();
  CHECK((pauli.x.matrix() * pauli.x.matrix() - MatrixXc::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  const MatrixXc comm =
      pauli.x.matrix() * pauli.y.matrix() - pauli.y.matrix() * pauli.x.matrix();
  CHECK((comm - 2.0 * kI * pauli.z.matrix()).cwiseAbs().maxCoeff() == 0.0);

  VectorXc up(2);
  up << std::complex<double>(1.0), std::complex<double>(0.0);
  CHECK(std::abs(robertson_bound(pauli.x, pauli.y, PureState(up)) - 1.0) <
        1e-14);
}

TEST_CASE("random hermitians are valid and deterministic") {
  for (int seed = 0; seed < 100; ++seed) {
    const Eigen::Index n = 2 + (seed % 5);
    CHECK_NOTHROW(random_hermitian(n, seed));  // construction validates
  }
  const auto first = random_hermitian(4, 123);
  const auto second = random_hermitian(4, 123);
  CHECK((first.matrix() - second.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const auto other = random_hermitian(4, 124);
  CHECK((first.matrix() - other.matrix()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("random states are valid and deterministic") {
  for (int seed = 0; seed < 100; ++seed) {
    const Eigen::Index n = 1 + (seed % 6);
    const PureState psi = random_state(n, seed);
    CHECK(std::abs(psi.vector().norm() - 1.0) < 1e-12);
  }
  const PureState first = random_state(5, 321);
  const PureState second = random_state(5, 321);
  CHECK((first.vector() - second.vector()).cwiseAbs().maxCoeff() == 0.0);

  const PureState scalar = random_state(1, 9);
  CHECK(scalar.dim() == 1);
  CHECK(std::abs(std::abs(scalar.vector()[0]) - 1.0) < 1e-12);
}

TEST_CASE("sweep over the worked example") {
  const auto ops = spin1_operators();
  SweepSpec spec;
  spec.theta_start = 0.0;
  spec.theta_end = kPi;
  spec.steps = 181;
  spec.weights = {Weight(1.0 / 3.0), Weight(0.5)};

  const auto rows =
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, spec);
  REQUIRE(rows.size() == 181);

  for (std::size_t j = 1; j < rows.size(); ++j) {
    CHECK(rows[j].theta > rows[j - 1].theta);
  }

  const SweepRow& first = rows.front();
  CHECK(first.theta == 0.0);
  CHECK(std::abs(first.report.product - 0.25) < 1e-10);
  CHECK(std::abs(first.report.mbp - 0.25) < 1e-10);
  CHECK(std::abs(first.report.milne - 0.25) < 1e-10);
  CHECK(std::abs(first.report.callebaut.at(0.5) - 0.25) < 1e-10);

  const SweepRow& quarter = rows[45];  // theta = pi/4 on the 181-point grid
  CHECK(std::abs(quarter.theta - kPi / 4) < 1e-12);
  CHECK(std::abs(quarter.report.milne - 0.125) < 1e-10);
  CHECK(std::abs(quarter.report.mbp - 0.0625) < 1e-10);

  const SweepRow& half = rows[90];  // theta = pi/2
  for (const double bound :
       {half.report.mbp, half.report.milne, half.report.callebaut.at(0.5),
        half.report.callebaut.at(1.0 / 3.0)}) {
    CHECK(std::abs(bound - half.report.product) < 1e-10);
  }

  for (const SweepRow& row : rows) {
    const double c13 = row.report.callebaut.at(1.0 / 3.0);
    const double c12 = row.report.callebaut.at(0.5);
    CHECK(c12 >= c13 - 1e-10);
    CHECK(c13 >= row.report.mbp - 1e-10);
    CHECK(row.report.milne >= row.report.mbp - 1e-10);
  }
}

TEST_CASE("sweep quantities are pi-periodic in theta") {
  const auto ops = spin1_operators();
  const OrthonormalBasis standard = OrthonormalBasis::identity(3);
  const std::vector<Weight> weights{Weight(1.0 / 3.0), Weight(0.5)};
  for (const double theta : {0.17, 0.9, 1.4, 2.2}) {
    const BoundReport base =
        full_report(ops.lx, ops.ly, theta_state(theta), standard, weights);
    const BoundReport shifted = full_report(
        ops.lx, ops.ly, theta_state(theta + kPi), standard, weights);
    CHECK(std::abs(base.product - shifted.product) < 1e-10);
    CHECK(std::abs(base.robertson - shifted.robertson) < 1e-10);
    CHECK(std::abs(base.schrodinger - shifted.schrodinger) < 1e-10);
    CHECK(std::abs(base.mbp - shifted.mbp) < 1e-10);
    CHECK(std::abs(base.milne - shifted.milne) < 1e-10);
    CHECK(std::abs(base.callebaut.at(0.5) - shifted.callebaut.at(0.5)) <
          1e-10);
  }
}

TEST_CASE("sweep validation and the two-point edge case") {
  const auto ops = spin1_operators();
  SweepSpec spec;
  spec.weights = {Weight(0.5)};
  spec.steps = 2;
  spec.theta_start = 0.25;
  spec.theta_end = 1.25;
  const auto rows =
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, spec);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].theta == 0.25);
  CHECK(rows[1].theta == 1.25);

  SweepSpec bad = spec;
  bad.steps = 1;
  CHECK_THROWS_AS(
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, bad),
      std::invalid_argument);
  bad = spec;
  bad.theta_end = bad.theta_start;
  CHECK_THROWS_AS(
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, bad),
      std::invalid_argument);
  bad = spec;
  bad.weights.clear();
  CHECK_THROWS_AS(
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, bad),
      std::invalid_argument);
}

TEST_CASE("optimized sweep carries L1 and L2 columns") {
  const auto ops = spin1_operators();
  SweepSpec spec;
  spec.theta_start = 0.3;
  spec.theta_end = 1.1;
  spec.steps = 3;
  spec.weights = {Weight(0.5)};
  spec.basis_mode = BasisMode::kOptimized;
  spec.optimizer.restarts = 2;
  spec.optimizer.max_iterations = 120;

  const auto rows =
      sweep(ops.lx, ops.ly, [](double t) { return theta_state(t); }, spec);
  for (const SweepRow& row : rows) {
    REQUIRE(row.l2.has_value());
    REQUIRE(row.l1.count(0.5) == 1);
    CHECK(*row.l2 >= row.report.milne - 1e-12);
    CHECK(row.l1.at(0.5) >= row.report.callebaut.at(0.5) - 1e-12);
    CHECK(*row.l2 <= row.report.product + 1e-8);
    CHECK(row.l1.at(0.5) <= row.report.product + 1e-8);
  }
}
