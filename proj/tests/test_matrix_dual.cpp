#include <doctest.h>

#include <numbers>

#include "mwd/errors.hpp"
#include "mwd/matrix_dual.hpp"
#include "mwd/scalar_metrics.hpp"
#include "test_support.hpp"

using namespace mwd;
using mwd::testing::random_grid;
using mwd::testing::random_measure;

namespace {

MatrixMeasure conjugated(const MatrixMeasure& mu, const ComplexMatrix& u) {
  std::vector<HermitianMatrix> m;
  for (const auto& x : mu.masses())
    m.push_back(HermitianMatrix::hermitian_part(u * x.matrix() * u.adjoint()));
  return MatrixMeasure(mu.grid(), m);
}

ComplexMatrix random_unitary(std::mt19937& rng, Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(mwd::testing::random_complex(rng, n));
  return qr.householderQ();
}

}  // namespace

TEST_CASE("zero difference gives exactly zero") {
  std::mt19937 rng(31);
  const Grid g = random_grid(rng, 5);
  const MatrixMeasure a = random_measure(rng, g, 2);
  const DualCertificate c = solve_dual(assemble_dual(a, a, 1.0));
  CHECK(c.value == 0.0);
  CHECK(c.upper_bound == 0.0);
  CHECK(c.converged);
  CHECK(dw1_kappa(a, a, 0.5) == 0.0);
}

TEST_CASE("single grid point reduces to kappa times the nuclear norm") {
  std::mt19937 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 1 + trial % 3;
    const Grid g({0.7}, {1.0});
    const MatrixMeasure a = random_measure(rng, g, n, 0.0), b = random_measure(rng, g, n, 0.0);
    const double kappa = 0.25 * (1 + trial);
    CHECK(dw1_kappa(a, b, kappa) ==
          doctest::Approx(kappa * nuclear_norm(a.mass(0) - b.mass(0))).epsilon(1e-6));
  }
}

TEST_CASE("two unit point masses give min(distance, 2 kappa)") {
  const Grid g({0.0, 0.3, 1.0, 2.0}, {1.0, 1.0, 1.0, 1.0});
  std::mt19937 rng(33);
  for (double kappa : {0.1, 0.4, 1.0, 3.0}) {
    for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}}) {
      const HermitianMatrix p = mwd::testing::random_density(rng, 2);
      const double d = dw1_kappa(point_mass(g, i, p), point_mass(g, j, p), kappa);
      CHECK(d == doctest::Approx(std::min(g.distance(i, j), 2.0 * kappa)).epsilon(1e-6));
    }
  }
}

TEST_CASE("1x1 measures agree with the scalar LP") {
  std::mt19937 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Grid g = random_grid(rng, 2 + trial % 7);
    const MatrixMeasure a = random_measure(rng, g, 1), b = random_measure(rng, g, 1);
    const double kappa = std::array<double, 3>{0.3, 1.0, 3.0}[trial % 3];
    CHECK(dw1_kappa(a, b, kappa) ==
          doctest::Approx(w1_kappa_scalar(a, b, kappa)).epsilon(1e-5));
  }
}

TEST_CASE("certificates are feasible and bracket the value") {
  std::mt19937 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 3;
    const Grid g = random_grid(rng, 2 + trial % 6);
    const MatrixMeasure a = random_measure(rng, g, n), b = random_measure(rng, g, n);
    const DualProblem p = assemble_dual(a, b, 1.0);
    const DualCertificate c = solve_dual(p);
    CHECK(c.converged);
    CHECK(c.feasibility_residual <= 1e-12);
    CHECK(certificate_residual(p, c.test_function) <= 1e-12);
    CHECK(certificate_value(p, c.test_function) == doctest::Approx(c.value).epsilon(1e-12));
    CHECK(c.upper_bound >= c.value);
    CHECK(c.relative_gap() <= 1e-6);
    CHECK(c.value <= tv_matrix(a, b) + 1e-9);
  }
}

TEST_CASE("metric properties on random triples") {
  std::mt19937 rng(36);
  SolverOptions opts;
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 1 + trial % 3;
    const Grid g = random_grid(rng, 3 + trial % 4);
    const MatrixMeasure a = random_measure(rng, g, n), b = random_measure(rng, g, n),
                        c = random_measure(rng, g, n);
    const double ab = dw1_kappa(a, b, 1.0), ba = dw1_kappa(b, a, 1.0);
    const double bc = dw1_kappa(b, c, 1.0), ac = dw1_kappa(a, c, 1.0);
    const double scale = std::max({ab, bc, ac});
    CHECK(ab == doctest::Approx(ba).epsilon(3 * opts.tolerance));
    CHECK(ac <= ab + bc + 3 * opts.tolerance * scale);
  }
}

TEST_CASE("invariances: unitary congruence and positive scaling") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = 2 + trial % 2;
    const Grid g = random_grid(rng, 4);
    const MatrixMeasure a = random_measure(rng, g, n), b = random_measure(rng, g, n);
    const double d = dw1_kappa(a, b, 0.8);
    const ComplexMatrix u = random_unitary(rng, n);
    CHECK(dw1_kappa(conjugated(a, u), conjugated(b, u), 0.8) ==
          doctest::Approx(d).epsilon(1e-5));
    CHECK(dw1_kappa(scaled(a, 2.5), scaled(b, 2.5), 0.8) ==
          doctest::Approx(2.5 * d).epsilon(1e-5));
  }
}

TEST_CASE("point masses converge as the separation shrinks") {
  const HermitianMatrix p = HermitianMatrix::diagonal(Eigen::Vector2d(0.5, 0.5));
  double previous = std::numeric_limits<double>::infinity();
  for (double h : {std::numbers::pi / 4, std::numbers::pi / 8, std::numbers::pi / 16}) {
    const Grid g({0.0, h}, {1.0, 1.0});
    const double d = dw1_kappa(point_mass(g, 0, p), point_mass(g, 1, p), 1.0);
    CHECK(d <= h + 1e-6);
    CHECK(d < previous);
    previous = d;
  }
}

TEST_CASE("nondecreasing in kappa and bounded by kappa * TV") {
  std::mt19937 rng(38);
  const Grid g = random_grid(rng, 6);
  const MatrixMeasure a = random_measure(rng, g, 2), b = random_measure(rng, g, 2);
  double previous = 0.0;
  for (double kappa : {0.05, 0.2, 0.5, 1.0, 2.0, 10.0}) {
    const double d = dw1_kappa(a, b, kappa);
    CHECK(d >= previous - 1e-6 * d);
    CHECK(d <= kappa * tv_matrix(a, b) + 1e-9);
    previous = d;
  }
}

TEST_CASE("errors") {
  std::mt19937 rng(39);
  const Grid g = random_grid(rng, 5);
  const MatrixMeasure a = random_measure(rng, g, 2, 0.0), b = random_measure(rng, g, 2, 0.0);
  CHECK_THROWS_AS(assemble_dual(a, b, 0.0), DomainError);
  CHECK_THROWS_AS(assemble_dual(a, random_measure(rng, g, 3), 1.0), ShapeError);
  SolverOptions tight;
  tight.max_iterations = 3;
  tight.check_interval = 1;
  try {
    solve_dual(assemble_dual(a, b, 1.0), tight);
    FAIL("expected DualConvergenceError");
  } catch (const DualConvergenceError& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.best().upper_bound >= e.best().value);
    CHECK(e.best().feasibility_residual <= 1e-12);
    CHECK_FALSE(e.best().converged);
  }
  SolverOptions bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(solve_dual(assemble_dual(a, b, 1.0), bad), DomainError);
}
