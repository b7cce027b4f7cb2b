#include <doctest.h>

#include <limits>

#include "mwd/connes.hpp"
#include "mwd/errors.hpp"
#include "mwd/scalar_metrics.hpp"
#include "test_support.hpp"

using namespace mwd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HermitianMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianMatrix(m);
}

State diag_state(double p) { return State(HermitianMatrix::diagonal(Eigen::Vector2d(p, 1 - p))); }

State offdiag_state(double q) {
  ComplexMatrix m(2, 2);
  m << 0.5, q, q, 0.5;
  return State(HermitianMatrix(m));
}

State random_state(std::mt19937& rng, Index n) {
  return State(mwd::testing::random_density(rng, n));
}

}  // namespace

TEST_CASE("state and Dirac set validation") {
  CHECK_THROWS_AS(State(HermitianMatrix::diagonal(Eigen::Vector2d(1.2, -0.2))), ValidationError);
  CHECK_THROWS_AS(State(HermitianMatrix::diagonal(Eigen::Vector2d(0.5, 0.6))), ValidationError);
  CHECK_NOTHROW(State(HermitianMatrix::diagonal(Eigen::Vector2d(0.5, 0.5 + 1e-12))));
  CHECK_THROWS_AS(DiracSet({}), ValidationError);
  CHECK_THROWS_AS(DiracSet({sigma_x(), HermitianMatrix::identity(3)}), ShapeError);
  const DiracSet d({sigma_x()});
  CHECK_THROWS_AS(connes_distance(diag_state(1), State(HermitianMatrix::identity(3) * (1.0 / 3)),
                                  d, 1.0),
                  ShapeError);
  CHECK_THROWS_AS(connes_distance(diag_state(1), diag_state(0), d, 0.0), DomainError);
}

TEST_CASE("equal states are at distance zero") {
  const DiracSet d({sigma_x()});
  const ConnesResult r = connes_distance(diag_state(0.3), diag_state(0.3), d, 2.0);
  CHECK(r.value == 0.0);
  CHECK_FALSE(r.unbounded);
  CHECK(connes_distance(diag_state(0.3), diag_state(0.3), d, kInf).value == 0.0);
  const ProbeReport p = unboundedness_probe(diag_state(0.3), diag_state(0.3), d, {1, 2, 4});
  CHECK(p.values == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("diagonal states: analytic value min(1, 2 kappa)") {
  // f = [[a, b], [conj b, d]]: ||[D, f]|| >= |a - d|, objective a - d,
  // |a|, |d| <= kappa.
  const DiracSet d({sigma_x()});
  for (double kappa : {0.05, 0.1, 0.25, 0.4, 0.5, 1.0, 10.0}) {
    const ConnesResult r = connes_distance(diag_state(1), diag_state(0), d, kappa);
    CHECK(r.value == doctest::Approx(std::min(1.0, 2.0 * kappa)).epsilon(1e-6));
    CHECK(r.upper_bound >= r.value);
    CHECK(connes_residual(r.witness, d, kappa) <= 1e-9);
    CHECK(std::abs(trace_pairing(r.witness, diag_state(1).matrix() - diag_state(0).matrix())) ==
          doctest::Approx(r.value).epsilon(1e-9));
  }
  const ConnesResult limit = connes_distance(diag_state(1), diag_state(0), d, kInf);
  CHECK_FALSE(limit.unbounded);
  CHECK(limit.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("off-diagonal differences grow without bound") {
  // f = b sigma_x commutes with D and pairs to 2 b (q0 - q1).
  const DiracSet d({sigma_x()});
  const State a = offdiag_state(0.3), b = offdiag_state(-0.1);
  const ProbeReport p = unboundedness_probe(a, b, d, {1, 2, 4, 8});
  for (std::size_t i = 0; i < p.kappas.size(); ++i)
    CHECK(p.values[i] >= 2.0 * p.kappas[i] * 0.4 - 1e-6);
  for (double s : p.slopes) CHECK(s >= 0.8 - 1e-6);
  const ConnesResult r = connes_distance(a, b, d, kInf);
  CHECK(r.unbounded);
  CHECK(r.kappa <= 1e6);
  CHECK_THROWS_AS(unboundedness_probe(a, b, d, {2, 1}), DomainError);
  CHECK_THROWS_AS(unboundedness_probe(a, b, d, {0, 1}), DomainError);
}

TEST_CASE("scalar Dirac operators leave the value unconstrained") {
  const DiracSet d({HermitianMatrix::identity(2)});
  const ConnesResult r = connes_distance(diag_state(1), diag_state(0), d, 0.7);
  CHECK(r.value == doctest::Approx(0.7 * 2.0).epsilon(1e-6));
  CHECK(connes_distance(diag_state(1), diag_state(0), d, kInf).unbounded);
}

TEST_CASE("diagonal states reduce to a two-point scalar problem") {
  // For diagonal f, ||[h sigma_x, f]|| = h |f_11 - f_22|: a 1-Lipschitz
  // function on the two points {0, 1/h}. Off-diagonal entries of f only
  // tighten the constraint and do not enter the objective.
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double h = 0.5 + 2.0 * u(rng), p = u(rng), q = u(rng);
    const double kappa = std::array<double, 3>{0.2, 1.0, 4.0}[trial % 3];
    const DiracSet d({sigma_x() * h});
    const double value = connes_distance(diag_state(p), diag_state(q), d, kappa).value;
    const Grid g({0.0, 1.0 / h}, {1.0, 1.0});
    const double scalar =
        w1_kappa_scalar(make_scalar_measure(g, std::vector<double>{p, 1 - p}),
                        make_scalar_measure(g, std::vector<double>{q, 1 - q}), kappa);
    CHECK(value == doctest::Approx(scalar).epsilon(1e-6));
  }
}

TEST_CASE("metric properties with a fixed Dirac set") {
  std::mt19937 rng(52);
  SolverOptions opts;
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = 2 + trial % 2;
    const DiracSet d({mwd::testing::random_hermitian(rng, n)});
    const State a = random_state(rng, n), b = random_state(rng, n), c = random_state(rng, n);
    const double ab = connes_distance(a, b, d, 1.0).value;
    const double ba = connes_distance(b, a, d, 1.0).value;
    const double bc = connes_distance(b, c, d, 1.0).value;
    const double ac = connes_distance(a, c, d, 1.0).value;
    const double scale = std::max({ab, bc, ac});
    CHECK(ab == doctest::Approx(ba).epsilon(2 * opts.tolerance));
    CHECK(ac <= ab + bc + 2 * opts.tolerance * scale);
  }
}

TEST_CASE("monotone in kappa, decreasing in the Dirac set") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 2 + trial % 2;
    const HermitianMatrix d1 = mwd::testing::random_hermitian(rng, n);
    const HermitianMatrix d2 = mwd::testing::random_hermitian(rng, n);
    const State a = random_state(rng, n), b = random_state(rng, n);
    const ProbeReport p = unboundedness_probe(a, b, DiracSet({d1}), {0.1, 0.3, 1.0, 3.0});
    for (std::size_t i = 1; i < p.values.size(); ++i)
      CHECK(p.values[i] >= p.values[i - 1] * (1 - 1e-6));
    const ConnesResult both = connes_distance(a, b, DiracSet({d1, d2}), 1.0);
    CHECK(both.value <= connes_distance(a, b, DiracSet({d1}), 1.0).value * (1 + 1e-6));
    CHECK(connes_residual(both.witness, DiracSet({d1, d2}), 1.0) <= 1e-9);
  }
}

TEST_CASE("budget exhaustion raises") {
  std::mt19937 rng(54);
  const DiracSet d({mwd::testing::random_hermitian(rng, 3)});
  SolverOptions tight;
  tight.max_iterations = 2;
  tight.check_interval = 1;
  CHECK_THROWS_AS(connes_distance(random_state(rng, 3), random_state(rng, 3), d, 1.0, tight),
                  ConvergenceError);
}
