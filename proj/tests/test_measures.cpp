#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mwd/errors.hpp"
#include "mwd/measure_io.hpp"
#include "mwd/measures.hpp"
#include "test_support.hpp"

using namespace mwd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "mwd_test_measures";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid({}, {}), ShapeError);
  CHECK_THROWS_AS(Grid({0.0, 1.0}, {1.0}), ShapeError);
  CHECK_THROWS_AS(Grid({0.0, 1.0}, {1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(Grid({0.0, 0.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(Grid({1.0, 0.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(Grid({0.0, NAN}, {1.0, 1.0}), ValidationError);
  const Grid g({0.0, 0.5, 2.0}, {1.0, 1.0, 1.0});
  CHECK(g.distance(2, 0) == 2.0);
  CHECK(g.gaps() == std::vector<double>{0.5, 1.5});
  CHECK(g.diameter() == 2.0);
}

TEST_CASE("uniform grid carries trapezoid weights") {
  const Grid g = make_uniform_grid(36, 0.0, std::numbers::pi);
  CHECK(g.size() == 36);
  const double h = std::numbers::pi / 35.0;
  CHECK(g.point(35) == doctest::Approx(std::numbers::pi));
  CHECK(g.weight(0) == doctest::Approx(h / 2));
  CHECK(g.weight(17) == doctest::Approx(h));
  double total = 0.0;
  for (double w : g.weights()) total += w;
  CHECK(total == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(make_uniform_grid(1, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_uniform_grid(3, 1.0, 1.0), DomainError);

  // Trapezoid rule integrates linear densities exactly.
  const MatrixMeasure mu =
      density_to_measure(g, [](double t) { return HermitianMatrix::scalar(2.0 * t + 1.0); });
  CHECK(total_mass(mu).trace() ==
        doctest::Approx(std::numbers::pi * std::numbers::pi + std::numbers::pi));
}

TEST_CASE("measure validation names the offending frequency") {
  const Grid g({0.0, 0.25}, {1.0, 1.0});
  const HermitianMatrix bad = HermitianMatrix::diagonal(Eigen::Vector2d(1.0, -0.5));
  try {
    MatrixMeasure mu(g, {HermitianMatrix::identity(2), bad});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("0.25") != std::string::npos);
  }
  CHECK_THROWS_AS(MatrixMeasure(g, {HermitianMatrix::identity(2)}), ShapeError);
  CHECK_THROWS_AS(MatrixMeasure(g, {HermitianMatrix::identity(2), HermitianMatrix::identity(3)}),
                  ShapeError);
  CHECK_THROWS_AS(
      density_to_measure(g, [&](double) { return bad; }), ValidationError);
}

TEST_CASE("scalar helpers and point masses") {
  const Grid g({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  const std::vector<double> m = {0.5, 0.0, 2.0};
  const ScalarMeasure mu = make_scalar_measure(g, m);
  CHECK(scalar_masses(mu) == m);
  CHECK_THROWS_AS(make_scalar_measure(g, std::vector<double>{1.0, -1.0, 0.0}), ValidationError);
  const MatrixMeasure p = point_mass(g, 1, HermitianMatrix::identity(2));
  CHECK(p.mass(1) == HermitianMatrix::identity(2));
  CHECK(p.mass(0).matrix().isZero());
  CHECK_THROWS_AS(point_mass(g, 3, HermitianMatrix::identity(2)), ShapeError);
  CHECK_THROWS_AS(scalar_masses(p), ShapeError);
}

TEST_CASE("total variation is a metric on random measures") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 3;
    const Grid g = mwd::testing::random_grid(rng, 2 + trial % 5);
    const MatrixMeasure a = mwd::testing::random_measure(rng, g, n);
    const MatrixMeasure b = mwd::testing::random_measure(rng, g, n);
    const MatrixMeasure c = mwd::testing::random_measure(rng, g, n);
    CHECK(tv_matrix(a, a) == 0.0);
    CHECK(tv_matrix(a, b) == doctest::Approx(tv_matrix(b, a)));
    CHECK(tv_matrix(a, c) <= tv_matrix(a, b) + tv_matrix(b, c) + 1e-12);
    // Trace bound: |tr(total(a) - total(b))| <= TV.
    CHECK(std::abs(total_mass(a).trace() - total_mass(b).trace()) <= tv_matrix(a, b) + 1e-12);
  }
}

TEST_CASE("scaling, normalization and compatibility") {
  std::mt19937 rng(12);
  const Grid g = mwd::testing::random_grid(rng, 4);
  const MatrixMeasure a = mwd::testing::random_measure(rng, g, 2, 0.0);
  const MatrixMeasure n = normalize_trace(a);
  CHECK(total_mass(n).trace() == doctest::Approx(1.0));
  CHECK(tv_matrix(scaled(a, 3.0), scaled(n, 3.0)) ==
        doctest::Approx(3.0 * tv_matrix(a, n)));
  CHECK_THROWS_AS(scaled(a, -1.0), DomainError);
  CHECK_THROWS_AS(normalize_trace(scaled(a, 0.0)), DomainError);

  const Grid other = mwd::testing::random_grid(rng, 4);
  const MatrixMeasure b = mwd::testing::random_measure(rng, other, 2);
  CHECK_THROWS_AS(require_compatible(a, b), ShapeError);
  CHECK_THROWS_AS(tv_matrix(a, mwd::testing::random_measure(rng, g, 3)), ShapeError);
  const auto d = mass_differences(a, n);
  CHECK(d.size() == 4);
  CHECK(d[2] == a.mass(2) - n.mass(2));
}

TEST_CASE("measure files round-trip exactly") {
  std::mt19937 rng(13);
  const Grid g = make_uniform_grid(7, 0.0, std::numbers::pi);
  const MatrixMeasure a = mwd::testing::random_measure(rng, g, 3);
  const std::string text = measure_to_string(a);
  const MatrixMeasure b = measure_from_string(text);
  CHECK(b.grid().points() == a.grid().points());
  CHECK(b.grid().weights() == a.grid().weights());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(b.mass(k) == a.mass(k));
  CHECK(measure_to_string(b) == text);

  const fs::path dir = scratch_dir();
  save_measure(a, dir / "a.json");
  const MatrixMeasure c = load_measure(dir / "a.json");
  save_measure(c, dir / "c.json");
  CHECK(slurp(dir / "a.json") == slurp(dir / "c.json"));
}

TEST_CASE("malformed measure files") {
  CHECK_THROWS_AS(measure_from_string("not json"), ValidationError);
  CHECK_THROWS_AS(measure_from_string("{}"), ValidationError);
  CHECK_THROWS_AS(measure_from_string(R"({"dim": 1, "grid": [{"theta": 0, "weight": 1}],
                                          "masses": [[[[-1, 0]]]]})"),
                  ValidationError);
  CHECK_THROWS_AS(measure_from_string(R"({"dim": 2, "grid": [{"theta": 0, "weight": 1}],
                                          "masses": [[[[1, 0]]]]})"),
                  ValidationError);
  CHECK_THROWS_AS(measure_from_string(R"({"dim": 1, "grid": [{"theta": 0, "weight": 1},
                                          {"theta": 1, "weight": 1}], "masses": [[[[1, 0]]]]})"),
                  ValidationError);
  const MatrixMeasure ok = measure_from_string(
      R"({"dim": 2, "grid": [{"theta": 0.5, "weight": 1}],
          "masses": [[[[2, 0], [0, 1]], [[0, -1], [1, 0]]]]})");
  CHECK(ok.mass(0)(0, 1) == Complex(0.0, 1.0));
  CHECK_THROWS_AS(load_measure("/nonexistent/dir/x.json"), IoError);
  CHECK_THROWS_AS(save_measure(ok, "/nonexistent/dir/x.json"), IoError);
}
