#include "mwd/benchmark_spectra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mwd/errors.hpp"

namespace mwd {

using std::numbers::pi;

double ar_poly_abs2(const ArPolySpec& spec, double theta) {
  const Complex z = std::polar(1.0, theta);
  Complex value(1.0, 0.0);
  for (const auto& f : spec.factors)
    value *= 1.0 - 2.0 * f.radius * std::cos(f.angle) * z + f.radius * f.radius * z * z;
  return std::norm(value);
}

ArPolySpec benchmark_polynomial(int index) {
  switch (index) {
    case 0:
      return {{{0.95, pi / 6}, {0.75, pi / 3}}};
    case 1:
      return {{{0.95, 5 * pi / 12}, {0.75, pi / 2}}};
    case 2:
      return {{{0.95, 2 * pi / 3}, {0.75, 5 * pi / 8}}};
    default:
      throw DomainError("benchmark index must be 0, 1 or 2");
  }
}

HermitianMatrix benchmark_density(int index, double theta) {
  const double s = 1.0 / ar_poly_abs2(benchmark_polynomial(index), theta);
  const Complex e = std::polar(1.0, theta);
  ComplexMatrix lower(2, 2);
  Eigen::Vector2d middle;
  switch (index) {
    case 0:
      lower << 1.0, 0.4, 0.0, 1.0;
      middle << 0.01, s;
      break;
    case 1:
      lower << 1.0, 0.5, 0.5 * e, 1.0;
      middle << s, s;
      break;
    default:
      lower << 1.0, 0.0, 0.4 * e, 1.0;
      middle << s, 0.01;
      break;
  }
  return HermitianMatrix::hermitian_part(lower * middle.cast<Complex>().asDiagonal() *
                                         lower.adjoint());
}

Grid benchmark_grid() { return make_uniform_grid(36, 0.0, pi); }

MatrixMeasure benchmark_measure(int index, const Grid& grid) {
  benchmark_polynomial(index);  // validates the index
  return density_to_measure(grid, [index](double t) { return benchmark_density(index, t); });
}

double itakura_saito_term(const HermitianMatrix& f, const HermitianMatrix& g) {
  if (f.dim() != g.dim()) throw ShapeError("Itakura-Saito needs equal dimensions");
  const auto [gval, gvec] = eigh(g);
  if (!(gval(0) > 1e-14 * std::max(1.0, gval.cwiseAbs().maxCoeff())))
    throw DomainError("second argument is not positive definite");
  const ComplexMatrix g_inv_sqrt =
      gvec * gval.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * gvec.adjoint();
  const RealVector ratio =
      eigvalsh(HermitianMatrix::hermitian_part(g_inv_sqrt * f.matrix() * g_inv_sqrt));
  if (!(ratio(0) > 0.0)) throw DomainError("first argument is not positive definite");
  double term = 0.0;
  for (Index i = 0; i < ratio.size(); ++i) term += ratio(i) - std::log(ratio(i)) - 1.0;
  return term;
}

namespace {

double is_term_at(const HermitianMatrix& f, const HermitianMatrix& g, double theta,
                  std::size_t k) {
  try {
    return itakura_saito_term(f, g);
  } catch (const DomainError& e) {
    std::ostringstream os;
    os << "Itakura-Saito undefined at theta = " << theta << " (index " << k
       << "): " << e.what();
    throw DomainError(os.str());
  }
}

}  // namespace

double itakura_saito(const Grid& grid, const std::vector<HermitianMatrix>& f,
                     const std::vector<HermitianMatrix>& g) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw ShapeError("density samples must match the grid");
  double d = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    d += grid.weight(k) * is_term_at(f[k], g[k], grid.point(k), k);
  return d;
}

double itakura_saito(const MatrixMeasure& mu1, const MatrixMeasure& mu2) {
  require_compatible(mu1, mu2);
  double d = 0.0;
  for (std::size_t k = 0; k < mu1.size(); ++k)
    d += is_term_at(mu1.mass(k), mu2.mass(k), mu1.grid().point(k), k);
  return d;
}

}  // namespace mwd
