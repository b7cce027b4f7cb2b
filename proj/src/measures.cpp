#include "mwd/measures.hpp"

#include <cmath>
#include <sstream>

#include "mwd/errors.hpp"

namespace mwd {

Grid::Grid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw ShapeError("grid must have at least one point");
  if (points_.size() != weights_.size())
    throw ShapeError("grid points and weights differ in length");
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k]) || !std::isfinite(weights_[k]))
      throw ValidationError("grid contains non-finite values");
    if (!(weights_[k] > 0.0)) {
      std::ostringstream os;
      os << "grid weight at index " << k << " is not positive";
      throw ValidationError(os.str());
    }
    if (k > 0 && !(points_[k] > points_[k - 1]))
      throw ValidationError("grid points must be strictly increasing");
  }
}

double Grid::distance(std::size_t i, std::size_t j) const {
  return std::abs(points_.at(i) - points_.at(j));
}

std::vector<double> Grid::gaps() const {
  std::vector<double> g;
  g.reserve(points_.size() ? points_.size() - 1 : 0);
  for (std::size_t k = 0; k + 1 < points_.size(); ++k)
    g.push_back(points_[k + 1] - points_[k]);
  return g;
}

bool Grid::same_as(const Grid& other) const {
  if (size() != other.size()) return false;
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  for (std::size_t k = 0; k < size(); ++k)
    if (!close(points_[k], other.points_[k]) || !close(weights_[k], other.weights_[k]))
      return false;
  return true;
}

Grid make_uniform_grid(std::size_t k, double a, double b) {
  if (k < 2) throw DomainError("uniform grid needs at least two points");
  if (!(b > a)) throw DomainError("uniform grid needs b > a");
  const double step = (b - a) / static_cast<double>(k - 1);
  std::vector<double> points(k), weights(k, step);
  for (std::size_t i = 0; i < k; ++i) points[i] = a + step * static_cast<double>(i);
  points.back() = b;
  weights.front() = weights.back() = 0.5 * step;
  return Grid(std::move(points), std::move(weights));
}

MatrixMeasure::MatrixMeasure(Grid grid, std::vector<HermitianMatrix> masses)
    : grid_(std::move(grid)), dim_(0), masses_(std::move(masses)) {
  if (masses_.size() != grid_.size())
    throw ShapeError("measure needs exactly one mass per grid point");
  dim_ = masses_.front().dim();
  for (std::size_t k = 0; k < masses_.size(); ++k) {
    if (masses_[k].dim() != dim_) throw ShapeError("masses must share a dimension");
    if (!is_psd(masses_[k])) {
      std::ostringstream os;
      os << "mass at theta = " << grid_.point(k) << " (index " << k
         << ") is not positive semidefinite";
      throw ValidationError(os.str());
    }
  }
}

ScalarMeasure make_scalar_measure(const Grid& grid, std::span<const double> masses) {
  std::vector<HermitianMatrix> m;
  m.reserve(masses.size());
  for (double v : masses) m.push_back(HermitianMatrix::scalar(v));
  return ScalarMeasure(grid, std::move(m));
}

MatrixMeasure point_mass(const Grid& grid, std::size_t k, const HermitianMatrix& mass) {
  if (k >= grid.size()) throw ShapeError("point mass index outside grid");
  std::vector<HermitianMatrix> m(grid.size(), HermitianMatrix::zero(mass.dim()));
  m[k] = mass;
  return MatrixMeasure(grid, std::move(m));
}

std::vector<double> scalar_masses(const MatrixMeasure& mu) {
  if (mu.dim() != 1) throw ShapeError("scalar measure expected (dim 1)");
  std::vector<double> out;
  out.reserve(mu.size());
  for (const auto& m : mu.masses()) out.push_back(m(0, 0).real());
  return out;
}

MatrixMeasure density_to_measure(const Grid& grid, const MatrixDensity& density) {
  std::vector<HermitianMatrix> masses;
  masses.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    HermitianMatrix sample = density(grid.point(k));
    if (!is_psd(sample)) {
      std::ostringstream os;
      os << "density is not positive semidefinite at theta = " << grid.point(k)
         << " (index " << k << ")";
      throw ValidationError(os.str());
    }
    masses.push_back(grid.weight(k) * sample);
  }
  return MatrixMeasure(grid, std::move(masses));
}

HermitianMatrix total_mass(const MatrixMeasure& mu) {
  HermitianMatrix sum = HermitianMatrix::zero(mu.dim());
  for (const auto& m : mu.masses()) sum += m;
  return sum;
}

void require_compatible(const MatrixMeasure& mu1, const MatrixMeasure& mu2) {
  if (mu1.dim() != mu2.dim()) throw ShapeError("measures differ in matrix dimension");
  if (!mu1.grid().same_as(mu2.grid())) throw ShapeError("measures live on different grids");
}

std::vector<HermitianMatrix> mass_differences(const MatrixMeasure& mu1,
                                              const MatrixMeasure& mu2) {
  require_compatible(mu1, mu2);
  std::vector<HermitianMatrix> d;
  d.reserve(mu1.size());
  for (std::size_t k = 0; k < mu1.size(); ++k) d.push_back(mu1.mass(k) - mu2.mass(k));
  return d;
}

double tv_matrix(const MatrixMeasure& mu1, const MatrixMeasure& mu2) {
  double tv = 0.0;
  for (const auto& d : mass_differences(mu1, mu2)) tv += nuclear_norm(d);
  return tv;
}

MatrixMeasure scaled(const MatrixMeasure& mu, double factor) {
  if (!(factor >= 0.0)) throw DomainError("measure scale factor must be nonnegative");
  std::vector<HermitianMatrix> m = mu.masses();
  for (auto& x : m) x *= factor;
  return MatrixMeasure(mu.grid(), std::move(m));
}

MatrixMeasure normalize_trace(const MatrixMeasure& mu) {
  const double tr = total_mass(mu).trace();
  if (!(tr > 0.0)) throw DomainError("cannot normalize a measure with zero trace");
  return scaled(mu, 1.0 / tr);
}

}  // namespace mwd
