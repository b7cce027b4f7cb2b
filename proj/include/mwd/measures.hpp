#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mwd/hermitian.hpp"

namespace mwd {

/// Ordered frequency grid on an interval with positive quadrature weights.
/// The ground distance |theta_i - theta_j| is derived on demand.
class Grid {
 public:
  Grid(std::vector<double> points, std::vector<double> weights);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double point(std::size_t k) const { return points_.at(k); }
  double weight(std::size_t k) const { return weights_.at(k); }

  double distance(std::size_t i, std::size_t j) const;
  /// theta_{k+1} - theta_k for k < size() - 1.
  std::vector<double> gaps() const;
  double diameter() const { return points_.back() - points_.front(); }

  /// Same points and weights up to a relative 1e-12.
  bool same_as(const Grid& other) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// K equally spaced points on [a, b] with trapezoid weights.
Grid make_uniform_grid(std::size_t k, double a, double b);

/// Discrete matrix-valued measure: one PSD mass per grid point. Masses are
/// already quadrature-weighted. The scalar case is dim() == 1.
class MatrixMeasure {
 public:
  /// Throws ShapeError on count/dimension mismatch and ValidationError if
  /// any mass has min eigenvalue < -1e-10 * max(1, op_norm).
  MatrixMeasure(Grid grid, std::vector<HermitianMatrix> masses);

  const Grid& grid() const noexcept { return grid_; }
  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return masses_.size(); }
  const std::vector<HermitianMatrix>& masses() const noexcept { return masses_; }
  const HermitianMatrix& mass(std::size_t k) const { return masses_.at(k); }

 private:
  Grid grid_;
  Index dim_;
  std::vector<HermitianMatrix> masses_;
};

using ScalarMeasure = MatrixMeasure;

ScalarMeasure make_scalar_measure(const Grid& grid, std::span<const double> masses);
/// Measure carrying `mass` at grid point k and zero elsewhere.
MatrixMeasure point_mass(const Grid& grid, std::size_t k, const HermitianMatrix& mass);

/// Scalar masses of a 1x1 measure.
std::vector<double> scalar_masses(const MatrixMeasure& mu);

using MatrixDensity = std::function<HermitianMatrix(double)>;

/// M_k = w_k * density(theta_k). Non-PSD samples raise ValidationError
/// naming the frequency.
MatrixMeasure density_to_measure(const Grid& grid, const MatrixDensity& density);

HermitianMatrix total_mass(const MatrixMeasure& mu);

/// sum_k ||M1_k - M2_k||_*
double tv_matrix(const MatrixMeasure& mu1, const MatrixMeasure& mu2);

MatrixMeasure scaled(const MatrixMeasure& mu, double factor);

/// Rescales so that the trace of the total mass equals one.
MatrixMeasure normalize_trace(const MatrixMeasure& mu);

/// Throws ShapeError unless grids and dimensions agree.
void require_compatible(const MatrixMeasure& mu1, const MatrixMeasure& mu2);

/// Pointwise M1_k - M2_k.
std::vector<HermitianMatrix> mass_differences(const MatrixMeasure& mu1,
                                              const MatrixMeasure& mu2);

}  // namespace mwd
