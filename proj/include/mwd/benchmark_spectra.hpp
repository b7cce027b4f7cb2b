#pragma once

#include <array>
#include <vector>

#include "mwd/measures.hpp"

namespace mwd {

/// Quadratic AR factor 1 - 2 r cos(phi) z + r^2 z^2.
struct ArFactor {
  double radius;
  double angle;
};

/// Product of quadratic AR factors; radius in (0, 1) keeps |a(e^{j theta})| > 0.
struct ArPolySpec {
  std::vector<ArFactor> factors;
};

/// |a(e^{j theta})|^2 evaluated in complex arithmetic.
double ar_poly_abs2(const ArPolySpec& spec, double theta);

/// AR polynomial a_i of the three benchmark spectra.
ArPolySpec benchmark_polynomial(int index);

/// 2x2 benchmark density f_i(theta) = L(theta) diag(...) L(theta)*, i in {0, 1, 2}.
HermitianMatrix benchmark_density(int index, double theta);

/// Default benchmark grid: 36 points on [0, pi], spacing pi / 35.
Grid benchmark_grid();

/// f_i discretized on `grid` with its quadrature weights.
MatrixMeasure benchmark_measure(int index, const Grid& grid);

/// Generalized Itakura-Saito divergence of two densities sampled on a
/// grid, integrated with the grid weights:
///   sum_k w_k [tr(f g^-1) - log det(f g^-1) - n].
/// Throws DomainError naming theta_k when g is not positive definite there.
double itakura_saito(const Grid& grid, const std::vector<HermitianMatrix>& f,
                     const std::vector<HermitianMatrix>& g);

/// Same divergence between two discrete measures, one term per atom:
///   sum_k [tr(M1_k M2_k^-1) - log det(M1_k M2_k^-1) - n].
double itakura_saito(const MatrixMeasure& mu1, const MatrixMeasure& mu2);

/// Pointwise divergence between two positive definite matrices.
double itakura_saito_term(const HermitianMatrix& f, const HermitianMatrix& g);

}  // namespace mwd
