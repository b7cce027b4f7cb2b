#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mwd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative hermiticity tolerance accepted at construction.
inline constexpr double kHermitianTolerance = 1e-12;

/// Dense complex Hermitian matrix.
///
/// Construction from an arbitrary complex matrix checks that
/// max|M - M*| <= 1e-12 * max|M| and then stores the exact Hermitian part
/// (M + M*) / 2, so every stored value is Hermitian bit-for-bit. Arithmetic
/// that preserves hermiticity (sums, real scaling) skips the check.
class HermitianMatrix {
 public:
  /// 1x1 zero.
  HermitianMatrix() : m_(ComplexMatrix::Zero(1, 1)) {}

  /// Validating constructor; throws ValidationError or ShapeError.
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix zero(Index n);
  static HermitianMatrix identity(Index n);
  static HermitianMatrix diagonal(const RealVector& d);
  static HermitianMatrix scalar(double value);

  /// (M + M*) / 2 without a tolerance check. M must be square.
  static HermitianMatrix hermitian_part(const ComplexMatrix& m);

  Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
    return a += b;
  }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
    return a -= b;
  }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  HermitianMatrix operator-() const { return HermitianMatrix(-m_, Trusted{}); }

  bool operator==(const HermitianMatrix& o) const {
    return m_.rows() == o.m_.rows() && m_ == o.m_;
  }

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // unitary, columns are eigenvectors
};

EigenDecomposition eigh(const HermitianMatrix& h);

/// Eigenvalues only, ascending.
RealVector eigvalsh(const HermitianMatrix& h);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);
double op_norm(const HermitianMatrix& h);

/// Sum of singular values.
double nuclear_norm(const ComplexMatrix& m);
double nuclear_norm(const HermitianMatrix& h);

double frobenius_norm(const HermitianMatrix& h);

/// Re tr(a b). For Hermitian a, b the trace is real.
double trace_pairing(const HermitianMatrix& a, const HermitianMatrix& b);

/// Frobenius projection onto {X Hermitian : op_norm(X) <= r}; clips the
/// spectrum to [-r, r].
HermitianMatrix project_opnorm_ball(const HermitianMatrix& h, double r);

/// Proximal map of tau * nuclear_norm restricted to Hermitian matrices.
HermitianMatrix eig_soft_threshold(const HermitianMatrix& h, double tau);

/// d f - f d. Anti-Hermitian for Hermitian arguments.
ComplexMatrix commutator(const HermitianMatrix& d, const HermitianMatrix& f);

/// Rebuild V diag(values) V*.
HermitianMatrix from_eigen(const RealVector& values, const ComplexMatrix& vectors);

bool is_psd(const HermitianMatrix& h, double rel_tol = 1e-10);

/// Unchecked in-place kernels for solver inner loops. Arguments must be
/// exactly Hermitian; 1x1 and 2x2 inputs take closed-form paths.
namespace spectral {

void clip(ComplexMatrix& h, double r);
void shrink(ComplexMatrix& h, double tau);
double nuclear_norm(const ComplexMatrix& h);
double op_norm(const ComplexMatrix& h);

}  // namespace spectral

}  // namespace mwd
