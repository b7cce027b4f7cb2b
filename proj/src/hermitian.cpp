#include "mwd/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mwd/errors.hpp"

namespace mwd {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ShapeError("Hermitian matrix must be square with dim >= 1");
  const double scale = m.cwiseAbs().maxCoeff();
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!std::isfinite(scale) || skew > kHermitianTolerance * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max|M - M*| = " << skew
       << " exceeds tolerance relative to max|M| = " << scale;
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Index n) {
  if (n < 1) throw ShapeError("dimension must be >= 1");
  return {ComplexMatrix::Zero(n, n), Trusted{}};
}

HermitianMatrix HermitianMatrix::identity(Index n) {
  if (n < 1) throw ShapeError("dimension must be >= 1");
  return {ComplexMatrix::Identity(n, n), Trusted{}};
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  if (d.size() < 1) throw ShapeError("dimension must be >= 1");
  return {d.cast<Complex>().asDiagonal().toDenseMatrix(), Trusted{}};
}

HermitianMatrix HermitianMatrix::scalar(double value) {
  return {ComplexMatrix::Constant(1, 1, Complex(value, 0.0)), Trusted{}};
}

HermitianMatrix HermitianMatrix::hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ShapeError("Hermitian part requires a square matrix");
  return {0.5 * (m + m.adjoint()), Trusted{}};
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (dim() != o.dim()) throw ShapeError("dimension mismatch in sum");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (dim() != o.dim()) throw ShapeError("dimension mismatch in difference");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

EigenDecomposition eigh(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigvalsh(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double op_norm(const HermitianMatrix& h) {
  return eigvalsh(h).cwiseAbs().maxCoeff();
}

double nuclear_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double nuclear_norm(const HermitianMatrix& h) {
  return eigvalsh(h).cwiseAbs().sum();
}

double frobenius_norm(const HermitianMatrix& h) { return h.matrix().norm(); }

double trace_pairing(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("dimension mismatch in trace pairing");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

HermitianMatrix from_eigen(const RealVector& values, const ComplexMatrix& vectors) {
  return HermitianMatrix::hermitian_part(
      vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint());
}

HermitianMatrix project_opnorm_ball(const HermitianMatrix& h, double r) {
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  auto [values, vectors] = eigh(h);
  if (values.cwiseAbs().maxCoeff() <= r) return h;
  return from_eigen(values.cwiseMax(-r).cwiseMin(r), vectors);
}

HermitianMatrix eig_soft_threshold(const HermitianMatrix& h, double tau) {
  if (!(tau >= 0.0)) throw DomainError("threshold must be nonnegative");
  if (tau == 0.0) return h;
  auto [values, vectors] = eigh(h);
  const RealVector shrunk =
      values.unaryExpr([tau](double v) {
        return std::copysign(std::max(std::abs(v) - tau, 0.0), v);
      });
  if (shrunk.isZero(0.0)) return HermitianMatrix::zero(h.dim());
  return from_eigen(shrunk, vectors);
}

ComplexMatrix commutator(const HermitianMatrix& d, const HermitianMatrix& f) {
  if (d.dim() != f.dim()) throw ShapeError("dimension mismatch in commutator");
  return d.matrix() * f.matrix() - f.matrix() * d.matrix();
}

bool is_psd(const HermitianMatrix& h, double rel_tol) {
  const RealVector ev = eigvalsh(h);
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev(0) >= -rel_tol * scale;
}

}  // namespace mwd

namespace mwd::spectral {

namespace {

// Replaces h by g(h) for a scalar function g applied to the spectrum.
template <class Fn>
void apply(ComplexMatrix& h, Fn g) {
  const Index n = h.rows();
  if (n == 1) {
    h(0, 0) = Complex(g(h(0, 0).real()), 0.0);
    return;
  }
  if (n == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
    const double hi = g(mid + rad), lo = g(mid - rad);
    // g(H) = alpha I + beta (H - mid I)
    const double alpha = 0.5 * (hi + lo);
    const double beta = rad > 0.0 ? (hi - lo) / (2.0 * rad) : 0.0;
    const Complex off = beta * h(0, 1);
    h(0, 0) = Complex(alpha + beta * (a - mid), 0.0);
    h(1, 1) = Complex(alpha + beta * (d - mid), 0.0);
    h(0, 1) = off;
    h(1, 0) = std::conj(off);
    return;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const RealVector values = solver.eigenvalues().unaryExpr(g);
  const ComplexMatrix& v = solver.eigenvectors();
  h = v * values.cast<Complex>().asDiagonal() * v.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
}

template <class Fn>
double reduce(const ComplexMatrix& h, Fn fold) {
  const Index n = h.rows();
  if (n == 1) return std::abs(h(0, 0).real());
  if (n == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
    return fold(std::abs(mid + rad), std::abs(mid - rad));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  const RealVector ev = solver.eigenvalues().cwiseAbs();
  double acc = ev(0);
  for (Index i = 1; i < ev.size(); ++i) acc = fold(acc, ev(i));
  return acc;
}

}  // namespace

void clip(ComplexMatrix& h, double r) {
  apply(h, [r](double v) { return std::clamp(v, -r, r); });
}

void shrink(ComplexMatrix& h, double tau) {
  if (tau == 0.0) return;
  apply(h, [tau](double v) { return std::copysign(std::max(std::abs(v) - tau, 0.0), v); });
}

double nuclear_norm(const ComplexMatrix& h) {
  return reduce(h, [](double x, double y) { return x + y; });
}

double op_norm(const ComplexMatrix& h) {
  return reduce(h, [](double x, double y) { return std::max(x, y); });
}

}  // namespace mwd::spectral
