#include "proxsplit/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace proxsplit {

namespace {

double real_part(double v) { return v; }
double real_part(const Complex& v) { return v.real(); }
double imag_part(double) { return 0.0; }
double imag_part(const Complex& v) { return v.imag(); }

template <typename Scalar>
bool all_finite(const MatrixX<Scalar>& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(real_part(m(i, j))) || !std::isfinite(imag_part(m(i, j)))) return false;
    }
  }
  return true;
}

template <typename Scalar>
DenseHermitian<Scalar> reconstruct(const EigenDecomposition<Scalar>& e, const Eigen::VectorXd& w) {
  MatrixX<Scalar> scaled = e.vectors * w.cast<Scalar>().asDiagonal();
  return DenseHermitian<Scalar>(scaled * e.vectors.adjoint());
}

}  // namespace

BlockShape::BlockShape(Index n, Index k) : N(n), K(k) {
  if (n < 1 || k < 1) {
    throw std::invalid_argument("BlockShape: N and K must be >= 1, got N=" + std::to_string(n) +
                                " K=" + std::to_string(k));
  }
}

template <typename Scalar>
DenseHermitian<Scalar>::DenseHermitian(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("DenseHermitian: matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected square");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

template <typename Scalar>
DenseHermitian<Scalar> DenseHermitian<Scalar>::zero(Index n) {
  return DenseHermitian(Matrix::Zero(n, n));
}

template <typename Scalar>
DenseHermitian<Scalar> DenseHermitian<Scalar>::identity(Index n) {
  return DenseHermitian(Matrix::Identity(n, n));
}

template <typename Scalar>
typename DenseHermitian<Scalar>::Matrix DenseHermitian<Scalar>::block(const BlockShape& shape,
                                                                       int which) const {
  if (shape.dim() != dim()) {
    throw std::invalid_argument("DenseHermitian::block: shape dimension " +
                                std::to_string(shape.dim()) + " != matrix dimension " +
                                std::to_string(dim()));
  }
  switch (which) {
    case 1: return m_.topLeftCorner(shape.N, shape.N);
    case 0: return m_.topRightCorner(shape.N, shape.K);
    case 2: return m_.bottomRightCorner(shape.K, shape.K);
    default: throw std::invalid_argument("DenseHermitian::block: block id must be 0, 1 or 2");
  }
}

template <typename Scalar>
DenseHermitian<Scalar>& DenseHermitian<Scalar>::operator+=(const DenseHermitian& o) {
  if (o.dim() != dim()) throw std::invalid_argument("DenseHermitian: dimension mismatch in +");
  m_ += o.m_;
  return *this;
}

template <typename Scalar>
DenseHermitian<Scalar>& DenseHermitian<Scalar>::operator-=(const DenseHermitian& o) {
  if (o.dim() != dim()) throw std::invalid_argument("DenseHermitian: dimension mismatch in -");
  m_ -= o.m_;
  return *this;
}

template <typename Scalar>
DenseHermitian<Scalar>& DenseHermitian<Scalar>::operator*=(double s) {
  m_ *= s;
  return *this;
}

template <typename Scalar>
double inner(const DenseHermitian<Scalar>& a, const DenseHermitian<Scalar>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  return real_part((a.matrix().array().conjugate() * b.matrix().array()).sum());
}

template <typename Scalar>
double squared_norm(const DenseHermitian<Scalar>& a) {
  return a.matrix().squaredNorm();
}

template <typename Scalar>
double frobenius_norm(const DenseHermitian<Scalar>& a) {
  return a.matrix().norm();
}

template <typename Scalar>
DenseHermitian<Scalar> hadamard_blocks(const DenseHermitian<Scalar>& m, const BlockShape& shape,
                                       double w_tl, double w_off, double w_br) {
  if (shape.dim() != m.dim()) {
    throw std::invalid_argument("hadamard_blocks: shape (" + std::to_string(shape.N) + "+" +
                                std::to_string(shape.K) + ") does not partition a " +
                                std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
                                " matrix");
  }
  MatrixX<Scalar> out = m.matrix();
  out.topLeftCorner(shape.N, shape.N) *= w_tl;
  out.topRightCorner(shape.N, shape.K) *= w_off;
  out.bottomLeftCorner(shape.K, shape.N) *= w_off;
  out.bottomRightCorner(shape.K, shape.K) *= w_br;
  return DenseHermitian<Scalar>(out);
}

template <typename Scalar>
EigenDecomposition<Scalar> eig_hermitian(const DenseHermitian<Scalar>& m) {
  if (!all_finite(m.matrix())) {
    throw std::domain_error("eig_hermitian: matrix has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
ConeSplit<Scalar> cone_split(const DenseHermitian<Scalar>& m) {
  const auto e = eig_hermitian(m);
  return {reconstruct(e, e.values.cwiseMax(0.0)), reconstruct(e, e.values.cwiseMin(0.0))};
}

template <typename Scalar>
DenseHermitian<Scalar> project_psd(const DenseHermitian<Scalar>& m) {
  const auto e = eig_hermitian(m);
  return reconstruct(e, e.values.cwiseMax(0.0));
}

template <typename Scalar>
DenseHermitian<Scalar> project_nsd(const DenseHermitian<Scalar>& m) {
  const auto e = eig_hermitian(m);
  return reconstruct(e, e.values.cwiseMin(0.0));
}

template <typename Scalar>
DenseHermitian<Scalar> toeplitz_map(const VectorX<Scalar>& u) {
  const Index n = u.size();
  if (n < 1) throw std::invalid_argument("toeplitz_map: empty first column");
  if (imag_part(u(0)) != 0.0) {
    throw std::invalid_argument("toeplitz_map: first entry must be real for a Hermitian result");
  }
  MatrixX<Scalar> t(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index j = k; j < n; ++j) {
      t(j, k) = u(j - k);
      t(k, j) = Eigen::numext::conj(u(j - k));
    }
  }
  return DenseHermitian<Scalar>(t);
}

template <typename Scalar>
VectorX<Scalar> toeplitz_adjoint(const DenseHermitian<Scalar>& q) {
  const Index n = q.dim();
  VectorX<Scalar> p(n);
  p(0) = Scalar(real_part(q.matrix().trace()));
  for (Index k = 1; k < n; ++k) {
    Scalar s(0);
    for (Index j = k; j < n; ++j) s += q(j, j - k);
    p(k) = Scalar(2) * s;
  }
  return p;
}

Eigen::VectorXd toeplitz_gram_diagonal(Index n) {
  Eigen::VectorXd d(n);
  d(0) = static_cast<double>(n);
  for (Index k = 1; k < n; ++k) d(k) = 2.0 * static_cast<double>(n - k);
  return d;
}

template <typename Scalar>
DenseHermitian<Scalar> project_toeplitz(const DenseHermitian<Scalar>& q) {
  VectorX<Scalar> p = toeplitz_adjoint(q);
  const Eigen::VectorXd gram = toeplitz_gram_diagonal(q.dim());
  for (Index k = 0; k < p.size(); ++k) p(k) /= gram(k);
  return toeplitz_map<Scalar>(p);
}

double GaussianSampler::normal(double sigma) { return sigma * normal_(engine_); }

double GaussianSampler::uniform01() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

Index GaussianSampler::uniform_index(Index n) {
  return std::uniform_int_distribution<Index>(0, n - 1)(engine_);
}

Eigen::MatrixXd GaussianSampler::matrix(Index rows, Index cols, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("GaussianSampler::matrix: sigma must be > 0");
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill order so the draw sequence reads like the printed matrix.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(sigma);
  }
  return m;
}

Eigen::MatrixXd gaussian_sample(Index rows, Index cols, double sigma, std::uint64_t seed) {
  GaussianSampler rng(seed);
  return rng.matrix(rows, cols, sigma);
}

template <>
DenseHermitian<double> random_hermitian<double>(Index n, GaussianSampler& rng) {
  return DenseHermitian<double>(rng.matrix(n, n, 1.0));
}

template <>
DenseHermitian<Complex> random_hermitian<Complex>(Index n, GaussianSampler& rng) {
  MatrixX<Complex> m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  }
  return DenseHermitian<Complex>(m);
}

template <>
DenseHermitian<double> random_psd<double>(Index n, Index rank, GaussianSampler& rng) {
  const Eigen::MatrixXd g = rng.matrix(n, rank, 1.0);
  return DenseHermitian<double>(g * g.transpose());
}

template <>
DenseHermitian<Complex> random_psd<Complex>(Index n, Index rank, GaussianSampler& rng) {
  MatrixX<Complex> g(n, rank);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < rank; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return DenseHermitian<Complex>(g * g.adjoint());
}

#define PROXSPLIT_INSTANTIATE(S)                                                              \
  template class DenseHermitian<S>;                                                           \
  template double inner<S>(const DenseHermitian<S>&, const DenseHermitian<S>&);               \
  template double squared_norm<S>(const DenseHermitian<S>&);                                  \
  template double frobenius_norm<S>(const DenseHermitian<S>&);                                \
  template DenseHermitian<S> hadamard_blocks<S>(const DenseHermitian<S>&, const BlockShape&, \
                                                double, double, double);                      \
  template EigenDecomposition<S> eig_hermitian<S>(const DenseHermitian<S>&);                  \
  template ConeSplit<S> cone_split<S>(const DenseHermitian<S>&);                              \
  template DenseHermitian<S> project_psd<S>(const DenseHermitian<S>&);                        \
  template DenseHermitian<S> project_nsd<S>(const DenseHermitian<S>&);                        \
  template DenseHermitian<S> toeplitz_map<S>(const VectorX<S>&);                              \
  template VectorX<S> toeplitz_adjoint<S>(const DenseHermitian<S>&);                          \
  template DenseHermitian<S> project_toeplitz<S>(const DenseHermitian<S>&);

PROXSPLIT_INSTANTIATE(double)
PROXSPLIT_INSTANTIATE(Complex)

#undef PROXSPLIT_INSTANTIATE

}  // namespace proxsplit
