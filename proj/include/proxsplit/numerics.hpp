#pragma once

// Dense Hermitian matrix primitives shared by every other module: the
// iterate container, cone projections, Toeplitz structure maps and seeded
// Gaussian sampling. Real and complex fields are both supported through the
// scalar template parameter; only double and std::complex<double> are
// instantiated.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <type_traits>

namespace proxsplit {

using Index = Eigen::Index;
using Complex = std::complex<double>;

enum class Field { real, complex };

template <typename Scalar>
struct FieldOf;
template <>
struct FieldOf<double> {
  static constexpr Field value = Field::real;
};
template <>
struct FieldOf<Complex> {
  static constexpr Field value = Field::complex;
};

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Partition of an (N+K)x(N+K) matrix into a top-left NxN block, an NxK
/// off-diagonal block and a bottom-right KxK block.
struct BlockShape {
  Index N = 1;
  Index K = 1;

  BlockShape() = default;
  BlockShape(Index n, Index k);

  Index dim() const { return N + K; }
  bool operator==(const BlockShape&) const = default;
};

/// Square matrix equal to its conjugate transpose. Construction from an
/// arbitrary square matrix keeps the Hermitian part (M + M^H) / 2, which is
/// exactly Hermitian in floating point.
template <typename Scalar>
class DenseHermitian {
 public:
  using scalar_type = Scalar;
  using Matrix = MatrixX<Scalar>;
  static constexpr Field field = FieldOf<Scalar>::value;

  DenseHermitian() = default;
  explicit DenseHermitian(const Matrix& m);

  static DenseHermitian zero(Index n);
  static DenseHermitian identity(Index n);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

  /// Copy of the block partitioned by `shape`: 1 = top-left, 0 = off-diagonal
  /// (NxK), 2 = bottom-right.
  Matrix block(const BlockShape& shape, int which) const;

  DenseHermitian& operator+=(const DenseHermitian& o);
  DenseHermitian& operator-=(const DenseHermitian& o);
  DenseHermitian& operator*=(double s);

  friend DenseHermitian operator+(DenseHermitian a, const DenseHermitian& b) { return a += b; }
  friend DenseHermitian operator-(DenseHermitian a, const DenseHermitian& b) { return a -= b; }
  friend DenseHermitian operator*(double s, DenseHermitian a) { return a *= s; }
  friend DenseHermitian operator*(DenseHermitian a, double s) { return a *= s; }
  friend DenseHermitian operator-(DenseHermitian a) { return a *= -1.0; }

 private:
  Matrix m_;
};

using RealHermitian = DenseHermitian<double>;
using ComplexHermitian = DenseHermitian<Complex>;

/// Real part of trace(A^H B).
template <typename Scalar>
double inner(const DenseHermitian<Scalar>& a, const DenseHermitian<Scalar>& b);
template <typename Scalar>
double frobenius_norm(const DenseHermitian<Scalar>& a);
template <typename Scalar>
double squared_norm(const DenseHermitian<Scalar>& a);

inline double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b); }
inline double frobenius_norm(const Eigen::VectorXd& a) { return a.norm(); }
inline double squared_norm(const Eigen::VectorXd& a) { return a.squaredNorm(); }

/// Entrywise block scaling: top-left by w_tl, both off-diagonal blocks by
/// w_off, bottom-right by w_br. Hermitian-ness is preserved for real weights.
template <typename Scalar>
DenseHermitian<Scalar> hadamard_blocks(const DenseHermitian<Scalar>& m, const BlockShape& shape,
                                       double w_tl, double w_off, double w_br);

template <typename Scalar>
struct EigenDecomposition {
  Eigen::VectorXd values;    // ascending
  MatrixX<Scalar> vectors;   // unitary, columns match values
};

/// Throws std::domain_error on non-finite entries.
template <typename Scalar>
EigenDecomposition<Scalar> eig_hermitian(const DenseHermitian<Scalar>& m);

template <typename Scalar>
DenseHermitian<Scalar> project_psd(const DenseHermitian<Scalar>& m);
template <typename Scalar>
DenseHermitian<Scalar> project_nsd(const DenseHermitian<Scalar>& m);

template <typename Scalar>
struct ConeSplit {
  DenseHermitian<Scalar> psd;
  DenseHermitian<Scalar> nsd;
};
/// Both halves of the Moreau decomposition M = P+(M) + P-(M) from a single
/// eigendecomposition.
template <typename Scalar>
ConeSplit<Scalar> cone_split(const DenseHermitian<Scalar>& m);

/// Hermitian Toeplitz matrix with first column u. u(0) must be real.
template <typename Scalar>
DenseHermitian<Scalar> toeplitz_map(const VectorX<Scalar>& u);

/// Adjoint of toeplitz_map under the real inner product: entry 0 is the
/// trace, entry k > 0 is twice the sum of the k-th subdiagonal.
template <typename Scalar>
VectorX<Scalar> toeplitz_adjoint(const DenseHermitian<Scalar>& q);

/// Diagonal of toeplitz_adjoint(toeplitz_map(.)): (N, 2(N-1), ..., 2).
Eigen::VectorXd toeplitz_gram_diagonal(Index n);

/// Orthogonal projection onto Hermitian Toeplitz matrices (each diagonal
/// replaced by its mean).
template <typename Scalar>
DenseHermitian<Scalar> project_toeplitz(const DenseHermitian<Scalar>& q);

/// Seeded source of i.i.d. normal draws. Holds its own engine; copies
/// continue independently from the same state.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double normal(double sigma = 1.0);
  double uniform01();
  Index uniform_index(Index n);
  Eigen::MatrixXd matrix(Index rows, Index cols, double sigma);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// rows x cols matrix of i.i.d. N(0, sigma^2) entries; deterministic in seed.
Eigen::MatrixXd gaussian_sample(Index rows, Index cols, double sigma, std::uint64_t seed);

/// Random Hermitian matrix with i.i.d. N(0, 1) entries before symmetrization.
template <typename Scalar>
DenseHermitian<Scalar> random_hermitian(Index n, GaussianSampler& rng);

/// Random PSD matrix G G^H with G of size n x rank.
template <typename Scalar>
DenseHermitian<Scalar> random_psd(Index n, Index rank, GaussianSampler& rng);

}  // namespace proxsplit
