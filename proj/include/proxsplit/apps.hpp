#pragma once

// Instance generators and problem assembly for the two block SDPs:
// the Boolean quadratic program relaxation (real, diag(X) = 1) and
// Toeplitz-structured super-resolution (complex, observed entries fixed).

#include "proxsplit/numerics.hpp"
#include "proxsplit/params.hpp"
#include "proxsplit/prox.hpp"
#include "proxsplit/splitting.hpp"

#include <cstdint>
#include <vector>

namespace proxsplit {

struct BqpInstance {
  Eigen::MatrixXd A;  // K x N
  Eigen::VectorXd b;  // K
  RealHermitian G;    // [A^T A, -A^T b; -b^T A, 0]
  BlockShape shape;   // (N, 1)
  double sigma_a = 1.0;
  double sigma_b = 1.0;
  std::uint64_t seed = 0;

  Index N() const { return shape.N; }
  Index K() const { return A.rows(); }
};

/// G for min ||A x - b||^2 over x in {-1, 1}^N after lifting (constant dropped).
RealHermitian bqp_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// A (K x N, row-major draw order) then b from one seeded stream.
BqpInstance gen_bqp(Index n, Index k, double sigma_a, double sigma_b, std::uint64_t seed);

struct SrInstance {
  Index N = 0;
  Index K = 0;
  std::vector<double> taus;        // in [0, 1), wraparound separation >= 1/N
  std::vector<double> amplitudes;  // N(0, sigma^2)
  Eigen::VectorXcd x_star;         // x_n = sum_k c_k exp(-i 2 pi n tau_k)
  std::vector<Index> omega;        // sorted observed rows
  ComplexHermitian G;              // diag(I/(2N), 1/2)
  double sigma = 1.0;
  double obs_frac = 1.0;
  std::uint64_t seed = 0;

  BlockShape shape() const { return BlockShape(N, 1); }
  FixedEntrySet observed() const;
  double amplitude_l1() const;   // sum |c_k|
  double mean_magnitude() const; // sum |c_k| / K
};

/// Measurements x_n = sum_k c_k exp(-i 2 pi n tau_k), n = 0..N-1.
Eigen::VectorXcd sr_measurements(const std::vector<double>& taus,
                                 const std::vector<double>& amplitudes, Index n);

/// Smallest circular distance between two locations on [0, 1).
double min_wraparound_separation(const std::vector<double>& taus);

/// Throws std::invalid_argument when K/N >= 1, obs_frac outside (0, 1], or
/// the separation could not be met within 1e5 draws.
SrInstance gen_sr(Index n, Index k, double sigma, double obs_frac, std::uint64_t seed);

/// First Toeplitz column of the atomic decomposition sum |c_k| b(tau_k) b(tau_k)^H
/// with b_n = exp(-i 2 pi n tau).
Eigen::VectorXcd sr_true_u(const SrInstance& inst);
/// [T(u), x; x^H, t] built from the spikes, t = sum |c_k|.
ComplexHermitian sr_atomic_solution(const SrInstance& inst);

ProxPair<double> build_prox_pair(const BqpInstance& inst);
ProxPair<Complex> build_prox_pair(const SrInstance& inst);

template <typename Scalar>
struct ReferenceSolution {
  DenseHermitian<Scalar> X;
  DenseHermitian<Scalar> Lambda;
  DenseHermitian<Scalar> Psi;
  long iterations = 0;
  double opt_residual = 0.0;
  bool converged = false;
};

/// DRS from psi0 = 0 until ||x^{k+1} - z^k|| <= tol. When the cap is hit the
/// partial reference is returned with converged = false.
template <typename Scalar>
ReferenceSolution<Scalar> reference_solve(const ProxPair<Scalar>& pair, const OperatorParam& s,
                                          double tol = 1e-10, long max_iters = 200000);

/// ||X - X_ref||_F^2 / n^2.
template <typename Scalar>
double mse(const DenseHermitian<Scalar>& x, const DenseHermitian<Scalar>& x_ref);

}  // namespace proxsplit
