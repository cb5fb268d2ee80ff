#pragma once

// Extended proximal operators Prox_f^S(v) = argmin_z f(z) + 1/2 ||S z - v||^2
// for the functions the two SDP applications need, plus the l1 case and the
// Moreau decomposition check.

#include "proxsplit/numerics.hpp"
#include "proxsplit/params.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace proxsplit {

/// Z with S(Z) = P+(V). Requires a definiteness-invariant S.
template <typename Scalar>
DenseHermitian<Scalar> prox_psd_indicator(const OperatorParam& s, const DenseHermitian<Scalar>& v);

/// Prox of the conjugate of the PSD indicator (the NSD indicator) under the
/// parameter (S*)^-1, i.e. S*(P-(V)).
template <typename Scalar>
DenseHermitian<Scalar> prox_psd_conjugate(const OperatorParam& s, const DenseHermitian<Scalar>& v);

/// argmin <X, G> + 1/2 ||S X - V||^2 subject to diag(X) = 1, for entrywise S.
template <typename Scalar>
DenseHermitian<Scalar> prox_linear_diag1(const DenseHermitian<Scalar>& g, const OperatorParam& s,
                                         const DenseHermitian<Scalar>& v);

/// Observed entries of the last column of an (N+1)x(N+1) matrix.
struct FixedEntrySet {
  std::vector<Index> indices;         // zero-based rows in [0, N)
  std::vector<Complex> values;        // same length as indices
};

/// Toeplitz-structured prox: average the diagonals of the top-left block of V,
/// apply S^-1, subtract (S*S)^-1 G, then pin the observed entries.
template <typename Scalar>
DenseHermitian<Scalar> prox_linear_sr(const DenseHermitian<Scalar>& g, const FixedEntrySet& observed,
                                      const OperatorParam& s, const DenseHermitian<Scalar>& v);

/// argmin ||x||_1 + 1/2 ||Diag(sqrt(d)) x - v||^2.
Eigen::VectorXd prox_l1_orthogonal(const Eigen::VectorXd& d, const Eigen::VectorXd& v);

/// Prox of the conjugate of ||.||_1 (indicator of the unit infinity ball)
/// under (S*)^-1 with S = Diag(sqrt(d)).
Eigen::VectorXd prox_linf_ball_conjugate(const Eigen::VectorXd& d, const Eigen::VectorXd& v);

/// Unit soft threshold sgn(u) * max(|u| - 1, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& u);

/// ||v - S Prox_f^S(v) - (S*)^-1 Prox_{f*}^{(S*)^-1}(v)||. Both evaluators
/// take the original S.
template <typename Point>
double moreau_residual(const OperatorParam& s,
                       const std::function<Point(const OperatorParam&, const Point&)>& f_prox,
                       const std::function<Point(const OperatorParam&, const Point&)>& fstar_prox,
                       const Point& v) {
  const Point r = v - s.apply(f_prox(s, v)) - s.adjoint_inverse(fstar_prox(s, v));
  return frobenius_norm(r);
}

enum class ConstraintKind { none, diagonal_ones, toeplitz_fixed_entries };

std::string to_string(ConstraintKind kind);

/// The (f, g) problem description driving the splitting solvers. g is the PSD
/// indicator in both shipped applications.
template <typename Scalar>
struct ProxPair {
  using ScalarType = Scalar;
  using Matrix = DenseHermitian<Scalar>;
  using Evaluator = std::function<Matrix(const OperatorParam&, const Matrix&)>;

  Evaluator f_prox;
  Evaluator g_prox;
  Evaluator g_conj_prox;
  std::optional<Matrix> objective;
  ConstraintKind constraint = ConstraintKind::none;
  Index dim = 0;
};

/// f = g = PSD indicator; useful as a trivial pair whose fixed points are all
/// PSD matrices.
template <typename Scalar>
ProxPair<Scalar> psd_psd_pair(Index dim);

}  // namespace proxsplit
