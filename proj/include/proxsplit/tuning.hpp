#pragma once

// Parameter selection from a primal-dual solution pair: the parameter that
// minimizes the rate-bound anchor ||S x* - psi0||^2 + ||(S*)^-1 lambda* - psi0||^2,
// closed forms for the scalar, diagonal and 2x2 block cases, a 2-D search for
// the joint block case, acceleration gains, and a-priori estimates for the
// two SDP applications.

#include "proxsplit/numerics.hpp"
#include "proxsplit/params.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace proxsplit {

template <typename Point>
struct SolutionPair {
  Point x_star;
  Point lambda_star;
  Point psi0;
  std::optional<BlockShape> shape;
};

template <typename Scalar>
using SdpSolutionPair = SolutionPair<DenseHermitian<Scalar>>;
using VectorSolutionPair = SolutionPair<Eigen::VectorXd>;

/// ||S x* - psi0||^2 + ||(S*)^-1 lambda* - psi0||^2.
template <typename Point>
double rate_anchor_objective(const OperatorParam& s, const SolutionPair<Point>& pair) {
  return squared_norm(Point(s.apply(pair.x_star) - pair.psi0)) +
         squared_norm(Point(s.adjoint_inverse(pair.lambda_star) - pair.psi0));
}

/// sqrt(||lambda*|| / ||x*||). Requires psi0 = 0 and x* != 0.
template <typename Point>
double optimal_scalar(const SolutionPair<Point>& pair);

/// |lambda_i* / x_i*| clamped to [1/d_max, d_max]; x_i* = 0 gives d_max.
Eigen::VectorXd optimal_diagonal(const VectorSolutionPair& pair,
                                 double d_max = OperatorParam::kDefaultDMax);

/// Squared Frobenius norms of the three blocks of X* and Lambda*.
struct BlockNorms {
  double x1 = 0, x0 = 0, x2 = 0;
  double l1 = 0, l0 = 0, l2 = 0;
};

template <typename Scalar>
BlockNorms block_norms(const SdpSolutionPair<Scalar>& pair);

/// Exact anchor objective of sdp_hadamard(alpha, beta) when psi0 = 0.
double sdp_joint_objective(const BlockNorms& n, double alpha, double beta);

struct SeparateChoices {
  double alpha_tilde = 1.0;
  double beta_tilde = 1.0;
};

/// alpha~ = sqrt(||Lambda*|| / ||X*||),
/// beta~ = ((||X1||^2 + ||L2||^2) / (||X2||^2 + ||L1||^2))^(1/4).
template <typename Scalar>
SeparateChoices sdp_separate_choices(const SdpSolutionPair<Scalar>& pair);

struct GridSpec {
  double lo = 1e-3;
  double hi = 1e3;
  int points = 200;
  bool refine = true;
};

struct JointChoice {
  double alpha = 1.0;
  double beta = 1.0;
  double objective = 0.0;
};

/// Log-spaced grid search over (alpha, beta), then golden-section refinement
/// in beta with alpha minimized exactly at each beta. The refined point is
/// kept only if it does not lose to the grid winner. Ties on the grid go to
/// the lexicographically smallest (alpha, beta).
JointChoice sdp_joint_search(const BlockNorms& norms, const GridSpec& grid = {});
template <typename Scalar>
JointChoice sdp_joint_search(const SdpSolutionPair<Scalar>& pair, const GridSpec& grid = {});

struct GainReport {
  double xi = 1.0;
  double numerator = 0.0;    // ||S x* + (S*)^-1 lambda* - psi0||^2
  double denominator = 0.0;  // ||x* + lambda* - psi0||^2
};

template <typename Point>
GainReport acceleration_gain(const OperatorParam& s, const SolutionPair<Point>& pair) {
  GainReport g;
  g.numerator = squared_norm(Point(s.apply(pair.x_star) + s.adjoint_inverse(pair.lambda_star) - pair.psi0));
  g.denominator = squared_norm(Point(pair.x_star + pair.lambda_star - pair.psi0));
  if (!(g.denominator > 0.0)) {
    throw std::invalid_argument("acceleration_gain: ||x* + lambda* - psi0|| is zero");
  }
  g.xi = g.numerator / g.denominator;
  return g;
}

/// 2 / (a^2 + a^-2): gain of the separate alpha choice under orthogonality.
double scalar_gain_closed_form(double alpha_tilde);
/// (2 + c) / (b^2 + b^-2 + c) with c = 2(||X0||^2 + ||L0||^2) / sqrt(PQ).
double beta_gain_closed_form(const BlockNorms& n, double beta_tilde);

/// Lambda* = -grad f(x*) + Diag(mu): pass mu empty for an unconstrained linear f.
template <typename Scalar>
DenseHermitian<Scalar> translate_dual(const DenseHermitian<Scalar>& grad_f,
                                      const Eigen::VectorXd& mu = {});

/// mu* = diag(Lambda* + G).
template <typename Scalar>
Eigen::VectorXd extract_diag_multipliers(const DenseHermitian<Scalar>& lambda_star,
                                         const DenseHermitian<Scalar>& g);

enum class BqpRegime { small, large };
std::string to_string(BqpRegime regime);

struct BqpEstimates {
  BqpRegime regime = BqpRegime::small;
  double g_norm = 0.0;
  double alpha_tilde = 1.0;  // separate alpha estimate
  double beta_tilde = 1.0;   // separate beta estimate (small regime only)
  double alpha_joint = 1.0;
  double beta_joint = 1.0;
};

/// Small regime if ||G|| < N (ties go to large). A forced regime overrides
/// the classification.
BqpEstimates bqp_estimates(const Eigen::MatrixXd& a, const RealHermitian& g, Index n,
                           std::optional<BqpRegime> forced = std::nullopt);
/// Joint (small) or alpha-only (large) recommendation as an sdp_hadamard
/// parameter with shape (N, 1).
OperatorParam bqp_estimate(const Eigen::MatrixXd& a, const RealHermitian& g, Index n,
                           std::optional<BqpRegime> forced = std::nullopt);

enum class SrEstimateMode { joint, alpha, beta };
std::string to_string(SrEstimateMode mode);
SrEstimateMode sr_estimate_mode_from_string(const std::string& name);

struct SrEstimate {
  double alpha = 1.0;
  double beta = 1.0;
};

/// joint: (1/sqrt(0.8 (N+1) sigma), sqrt(N/K)); alpha: (1/sqrt((N+1) sigma), 1);
/// beta: (1, sqrt(2N/3)).
SrEstimate sr_estimate_values(Index n, Index k, double sigma, SrEstimateMode mode);
OperatorParam sr_estimate(Index n, Index k, double sigma, SrEstimateMode mode = SrEstimateMode::joint);

}  // namespace proxsplit
