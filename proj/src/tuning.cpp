#include "proxsplit/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace proxsplit {

namespace {

template <typename Point>
void require_zero_init(const SolutionPair<Point>& pair, const char* who) {
  if (squared_norm(pair.psi0) != 0.0) {
    throw std::invalid_argument(std::string(who) + ": closed form assumes psi0 = 0");
  }
}

/// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double golden_section(F&& f, double lo, double hi, int iters = 80) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

template <typename Point>
double optimal_scalar(const SolutionPair<Point>& pair) {
  require_zero_init(pair, "optimal_scalar");
  const double xn = frobenius_norm(pair.x_star);
  if (!(xn > 0.0)) throw std::invalid_argument("optimal_scalar: ||x*|| = 0, the optimum is undefined");
  return std::sqrt(frobenius_norm(pair.lambda_star) / xn);
}

Eigen::VectorXd optimal_diagonal(const VectorSolutionPair& pair, double d_max) {
  require_zero_init(pair, "optimal_diagonal");
  if (!(d_max >= 1.0)) throw std::invalid_argument("optimal_diagonal: d_max must be >= 1");
  if (pair.x_star.size() != pair.lambda_star.size()) {
    throw std::invalid_argument("optimal_diagonal: x* and lambda* differ in length");
  }
  Eigen::VectorXd d(pair.x_star.size());
  for (Index i = 0; i < d.size(); ++i) {
    const double x = pair.x_star(i);
    if (x == 0.0) {
      d(i) = d_max;
    } else {
      d(i) = std::clamp(std::abs(pair.lambda_star(i) / x), 1.0 / d_max, d_max);
    }
  }
  return d;
}

template <typename Scalar>
BlockNorms block_norms(const SdpSolutionPair<Scalar>& pair) {
  if (!pair.shape) throw std::invalid_argument("block_norms: solution pair has no block shape");
  const BlockShape& sh = *pair.shape;
  BlockNorms n;
  n.x1 = pair.x_star.block(sh, 1).squaredNorm();
  n.x0 = pair.x_star.block(sh, 0).squaredNorm();
  n.x2 = pair.x_star.block(sh, 2).squaredNorm();
  n.l1 = pair.lambda_star.block(sh, 1).squaredNorm();
  n.l0 = pair.lambda_star.block(sh, 0).squaredNorm();
  n.l2 = pair.lambda_star.block(sh, 2).squaredNorm();
  return n;
}

double sdp_joint_objective(const BlockNorms& n, double alpha, double beta) {
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  return (a2 / b2) * n.x1 + 2.0 * a2 * n.x0 + a2 * b2 * n.x2 + (b2 / a2) * n.l1 +
         (2.0 / a2) * n.l0 + n.l2 / (a2 * b2);
}

template <typename Scalar>
SeparateChoices sdp_separate_choices(const SdpSolutionPair<Scalar>& pair) {
  require_zero_init(pair, "sdp_separate_choices");
  const BlockNorms n = block_norms(pair);
  const double xn = frobenius_norm(pair.x_star);
  const double ln = frobenius_norm(pair.lambda_star);
  const double num = n.x1 + n.l2;
  const double den = n.x2 + n.l1;
  if (!(xn > 0.0) || !(ln > 0.0)) {
    throw std::invalid_argument("sdp_separate_choices: ||X*|| and ||Lambda*|| must be nonzero");
  }
  if (!(num > 0.0) || !(den > 0.0)) {
    throw std::invalid_argument("sdp_separate_choices: zero block energy in the beta ratio");
  }
  return {std::sqrt(ln / xn), std::pow(num / den, 0.25)};
}

JointChoice sdp_joint_search(const BlockNorms& norms, const GridSpec& grid) {
  if (grid.points < 2 || !(grid.lo > 0.0) || !(grid.hi > grid.lo)) {
    throw std::invalid_argument("sdp_joint_search: grid must have >= 2 points on 0 < lo < hi");
  }
  const int p = grid.points;
  const double llo = std::log(grid.lo);
  const double step = (std::log(grid.hi) - llo) / (p - 1);
  std::vector<double> values(p);
  for (int i = 0; i < p; ++i) values[i] = std::exp(llo + step * i);

  int best_i = 0, best_j = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const double v = sdp_joint_objective(norms, values[i], values[j]);
      if (v < best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  JointChoice out{values[best_i], values[best_j], best};
  if (!grid.refine) return out;

  // For fixed beta the alpha coordinate is minimized in closed form:
  // f = alpha^2 A(beta) + B(beta) / alpha^2 gives alpha^4 = B / A, clamped to the
  // grid range. The profile over log beta is convex, so golden section over the
  // whole range finds its minimum without zig-zagging along a narrow valley.
  const double lhi = std::log(grid.hi);
  auto best_log_alpha = [&](double lb) {
    const double b2 = std::exp(2.0 * lb);
    const double a_coef = norms.x1 / b2 + 2.0 * norms.x0 + b2 * norms.x2;
    const double b_coef = b2 * norms.l1 + 2.0 * norms.l0 + norms.l2 / b2;
    if (!(a_coef > 0.0)) return llo;
    if (!(b_coef > 0.0)) return lhi;
    return std::clamp(0.25 * (std::log(b_coef) - std::log(a_coef)), llo, lhi);
  };
  const double lb = golden_section(
      [&](double t) { return sdp_joint_objective(norms, std::exp(best_log_alpha(t)), std::exp(t)); }, llo, lhi);
  const double la = best_log_alpha(lb);
  const double refined = sdp_joint_objective(norms, std::exp(la), std::exp(lb));
  if (refined <= best) out = {std::exp(la), std::exp(lb), refined};
  return out;
}

template <typename Scalar>
JointChoice sdp_joint_search(const SdpSolutionPair<Scalar>& pair, const GridSpec& grid) {
  require_zero_init(pair, "sdp_joint_search");
  return sdp_joint_search(block_norms(pair), grid);
}

double scalar_gain_closed_form(double alpha_tilde) {
  const double a2 = alpha_tilde * alpha_tilde;
  return 2.0 / (a2 + 1.0 / a2);
}

double beta_gain_closed_form(const BlockNorms& n, double beta_tilde) {
  const double p = n.x1 + n.l2;
  const double q = n.x2 + n.l1;
  const double c = 2.0 * (n.x0 + n.l0) / std::sqrt(p * q);
  const double b2 = beta_tilde * beta_tilde;
  return (2.0 + c) / (b2 + 1.0 / b2 + c);
}

template <typename Scalar>
DenseHermitian<Scalar> translate_dual(const DenseHermitian<Scalar>& grad_f, const Eigen::VectorXd& mu) {
  MatrixX<Scalar> out = -grad_f.matrix();
  if (mu.size() != 0) {
    if (mu.size() != grad_f.dim()) {
      throw std::invalid_argument("translate_dual: multiplier length does not match the dimension");
    }
    for (Index i = 0; i < mu.size(); ++i) out(i, i) += mu(i);
  }
  return DenseHermitian<Scalar>(out);
}

template <typename Scalar>
Eigen::VectorXd extract_diag_multipliers(const DenseHermitian<Scalar>& lambda_star,
                                         const DenseHermitian<Scalar>& g) {
  if (lambda_star.dim() != g.dim()) {
    throw std::invalid_argument("extract_diag_multipliers: dimension mismatch");
  }
  return (lambda_star + g).matrix().diagonal().real();
}

std::string to_string(BqpRegime regime) {
  return regime == BqpRegime::small ? "small" : "large";
}

BqpEstimates bqp_estimates(const Eigen::MatrixXd& a, const RealHermitian& g, Index n,
                           std::optional<BqpRegime> forced) {
  if (a.cols() != n || g.dim() != n + 1) {
    throw std::invalid_argument("bqp_estimates: A must have N columns and G must be (N+1)x(N+1)");
  }
  BqpEstimates e;
  e.g_norm = frobenius_norm(g);
  const double nd = static_cast<double>(n);
  e.regime = forced.value_or(e.g_norm < nd ? BqpRegime::small : BqpRegime::large);
  e.alpha_tilde = std::sqrt(e.g_norm / (nd + 1.0));
  if (e.regime == BqpRegime::small) {
    const double ata = (a.transpose() * a).squaredNorm();
    e.beta_tilde = std::pow(nd * nd / (1.0 + ata), 0.25);
    e.alpha_joint = std::sqrt(2.0) * e.alpha_tilde;
    e.beta_joint = e.beta_tilde / std::sqrt(2.0);
  } else {
    e.beta_tilde = 1.0;
    e.alpha_joint = e.alpha_tilde;
    e.beta_joint = 1.0;
  }
  return e;
}

OperatorParam bqp_estimate(const Eigen::MatrixXd& a, const RealHermitian& g, Index n,
                           std::optional<BqpRegime> forced) {
  const BqpEstimates e = bqp_estimates(a, g, n, forced);
  return OperatorParam::sdp_hadamard(e.alpha_joint, e.beta_joint, BlockShape(n, 1));
}

std::string to_string(SrEstimateMode mode) {
  switch (mode) {
    case SrEstimateMode::joint: return "joint";
    case SrEstimateMode::alpha: return "alpha";
    case SrEstimateMode::beta: return "beta";
  }
  return "unknown";
}

SrEstimateMode sr_estimate_mode_from_string(const std::string& name) {
  if (name == "joint") return SrEstimateMode::joint;
  if (name == "alpha") return SrEstimateMode::alpha;
  if (name == "beta") return SrEstimateMode::beta;
  throw std::invalid_argument("unknown estimate mode '" + name + "' (expected joint, alpha or beta)");
}

SrEstimate sr_estimate_values(Index n, Index k, double sigma, SrEstimateMode mode) {
  if (n < 1 || k < 1 || !(sigma > 0.0)) {
    throw std::invalid_argument("sr_estimate: need N >= 1, K >= 1 and sigma > 0");
  }
  const double nd = static_cast<double>(n);
  switch (mode) {
    case SrEstimateMode::joint:
      return {1.0 / std::sqrt(0.8 * (nd + 1.0) * sigma), std::sqrt(nd / static_cast<double>(k))};
    case SrEstimateMode::alpha: return {1.0 / std::sqrt((nd + 1.0) * sigma), 1.0};
    case SrEstimateMode::beta: return {1.0, std::sqrt(2.0 * nd / 3.0)};
  }
  return {};
}

OperatorParam sr_estimate(Index n, Index k, double sigma, SrEstimateMode mode) {
  const SrEstimate e = sr_estimate_values(n, k, sigma, mode);
  return OperatorParam::sdp_hadamard(e.alpha, e.beta, BlockShape(n, 1));
}

template double optimal_scalar<Eigen::VectorXd>(const SolutionPair<Eigen::VectorXd>&);
template double optimal_scalar<RealHermitian>(const SolutionPair<RealHermitian>&);
template double optimal_scalar<ComplexHermitian>(const SolutionPair<ComplexHermitian>&);

#define PROXSPLIT_INSTANTIATE(S)                                                               \
  template BlockNorms block_norms<S>(const SdpSolutionPair<S>&);                               \
  template SeparateChoices sdp_separate_choices<S>(const SdpSolutionPair<S>&);                 \
  template JointChoice sdp_joint_search<S>(const SdpSolutionPair<S>&, const GridSpec&);        \
  template DenseHermitian<S> translate_dual<S>(const DenseHermitian<S>&, const Eigen::VectorXd&); \
  template Eigen::VectorXd extract_diag_multipliers<S>(const DenseHermitian<S>&,               \
                                                       const DenseHermitian<S>&);

PROXSPLIT_INSTANTIATE(double)
PROXSPLIT_INSTANTIATE(Complex)

#undef PROXSPLIT_INSTANTIATE

}  // namespace proxsplit
