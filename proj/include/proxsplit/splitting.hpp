#pragma once

// Douglas-Rachford type iterations driven by a ProxPair and an operator
// parameter S, in four equivalent forms: ADMM, 2-point DRS, primal-dual (PD)
// and primal-dual fixed-point (PDF). Every runner reports the same
// fixed-point sequence psi^{k+1} = S x^{k+1} + (S*)^-1 lambda^k.

#include "proxsplit/numerics.hpp"
#include "proxsplit/params.hpp"
#include "proxsplit/prox.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxsplit {

enum class StopCriterion { optimality, fixed_point, mse };
enum class StopReason { converged, max_iters, diverged };

std::string to_string(StopReason reason);

template <typename Scalar>
struct StopRule {
  long max_iters = 10000;
  /// Threshold for the optimality (||x^{k+1} - z^k||) or fixed-point
  /// (||psi^{k+1} - psi^k||) criterion.
  double tol = 1e-8;
  StopCriterion criterion = StopCriterion::optimality;
  /// Reference X for MSE tracking; required when criterion == mse.
  const DenseHermitian<Scalar>* reference = nullptr;
  double mse_eps = 1e-6;
  bool record_timing = false;
  /// Abort once any iterate norm exceeds this.
  double divergence_norm = 1e12;
};

/// One iteration's quadruple: X = x^{k+1}, Z = z^k, Lambda = lambda^k,
/// Psi = psi^{k+1}, k = iterations completed.
template <typename Scalar>
struct SplitState {
  DenseHermitian<Scalar> X;
  DenseHermitian<Scalar> Z;
  DenseHermitian<Scalar> Lambda;
  DenseHermitian<Scalar> Psi;
  long k = 0;
};

struct ConvergenceTrace {
  std::vector<double> fp_residual_sq;  // ||psi^{k+1} - psi^k||^2
  std::vector<double> opt_residual;    // ||x^{k+1} - z^k||
  std::vector<double> mse;             // empty unless a reference was given
  std::vector<double> elapsed_ms;      // zeros unless timing was requested
  /// ||psi_final - psi^0||^2, the proxied rate anchor.
  double anchor_sq = 0.0;
  StopReason reason = StopReason::max_iters;
  std::string diagnostic;

  std::size_t size() const { return fp_residual_sq.size(); }
  bool converged() const { return reason == StopReason::converged; }
};

template <typename Scalar>
struct SplitResult {
  SplitState<Scalar> state;
  ConvergenceTrace trace;
};

/// Called after each iteration with (psi^k, psi^{k+1}).
template <typename Scalar>
using PsiObserver = std::function<void(const DenseHermitian<Scalar>&, const DenseHermitian<Scalar>&)>;

/// Algorithm 2: y = Prox_g(psi); psi' = S Prox_f(2 S y - psi) + psi - S y.
template <typename Scalar>
SplitResult<Scalar> run_drs(const ProxPair<Scalar>& pair, const OperatorParam& s,
                            const DenseHermitian<Scalar>& psi0, const StopRule<Scalar>& stop,
                            const PsiObserver<Scalar>& observer = {});

/// Algorithm 1 with arbitrary (z0, lambda0).
template <typename Scalar>
SplitResult<Scalar> run_admm(const ProxPair<Scalar>& pair, const OperatorParam& s,
                             const DenseHermitian<Scalar>& z0, const DenseHermitian<Scalar>& lambda0,
                             const StopRule<Scalar>& stop, const PsiObserver<Scalar>& observer = {});

/// Algorithm 3 with arbitrary (x0, lambda^{-1}, lambda0).
template <typename Scalar>
SplitResult<Scalar> run_pd(const ProxPair<Scalar>& pair, const OperatorParam& s,
                           const DenseHermitian<Scalar>& x0, const DenseHermitian<Scalar>& lambda_prev,
                           const DenseHermitian<Scalar>& lambda0, const StopRule<Scalar>& stop,
                           const PsiObserver<Scalar>& observer = {});

/// Algorithm 4 with arbitrary (psi0, lambda0).
template <typename Scalar>
SplitResult<Scalar> run_pdf(const ProxPair<Scalar>& pair, const OperatorParam& s,
                            const DenseHermitian<Scalar>& psi0, const DenseHermitian<Scalar>& lambda0,
                            const StopRule<Scalar>& stop, const PsiObserver<Scalar>& observer = {});

/// Initial values that make ADMM, PD and PDF reproduce the DRS sequence
/// started from psi0.
template <typename Scalar>
struct MatchedInit {
  DenseHermitian<Scalar> z0;           // Prox_g(psi0)
  DenseHermitian<Scalar> lambda0;      // S*(psi0 - S z0)
  DenseHermitian<Scalar> x0;           // zero
  DenseHermitian<Scalar> lambda_prev;  // S*(psi0 - S x0)
};

template <typename Scalar>
MatchedInit<Scalar> matched_init(const ProxPair<Scalar>& pair, const OperatorParam& s,
                                 const DenseHermitian<Scalar>& psi0);

/// ||X^{k+1} - Z^k||.
template <typename Scalar>
double optimality_residual(const SplitState<Scalar>& state);

/// a^k (1 - a) / (1 - a^{k+1}) with a = L / (2 - L); 1/(k+1) when L = 1.
double sharp_rate_factor(double L, long k);

struct RateBound {
  double L = 1.0;
  double a() const { return L / (2.0 - L); }
};

struct RateReport {
  /// Basic bound ||psi^{k+1}-psi^k||^2 <= anchor/(k+1).
  long basic_violations = 0;
  std::optional<long> first_basic_violation;
  /// Sharp bound with the supplied L.
  long sharp_violations = 0;
  std::optional<long> first_sharp_violation;
  /// Increases of the fixed-point residual.
  long monotone_violations = 0;
  std::optional<long> first_monotone_violation;
  double anchor_sq = 0.0;
  double L = 1.0;
  /// The fixed point is replaced by the final iterate of the trace.
  bool psi_star_proxied = true;

  bool ok() const { return basic_violations == 0 && monotone_violations == 0; }
};

/// Checks the basic and sharp rate bounds and residual monotonicity at every
/// recorded iteration. Slack is relative 1e-9 on each bound plus an absolute
/// floor of 1e-12 * anchor for round-off near convergence.
RateReport rate_check(const ConvergenceTrace& trace, const RateBound& bound);

/// Empirical cocoercivity constant max ||F y1 - F y2||^2 / <F y1 - F y2, y1 - y2>,
/// clamped to (0, 1]. Degenerate pairs are skipped.
class CocoercivityEstimator {
 public:
  static constexpr double kFloor = 1e-12;

  template <typename Point>
  void add(const Point& y1, const Point& fy1, const Point& y2, const Point& fy2) {
    const Point dy = y1 - y2;
    const Point df = fy1 - fy2;
    const double den = inner(df, dy);
    const double num = squared_norm(df);
    if (squared_norm(dy) == 0.0 || den <= 0.0) {
      ++skipped_;
      return;
    }
    raw_max_ = std::max(raw_max_, num / den);
    ++used_;
  }

  double estimate() const { return std::clamp(raw_max_, kFloor, 1.0); }
  double raw_max() const { return raw_max_; }
  long pairs_used() const { return used_; }
  long pairs_skipped() const { return skipped_; }

 private:
  double raw_max_ = 0.0;
  long used_ = 0;
  long skipped_ = 0;
};

/// Estimate from a stored sequence y_0, y_1 = F y_0, y_2 = F y_1, ...
/// using consecutive pairs (y_k, y_{k+1}).
template <typename Point>
double estimate_cocoercivity(const std::vector<Point>& orbit) {
  if (orbit.size() < 3) {
    throw std::invalid_argument("estimate_cocoercivity: need at least two map evaluations");
  }
  CocoercivityEstimator est;
  for (std::size_t i = 0; i + 2 < orbit.size(); ++i) {
    est.add(orbit[i], orbit[i + 1], orbit[i + 1], orbit[i + 2]);
  }
  return est.estimate();
}

}  // namespace proxsplit
