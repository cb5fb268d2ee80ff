#include "proxsplit/apps.hpp"
#include "proxsplit/splitting.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace proxsplit;
using proxsplit::testing::max_abs_diff;

namespace {

template <typename Scalar>
using PsiSequence = std::vector<DenseHermitian<Scalar>>;

template <typename Scalar>
PsiObserver<Scalar> collect(PsiSequence<Scalar>& out) {
  return [&out](const DenseHermitian<Scalar>& psi, const DenseHermitian<Scalar>& next) {
    if (out.empty()) out.push_back(psi);
    out.push_back(next);
  };
}

template <typename Scalar>
StopRule<Scalar> fixed_iterations(long n) {
  StopRule<Scalar> stop;
  stop.max_iters = n;
  stop.tol = 0.0;
  return stop;
}

/// Psi-sequences of all four forms started from matched initial values.
template <typename Scalar>
std::array<PsiSequence<Scalar>, 4> four_sequences(const ProxPair<Scalar>& pair, const OperatorParam& s,
                                                 const DenseHermitian<Scalar>& psi0, long iters) {
  std::array<PsiSequence<Scalar>, 4> seq;
  const auto stop = fixed_iterations<Scalar>(iters);
  const auto init = matched_init(pair, s, psi0);
  run_drs(pair, s, psi0, stop, collect(seq[0]));
  run_admm(pair, s, init.z0, init.lambda0, stop, collect(seq[1]));
  run_pd(pair, s, init.x0, init.lambda_prev, init.lambda0, stop, collect(seq[2]));
  run_pdf(pair, s, psi0, init.lambda0, stop, collect(seq[3]));
  return seq;
}

template <typename Scalar>
double max_sequence_gap(const std::array<PsiSequence<Scalar>, 4>& seq) {
  double gap = 0.0;
  for (int a = 1; a < 4; ++a) {
    REQUIRE(seq[a].size() == seq[0].size());
    for (std::size_t k = 0; k < seq[0].size(); ++k) {
      gap = std::max(gap, max_abs_diff(seq[a][k], seq[0][k]) / (1.0 + frobenius_norm(seq[0][k])));
    }
  }
  return gap;
}

}  // namespace

TEST_CASE("trivial pair is fixed immediately") {
  GaussianSampler rng(1);
  const auto pair = psd_psd_pair<double>(4);
  const auto psi0 = random_psd<double>(4, 2, rng);
  auto stop = fixed_iterations<double>(5);
  const auto result = run_drs(pair, OperatorParam::identity(), psi0, stop);
  REQUIRE(result.trace.size() >= 1);
  CHECK(result.trace.fp_residual_sq[0] <= 1e-24 * squared_norm(psi0));

  stop.tol = 1e-14;
  const auto admm = run_admm(pair, OperatorParam::identity(), RealHermitian::zero(4), RealHermitian::zero(4), stop);
  CHECK(admm.state.k == 1);
  CHECK(admm.trace.converged());
  CHECK(optimality_residual(admm.state) == 0.0);
}

TEST_CASE("four forms produce the same psi sequence") {
  SUBCASE("real BQP instances") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto inst = gen_bqp(4 + trial, 6, 0.5, 1.0, 100 + trial);
      const auto pair = build_prox_pair(inst);
      GaussianSampler rng(trial);
      const auto s = OperatorParam::sdp_hadamard(std::exp(rng.normal()), std::exp(rng.normal()), inst.shape);
      const auto psi0 = random_hermitian<double>(pair.dim, rng);
      CHECK(max_sequence_gap(four_sequences(pair, s, psi0, 20)) < 1e-10);
    }
  }
  SUBCASE("complex SR instances") {
    for (int trial = 0; trial < 3; ++trial) {
      const auto inst = gen_sr(8 + trial, 2, 1.0, 0.7, 200 + trial);
      const auto pair = build_prox_pair(inst);
      GaussianSampler rng(trial);
      const auto s = OperatorParam::sdp_hadamard(std::exp(rng.normal()), std::exp(rng.normal()), inst.shape());
      CHECK(max_sequence_gap(four_sequences(pair, s, ComplexHermitian::zero(pair.dim), 20)) < 1e-10);
    }
  }
}

TEST_CASE("PDF multiplier and PD residual follow the DRS quantities") {
  const auto inst = gen_bqp(5, 7, 0.4, 1.0, 9);
  const auto pair = build_prox_pair(inst);
  const auto s = OperatorParam::sdp_hadamard(0.7, 1.8, inst.shape);
  const auto psi0 = RealHermitian::zero(pair.dim);
  const auto init = matched_init(pair, s, psi0);
  auto stop = fixed_iterations<double>(10);

  const auto drs = run_drs(pair, s, psi0, stop);
  const auto pdf = run_pdf(pair, s, psi0, init.lambda0, stop);
  const auto pd = run_pd(pair, s, init.x0, init.lambda_prev, init.lambda0, stop);
  // lambda^k = S*(psi^k - S Prox_g(psi^k)); the state holds lambda^k with psi^{k+1}.
  CHECK(max_abs_diff(pdf.state.Lambda, drs.state.Lambda) < 1e-10);
  CHECK(max_abs_diff(pdf.state.Z, drs.state.Z) < 1e-10);
  CHECK(max_abs_diff(pd.state.X, drs.state.X) < 1e-10);
  for (std::size_t k = 0; k < drs.trace.size(); ++k) {
    CHECK(std::abs(pd.trace.fp_residual_sq[k] - drs.trace.fp_residual_sq[k]) <
          1e-10 * (1.0 + drs.trace.fp_residual_sq[k]));
  }
}

TEST_CASE("DRS on a BQP instance") {
  const auto inst = gen_bqp(10, 12, 0.3, 1.0, 5);
  const auto pair = build_prox_pair(inst);
  const auto s = OperatorParam::sdp_hadamard(0.8, 1.5, inst.shape);
  StopRule<double> stop;
  stop.tol = 1e-10;
  stop.max_iters = 50000;
  CocoercivityEstimator estimator;
  std::optional<RealHermitian> prev, prev_next;
  const PsiObserver<double> observer = [&](const RealHermitian& psi, const RealHermitian& next) {
    if (prev) estimator.add(*prev, *prev_next, psi, next);
    prev = psi;
    prev_next = next;
  };
  const auto result = run_drs(pair, s, RealHermitian::zero(pair.dim), stop, observer);
  REQUIRE(result.trace.converged());
  CHECK(optimality_residual(result.state) <= 1e-10);
  CHECK(result.trace.opt_residual.front() > 0.0);

  const auto report = rate_check(result.trace, RateBound{1.0});
  CHECK(report.basic_violations == 0);
  CHECK(report.monotone_violations == 0);
  CHECK(report.ok());
  CHECK(report.psi_star_proxied);
  CHECK(estimator.raw_max() <= 1.0 + 1e-9);
  CHECK(estimator.estimate() <= 1.0);

  // KKT structure of the final pair.
  const auto& x = result.state.X;
  const auto& lambda = result.state.Lambda;
  CHECK(std::abs(inner(x, lambda)) < 1e-6 * frobenius_norm(x) * frobenius_norm(lambda));
  CHECK(proxsplit::testing::min_eig(result.state.Z) > -1e-8);
  CHECK(proxsplit::testing::max_eig(lambda) < 1e-8);
}

TEST_CASE("stop rules") {
  const auto inst = gen_bqp(4, 5, 0.3, 1.0, 1);
  const auto pair = build_prox_pair(inst);
  const auto s = OperatorParam::identity();
  const auto psi0 = RealHermitian::zero(pair.dim);

  StopRule<double> stop;
  stop.criterion = StopCriterion::mse;
  CHECK_THROWS_AS(run_drs(pair, s, psi0, stop), std::invalid_argument);

  const auto wrong = RealHermitian::zero(3);
  stop.reference = &wrong;
  CHECK_THROWS_AS(run_drs(pair, s, psi0, stop), std::invalid_argument);

  StopRule<double> capped;
  capped.max_iters = 3;
  capped.tol = 0.0;
  const auto result = run_drs(pair, s, psi0, capped);
  CHECK(result.state.k == 3);
  CHECK(result.trace.reason == StopReason::max_iters);
  CHECK(result.trace.size() == 3);
  CHECK(result.trace.mse.empty());
  for (double t : result.trace.elapsed_ms) CHECK(t == 0.0);

  StopRule<double> guard;
  guard.divergence_norm = 1e-3;
  const auto diverged = run_drs(pair, s, psi0, guard);
  CHECK(diverged.trace.reason == StopReason::diverged);
  CHECK_FALSE(diverged.trace.diagnostic.empty());

  StopRule<double> fp;
  fp.criterion = StopCriterion::fixed_point;
  fp.tol = 1e-6;
  fp.max_iters = 100000;
  const auto fixed = run_drs(pair, s, psi0, fp);
  CHECK(fixed.trace.converged());
  CHECK(std::sqrt(fixed.trace.fp_residual_sq.back()) <= 1e-6);

  CHECK_THROWS_AS(run_drs(ProxPair<double>{}, s, psi0, capped), std::invalid_argument);
}

TEST_CASE("mse trace") {
  const auto inst = gen_bqp(6, 8, 0.3, 1.0, 2);
  const auto pair = build_prox_pair(inst);
  const auto s = OperatorParam::sdp_hadamard(0.8, 1.5, inst.shape);
  const auto ref = reference_solve(pair, s);
  StopRule<double> stop;
  stop.criterion = StopCriterion::mse;
  stop.reference = &ref.X;
  stop.mse_eps = 1e-10;
  stop.max_iters = 100000;
  const auto result = run_drs(pair, s, RealHermitian::zero(pair.dim), stop);
  REQUIRE(result.trace.converged());
  CHECK(result.trace.mse.back() <= 1e-10);
  CHECK(result.trace.mse.size() == result.trace.size());
  // Non-increasing after a burn-in of a tenth of the run.
  const std::size_t burn = result.trace.size() / 10;
  long increases = 0;
  for (std::size_t k = burn + 1; k < result.trace.size(); ++k) {
    if (result.trace.mse[k] > result.trace.mse[k - 1] * (1.0 + 1e-6) + 1e-15) ++increases;
  }
  CHECK(increases <= static_cast<long>(result.trace.size() / 50));
}

TEST_CASE("sharp rate factor") {
  CHECK(sharp_rate_factor(0.99, 20) == doctest::Approx(0.0387).epsilon(0.02));
  CHECK(sharp_rate_factor(0.99, 100) == doctest::Approx(0.0031).epsilon(0.02));
  for (long k : {0L, 1L, 5L, 100L}) CHECK(sharp_rate_factor(1.0, k) == 1.0 / static_cast<double>(k + 1));
  for (long k = 0; k < 200; ++k) CHECK(sharp_rate_factor(0.9, k) <= 1.0 / static_cast<double>(k + 1) + 1e-15);
  CHECK(RateBound{0.99}.a() <= 0.99);
  CHECK_THROWS_AS(sharp_rate_factor(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sharp_rate_factor(1.5, 1), std::invalid_argument);
}

TEST_CASE("rate_check flags planted violations") {
  ConvergenceTrace trace;
  trace.anchor_sq = 1.0;
  trace.fp_residual_sq = {0.9, 0.4, 0.45, 0.1};
  const auto report = rate_check(trace, RateBound{1.0});
  CHECK(report.monotone_violations == 1);
  CHECK(report.first_monotone_violation == 2);
  CHECK(report.basic_violations == 1);
  CHECK(report.first_basic_violation == 2);
  CHECK_FALSE(report.ok());

  trace.fp_residual_sq = {1.0, 0.5, 0.3, 0.2};
  CHECK(rate_check(trace, RateBound{1.0}).ok());
}

TEST_CASE("cocoercivity estimator") {
  GaussianSampler rng(3);
  std::vector<Eigen::VectorXd> orbit_identity, orbit_half;
  Eigen::VectorXd y = Eigen::VectorXd::Random(4);
  for (int i = 0; i < 6; ++i) orbit_identity.push_back(Eigen::VectorXd::Constant(4, 1.0 + i));
  CHECK(estimate_cocoercivity(orbit_identity) == doctest::Approx(1.0));

  CocoercivityEstimator half;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd a(3), b(3);
    for (int j = 0; j < 3; ++j) {
      a(j) = rng.normal();
      b(j) = rng.normal();
    }
    half.add(a, Eigen::VectorXd(a / 2), b, Eigen::VectorXd(b / 2));
  }
  CHECK(half.estimate() == doctest::Approx(0.5));

  CocoercivityEstimator degenerate;
  degenerate.add(y, y, y, y);
  CHECK(degenerate.pairs_skipped() == 1);
  CHECK(degenerate.estimate() > 0.0);

  CocoercivityEstimator grows;
  const Eigen::Vector2d a(1, 0), b(0, 0);
  grows.add(a, Eigen::Vector2d(0.25, 0), b, b);
  const double first = grows.estimate();
  grows.add(a, Eigen::Vector2d(0.75, 0), b, b);
  CHECK(grows.estimate() >= first);
  CHECK_THROWS_AS(estimate_cocoercivity(std::vector<Eigen::VectorXd>{y, y}), std::invalid_argument);
}

TEST_CASE("StopReason names") {
  CHECK(to_string(StopReason::converged) == "converged");
  CHECK(to_string(StopReason::max_iters) == "max_iters");
  CHECK(to_string(StopReason::diverged) == "diverged");
}
