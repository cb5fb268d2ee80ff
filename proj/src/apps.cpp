#include "proxsplit/apps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace proxsplit {

RealHermitian bqp_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("bqp_objective: A has " + std::to_string(a.rows()) +
                                " rows but b has " + std::to_string(b.size()) + " entries");
  }
  const Index n = a.cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + 1, n + 1);
  g.topLeftCorner(n, n) = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * b;
  g.topRightCorner(n, 1) = -atb;
  g.bottomLeftCorner(1, n) = -atb.transpose();
  return RealHermitian(g);
}

BqpInstance gen_bqp(Index n, Index k, double sigma_a, double sigma_b, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("gen_bqp: N and K must be >= 1");
  if (!(sigma_a > 0.0) || !(sigma_b > 0.0)) {
    throw std::invalid_argument("gen_bqp: sigma_A and sigma_b must be positive");
  }
  GaussianSampler rng(seed);
  BqpInstance inst;
  inst.A = rng.matrix(k, n, sigma_a);
  inst.b = rng.matrix(k, 1, sigma_b);
  inst.G = bqp_objective(inst.A, inst.b);
  inst.shape = BlockShape(n, 1);
  inst.sigma_a = sigma_a;
  inst.sigma_b = sigma_b;
  inst.seed = seed;
  return inst;
}

FixedEntrySet SrInstance::observed() const {
  FixedEntrySet set;
  set.indices = omega;
  set.values.reserve(omega.size());
  for (Index j : omega) set.values.push_back(x_star(j));
  return set;
}

double SrInstance::amplitude_l1() const {
  return std::accumulate(amplitudes.begin(), amplitudes.end(), 0.0,
                         [](double acc, double c) { return acc + std::abs(c); });
}

double SrInstance::mean_magnitude() const {
  return amplitude_l1() / static_cast<double>(K);
}

Eigen::VectorXcd sr_measurements(const std::vector<double>& taus,
                                 const std::vector<double>& amplitudes, Index n) {
  if (taus.size() != amplitudes.size()) {
    throw std::invalid_argument("sr_measurements: locations and amplitudes differ in count");
  }
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    for (Index m = 0; m < n; ++m) {
      x(m) += amplitudes[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) * taus[k]);
    }
  }
  return x;
}

double min_wraparound_separation(const std::vector<double>& taus) {
  double best = 1.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = i + 1; j < taus.size(); ++j) {
      const double d = std::abs(taus[i] - taus[j]);
      best = std::min(best, std::min(d, 1.0 - d));
    }
  }
  return best;
}

SrInstance gen_sr(Index n, Index k, double sigma, double obs_frac, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("gen_sr: N and K must be >= 1");
  if (static_cast<double>(k) / static_cast<double>(n) >= 1.0) {
    throw std::invalid_argument("gen_sr: K/N must be < 1 for a 1/N separation to be feasible");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("gen_sr: sigma must be positive");
  if (!(obs_frac > 0.0) || obs_frac > 1.0) throw std::invalid_argument("gen_sr: obs_frac must lie in (0, 1]");

  GaussianSampler rng(seed);
  const double min_sep = 1.0 / static_cast<double>(n);
  constexpr int kMaxAttempts = 100000;

  SrInstance inst;
  bool placed = false;
  for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
    inst.taus.clear();
    for (Index i = 0; i < k; ++i) inst.taus.push_back(rng.uniform01());
    placed = k == 1 || min_wraparound_separation(inst.taus) >= min_sep;
  }
  if (!placed) {
    throw std::invalid_argument("gen_sr: could not place " + std::to_string(k) +
                                " locations with separation 1/" + std::to_string(n) + " in " +
                                std::to_string(kMaxAttempts) + " attempts");
  }
  for (Index i = 0; i < k; ++i) inst.amplitudes.push_back(rng.normal(sigma));

  const Index m = std::max<Index>(1, static_cast<Index>(std::llround(obs_frac * static_cast<double>(n))));
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  // Partial Fisher-Yates: the first m entries become a uniform sample.
  for (Index i = 0; i < m; ++i) {
    const Index j = i + rng.uniform_index(n - i);
    std::swap(all[i], all[j]);
  }
  inst.omega.assign(all.begin(), all.begin() + m);
  std::sort(inst.omega.begin(), inst.omega.end());

  inst.N = n;
  inst.K = k;
  inst.x_star = sr_measurements(inst.taus, inst.amplitudes, n);
  MatrixX<Complex> g = MatrixX<Complex>::Zero(n + 1, n + 1);
  g.diagonal().head(n).setConstant(1.0 / (2.0 * static_cast<double>(n)));
  g(n, n) = 0.5;
  inst.G = ComplexHermitian(g);
  inst.sigma = sigma;
  inst.obs_frac = obs_frac;
  inst.seed = seed;
  return inst;
}

Eigen::VectorXcd sr_true_u(const SrInstance& inst) {
  std::vector<double> mags(inst.amplitudes.size());
  std::transform(inst.amplitudes.begin(), inst.amplitudes.end(), mags.begin(),
                 [](double c) { return std::abs(c); });
  Eigen::VectorXcd u = sr_measurements(inst.taus, mags, inst.N);
  u(0) = Complex(u(0).real(), 0.0);
  return u;
}

ComplexHermitian sr_atomic_solution(const SrInstance& inst) {
  const Index n = inst.N;
  MatrixX<Complex> x(n + 1, n + 1);
  x.topLeftCorner(n, n) = toeplitz_map<Complex>(sr_true_u(inst)).matrix();
  x.topRightCorner(n, 1) = inst.x_star;
  x.bottomLeftCorner(1, n) = inst.x_star.adjoint();
  x(n, n) = inst.amplitude_l1();
  return ComplexHermitian(x);
}

ProxPair<double> build_prox_pair(const BqpInstance& inst) {
  ProxPair<double> pair;
  const RealHermitian g = inst.G;
  pair.f_prox = [g](const OperatorParam& s, const RealHermitian& v) {
    return prox_linear_diag1(g, s, v);
  };
  pair.g_prox = [](const OperatorParam& s, const RealHermitian& v) { return prox_psd_indicator(s, v); };
  pair.g_conj_prox = [](const OperatorParam& s, const RealHermitian& v) {
    return prox_psd_conjugate(s, v);
  };
  pair.objective = g;
  pair.constraint = ConstraintKind::diagonal_ones;
  pair.dim = g.dim();
  return pair;
}

ProxPair<Complex> build_prox_pair(const SrInstance& inst) {
  ProxPair<Complex> pair;
  const ComplexHermitian g = inst.G;
  const FixedEntrySet observed = inst.observed();
  pair.f_prox = [g, observed](const OperatorParam& s, const ComplexHermitian& v) {
    return prox_linear_sr(g, observed, s, v);
  };
  pair.g_prox = [](const OperatorParam& s, const ComplexHermitian& v) {
    return prox_psd_indicator(s, v);
  };
  pair.g_conj_prox = [](const OperatorParam& s, const ComplexHermitian& v) {
    return prox_psd_conjugate(s, v);
  };
  pair.objective = g;
  pair.constraint = ConstraintKind::toeplitz_fixed_entries;
  pair.dim = g.dim();
  return pair;
}

template <typename Scalar>
ReferenceSolution<Scalar> reference_solve(const ProxPair<Scalar>& pair, const OperatorParam& s,
                                          double tol, long max_iters) {
  StopRule<Scalar> stop;
  stop.max_iters = max_iters;
  stop.tol = tol;
  stop.criterion = StopCriterion::optimality;
  const auto psi0 = DenseHermitian<Scalar>::zero(pair.dim);
  auto run = run_drs(pair, s, psi0, stop);
  if (run.trace.reason == StopReason::diverged) {
    throw std::runtime_error("reference_solve: " + run.trace.diagnostic);
  }
  ReferenceSolution<Scalar> ref;
  ref.X = std::move(run.state.X);
  ref.Lambda = std::move(run.state.Lambda);
  ref.Psi = std::move(run.state.Psi);
  ref.iterations = run.state.k;
  ref.opt_residual = run.trace.opt_residual.empty() ? 0.0 : run.trace.opt_residual.back();
  ref.converged = run.trace.converged();
  return ref;
}

template <typename Scalar>
double mse(const DenseHermitian<Scalar>& x, const DenseHermitian<Scalar>& x_ref) {
  if (x.dim() != x_ref.dim()) throw std::invalid_argument("mse: dimension mismatch");
  const double n = static_cast<double>(x.dim());
  return squared_norm(x - x_ref) / (n * n);
}

template ReferenceSolution<double> reference_solve<double>(const ProxPair<double>&, const OperatorParam&,
                                                           double, long);
template ReferenceSolution<Complex> reference_solve<Complex>(const ProxPair<Complex>&,
                                                             const OperatorParam&, double, long);
template double mse<double>(const RealHermitian&, const RealHermitian&);
template double mse<Complex>(const ComplexHermitian&, const ComplexHermitian&);

}  // namespace proxsplit
