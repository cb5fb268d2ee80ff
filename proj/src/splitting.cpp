#include "proxsplit/splitting.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace proxsplit {

namespace {

template <typename Scalar>
class Recorder {
 public:
  using Matrix = DenseHermitian<Scalar>;

  Recorder(const StopRule<Scalar>& stop, const Matrix& psi0, const PsiObserver<Scalar>& observer)
      : stop_(stop), psi0_(psi0), observer_(observer), start_(std::chrono::steady_clock::now()) {
    if (stop.max_iters < 0) throw std::invalid_argument("StopRule: max_iters must be >= 0");
    if (stop.criterion == StopCriterion::mse && stop.reference == nullptr) {
      throw std::invalid_argument("StopRule: the mse criterion needs a reference solution");
    }
    if (stop.reference != nullptr && stop.reference->dim() != psi0.dim()) {
      throw std::invalid_argument("StopRule: reference dimension does not match the iterates");
    }
    if (!std::isfinite(frobenius_norm(psi0))) {
      throw std::invalid_argument("splitting: initial point has non-finite entries");
    }
    result_.state.Psi = psi0;
    result_.state.X = Matrix::zero(psi0.dim());
    result_.state.Z = Matrix::zero(psi0.dim());
    result_.state.Lambda = Matrix::zero(psi0.dim());
  }

  bool exhausted() const { return result_.state.k >= stop_.max_iters; }

  /// Stores iteration k -> k+1. Returns true when the run should stop.
  bool record(const Matrix& x, const Matrix& z, const Matrix& lambda, const Matrix& psi,
              const Matrix& psi_next) {
    auto& tr = result_.trace;
    const double psi_norm = frobenius_norm(psi_next);
    const double x_norm = frobenius_norm(x);
    if (!(psi_norm <= stop_.divergence_norm) || !(x_norm <= stop_.divergence_norm)) {
      std::ostringstream os;
      os << "iterate norm exceeded " << stop_.divergence_norm << " or became non-finite at k="
         << result_.state.k << " (||psi||=" << psi_norm << ", ||x||=" << x_norm << ")";
      tr.reason = StopReason::diverged;
      tr.diagnostic = os.str();
      finish();
      return true;
    }

    const double fp = squared_norm(psi_next - psi);
    const double opt = frobenius_norm(x - z);
    tr.fp_residual_sq.push_back(fp);
    tr.opt_residual.push_back(opt);
    double mse_value = 0.0;
    if (stop_.reference != nullptr) {
      const double n = static_cast<double>(x.dim());
      mse_value = squared_norm(x - *stop_.reference) / (n * n);
      tr.mse.push_back(mse_value);
    }
    tr.elapsed_ms.push_back(
        stop_.record_timing
            ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count()
            : 0.0);

    auto& st = result_.state;
    st.X = x;
    st.Z = z;
    st.Lambda = lambda;
    st.Psi = psi_next;
    ++st.k;
    if (observer_) observer_(psi, psi_next);

    bool done = false;
    switch (stop_.criterion) {
      case StopCriterion::optimality: done = opt <= stop_.tol; break;
      case StopCriterion::fixed_point: done = std::sqrt(fp) <= stop_.tol; break;
      case StopCriterion::mse: done = mse_value <= stop_.mse_eps; break;
    }
    if (done) {
      tr.reason = StopReason::converged;
      finish();
      return true;
    }
    if (exhausted()) {
      tr.reason = StopReason::max_iters;
      finish();
      return true;
    }
    return false;
  }

  SplitResult<Scalar> take() {
    if (result_.state.k == 0 && result_.trace.reason != StopReason::diverged) finish();
    return std::move(result_);
  }

 private:
  void finish() { result_.trace.anchor_sq = squared_norm(result_.state.Psi - psi0_); }

  const StopRule<Scalar>& stop_;
  Matrix psi0_;
  const PsiObserver<Scalar>& observer_;
  std::chrono::steady_clock::time_point start_;
  SplitResult<Scalar> result_;
};

template <typename Scalar>
void require_pair(const ProxPair<Scalar>& pair, bool need_conj) {
  if (!pair.f_prox || !pair.g_prox || (need_conj && !pair.g_conj_prox)) {
    throw std::invalid_argument("splitting: ProxPair is missing an evaluator");
  }
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged: return "converged";
    case StopReason::max_iters: return "max_iters";
    case StopReason::diverged: return "diverged";
  }
  return "unknown";
}

template <typename Scalar>
SplitResult<Scalar> run_drs(const ProxPair<Scalar>& pair, const OperatorParam& s,
                            const DenseHermitian<Scalar>& psi0, const StopRule<Scalar>& stop,
                            const PsiObserver<Scalar>& observer) {
  require_pair(pair, false);
  Recorder<Scalar> rec(stop, psi0, observer);
  DenseHermitian<Scalar> psi = psi0;
  while (!rec.exhausted()) {
    const auto y = pair.g_prox(s, psi);
    const auto sy = s.apply(y);
    const auto x = pair.f_prox(s, 2.0 * sy - psi);
    auto psi_next = s.apply(x) + psi - sy;
    const auto lambda = s.adjoint(psi - sy);
    if (rec.record(x, y, lambda, psi, psi_next)) break;
    psi = std::move(psi_next);
  }
  return rec.take();
}

template <typename Scalar>
SplitResult<Scalar> run_admm(const ProxPair<Scalar>& pair, const OperatorParam& s,
                             const DenseHermitian<Scalar>& z0, const DenseHermitian<Scalar>& lambda0,
                             const StopRule<Scalar>& stop, const PsiObserver<Scalar>& observer) {
  require_pair(pair, false);
  DenseHermitian<Scalar> z = z0;
  DenseHermitian<Scalar> lambda = lambda0;
  DenseHermitian<Scalar> psi = s.apply(z) + s.adjoint_inverse(lambda);
  Recorder<Scalar> rec(stop, psi, observer);
  const OperatorParam gram = s.gram_param();
  while (!rec.exhausted()) {
    const auto x = pair.f_prox(s, s.apply(z) - s.adjoint_inverse(lambda));
    auto psi_next = s.apply(x) + s.adjoint_inverse(lambda);
    if (rec.record(x, z, lambda, psi, psi_next)) break;
    auto z_next = pair.g_prox(s, s.apply(x) + s.adjoint_inverse(lambda));
    lambda += gram.apply(x - z_next);
    z = std::move(z_next);
    psi = std::move(psi_next);
  }
  return rec.take();
}

template <typename Scalar>
SplitResult<Scalar> run_pd(const ProxPair<Scalar>& pair, const OperatorParam& s,
                           const DenseHermitian<Scalar>& x0, const DenseHermitian<Scalar>& lambda_prev0,
                           const DenseHermitian<Scalar>& lambda0, const StopRule<Scalar>& stop,
                           const PsiObserver<Scalar>& observer) {
  require_pair(pair, true);
  DenseHermitian<Scalar> x = x0;
  DenseHermitian<Scalar> lambda_prev = lambda_prev0;
  DenseHermitian<Scalar> lambda = lambda0;
  DenseHermitian<Scalar> psi = s.apply(x) + s.adjoint_inverse(lambda_prev);
  Recorder<Scalar> rec(stop, psi, observer);
  while (!rec.exhausted()) {
    auto x_next = pair.f_prox(s, s.apply(x) + s.adjoint_inverse(lambda_prev - 2.0 * lambda));
    auto psi_next = s.apply(x_next) + s.adjoint_inverse(lambda);
    const auto z = s.inverse(psi - s.adjoint_inverse(lambda));
    if (rec.record(x_next, z, lambda, psi, psi_next)) break;
    auto lambda_next = pair.g_conj_prox(s, s.apply(x_next) + s.adjoint_inverse(lambda));
    lambda_prev = std::move(lambda);
    lambda = std::move(lambda_next);
    x = std::move(x_next);
    psi = std::move(psi_next);
  }
  return rec.take();
}

template <typename Scalar>
SplitResult<Scalar> run_pdf(const ProxPair<Scalar>& pair, const OperatorParam& s,
                            const DenseHermitian<Scalar>& psi0, const DenseHermitian<Scalar>& lambda0,
                            const StopRule<Scalar>& stop, const PsiObserver<Scalar>& observer) {
  require_pair(pair, false);
  DenseHermitian<Scalar> psi = psi0;
  DenseHermitian<Scalar> lambda = lambda0;
  Recorder<Scalar> rec(stop, psi0, observer);
  while (!rec.exhausted()) {
    const auto x = pair.f_prox(s, psi - 2.0 * s.adjoint_inverse(lambda));
    auto psi_next = s.apply(x) + s.adjoint_inverse(lambda);
    const auto z = s.inverse(psi - s.adjoint_inverse(lambda));
    if (rec.record(x, z, lambda, psi, psi_next)) break;
    lambda = s.adjoint(psi_next - s.apply(pair.g_prox(s, psi_next)));
    psi = std::move(psi_next);
  }
  return rec.take();
}

template <typename Scalar>
MatchedInit<Scalar> matched_init(const ProxPair<Scalar>& pair, const OperatorParam& s,
                                 const DenseHermitian<Scalar>& psi0) {
  require_pair(pair, false);
  MatchedInit<Scalar> init;
  init.z0 = pair.g_prox(s, psi0);
  init.lambda0 = s.adjoint(psi0 - s.apply(init.z0));
  init.x0 = DenseHermitian<Scalar>::zero(psi0.dim());
  init.lambda_prev = s.adjoint(psi0 - s.apply(init.x0));
  return init;
}

template <typename Scalar>
double optimality_residual(const SplitState<Scalar>& state) {
  return frobenius_norm(state.X - state.Z);
}

double sharp_rate_factor(double L, long k) {
  if (!(L > 0.0) || L > 1.0) throw std::invalid_argument("sharp_rate_factor: L must lie in (0, 1]");
  if (k < 0) throw std::invalid_argument("sharp_rate_factor: k must be >= 0");
  const double a = L / (2.0 - L);
  if (a == 1.0) return 1.0 / static_cast<double>(k + 1);
  return std::pow(a, static_cast<double>(k)) * (1.0 - a) /
         (1.0 - std::pow(a, static_cast<double>(k + 1)));
}

RateReport rate_check(const ConvergenceTrace& trace, const RateBound& bound) {
  if (!(bound.L > 0.0) || bound.L > 1.0) {
    throw std::invalid_argument("rate_check: L must lie in (0, 1]");
  }
  RateReport rep;
  rep.anchor_sq = trace.anchor_sq;
  rep.L = bound.L;
  const double floor = 1e-12 * trace.anchor_sq;
  const auto& r = trace.fp_residual_sq;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const long k = static_cast<long>(i);
    const double basic = trace.anchor_sq / static_cast<double>(k + 1);
    if (r[i] > basic * (1.0 + 1e-9) + floor) {
      if (!rep.first_basic_violation) rep.first_basic_violation = k;
      ++rep.basic_violations;
    }
    const double sharp = sharp_rate_factor(bound.L, k) * trace.anchor_sq;
    if (r[i] > sharp * (1.0 + 1e-9) + floor) {
      if (!rep.first_sharp_violation) rep.first_sharp_violation = k;
      ++rep.sharp_violations;
    }
    if (i > 0 && r[i] > r[i - 1] * (1.0 + 1e-9) + floor) {
      if (!rep.first_monotone_violation) rep.first_monotone_violation = k;
      ++rep.monotone_violations;
    }
  }
  return rep;
}

#define PROXSPLIT_INSTANTIATE(S)                                                                  \
  template SplitResult<S> run_drs<S>(const ProxPair<S>&, const OperatorParam&,                    \
                                     const DenseHermitian<S>&, const StopRule<S>&,                \
                                     const PsiObserver<S>&);                                      \
  template SplitResult<S> run_admm<S>(const ProxPair<S>&, const OperatorParam&,                   \
                                      const DenseHermitian<S>&, const DenseHermitian<S>&,         \
                                      const StopRule<S>&, const PsiObserver<S>&);                 \
  template SplitResult<S> run_pd<S>(const ProxPair<S>&, const OperatorParam&,                     \
                                    const DenseHermitian<S>&, const DenseHermitian<S>&,           \
                                    const DenseHermitian<S>&, const StopRule<S>&,                 \
                                    const PsiObserver<S>&);                                       \
  template SplitResult<S> run_pdf<S>(const ProxPair<S>&, const OperatorParam&,                    \
                                     const DenseHermitian<S>&, const DenseHermitian<S>&,          \
                                     const StopRule<S>&, const PsiObserver<S>&);                  \
  template MatchedInit<S> matched_init<S>(const ProxPair<S>&, const OperatorParam&,               \
                                          const DenseHermitian<S>&);                              \
  template double optimality_residual<S>(const SplitState<S>&);

PROXSPLIT_INSTANTIATE(double)
PROXSPLIT_INSTANTIATE(Complex)

#undef PROXSPLIT_INSTANTIATE

}  // namespace proxsplit
