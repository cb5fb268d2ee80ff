#include "proxsplit/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace proxsplit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive_finite(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

template <typename Scalar>
DenseHermitian<Scalar> apply_weights(const OperatorParam& s, const DenseHermitian<Scalar>& m,
                                     bool reciprocal) {
  return std::visit(
      Overloaded{
          [&](const IdentityParam&) { return m; },
          [&](const ScalarParam& p) { return m * (reciprocal ? 1.0 / p.alpha : p.alpha); },
          [&](const DiagonalEnergyParam&) -> DenseHermitian<Scalar> {
            throw std::invalid_argument(
                "OperatorParam: diagonal_energy acts on vectors, not matrices");
          },
          [&](const SdpHadamardParam& p) {
            if (p.shape.dim() != m.dim()) {
              throw std::invalid_argument(
                  "OperatorParam: sdp_hadamard shape N+K=" + std::to_string(p.shape.dim()) +
                  " does not match matrix dimension " + std::to_string(m.dim()));
            }
            const double a = reciprocal ? 1.0 / p.alpha : p.alpha;
            const double b = reciprocal ? 1.0 / p.beta : p.beta;
            return hadamard_blocks(m, p.shape, a / b, a, a * b);
          }},
      s.variant());
}

Eigen::VectorXd apply_vector(const OperatorParam& s, const Eigen::VectorXd& v, bool reciprocal) {
  return std::visit(
      Overloaded{
          [&](const IdentityParam&) -> Eigen::VectorXd { return v; },
          [&](const ScalarParam& p) -> Eigen::VectorXd {
            return v * (reciprocal ? 1.0 / p.alpha : p.alpha);
          },
          [&](const DiagonalEnergyParam& p) -> Eigen::VectorXd {
            if (p.d.size() != v.size()) {
              throw std::invalid_argument("OperatorParam: diagonal_energy has " +
                                          std::to_string(p.d.size()) + " entries, vector has " +
                                          std::to_string(v.size()));
            }
            const Eigen::ArrayXd w = p.d.array().sqrt();
            return reciprocal ? Eigen::VectorXd(v.array() / w) : Eigen::VectorXd(v.array() * w);
          },
          [&](const SdpHadamardParam&) -> Eigen::VectorXd {
            throw std::invalid_argument(
                "OperatorParam: sdp_hadamard acts on block matrices, not vectors");
          }},
      s.variant());
}

}  // namespace

std::string to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::identity: return "identity";
    case ParamKind::scalar: return "scalar";
    case ParamKind::diagonal_energy: return "diagonal_energy";
    case ParamKind::sdp_hadamard: return "sdp_hadamard";
  }
  return "unknown";
}

ParamKind param_kind_from_string(const std::string& name) {
  if (name == "identity") return ParamKind::identity;
  if (name == "scalar") return ParamKind::scalar;
  if (name == "diagonal_energy") return ParamKind::diagonal_energy;
  if (name == "sdp_hadamard") return ParamKind::sdp_hadamard;
  throw std::invalid_argument("unknown parameter kind '" + name + "'");
}

OperatorParam OperatorParam::identity() { return OperatorParam(IdentityParam{}); }

OperatorParam OperatorParam::scalar(double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("scalar parameter: alpha must be nonzero and finite");
  }
  return OperatorParam(ScalarParam{alpha});
}

OperatorParam OperatorParam::diagonal_energy(Eigen::VectorXd d, double d_max) {
  require_positive_finite(d_max, "diagonal_energy: d_max");
  if (d.size() == 0) throw std::invalid_argument("diagonal_energy: empty energy vector");
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0) || d(i) > d_max) {
      std::ostringstream os;
      os << "diagonal_energy: d[" << i << "] = " << d(i) << " outside (0, " << d_max << "]";
      throw std::invalid_argument(os.str());
    }
  }
  return OperatorParam(DiagonalEnergyParam{std::move(d), d_max});
}

OperatorParam OperatorParam::sdp_hadamard(double alpha, double beta, const BlockShape& shape) {
  require_positive_finite(alpha, "sdp_hadamard: alpha");
  require_positive_finite(beta, "sdp_hadamard: beta");
  return OperatorParam(SdpHadamardParam{alpha, beta, shape});
}

ParamKind OperatorParam::kind() const {
  return static_cast<ParamKind>(v_.index());
}

template <typename Scalar>
DenseHermitian<Scalar> OperatorParam::apply(const DenseHermitian<Scalar>& m) const {
  return apply_weights(*this, m, false);
}

template <typename Scalar>
DenseHermitian<Scalar> OperatorParam::adjoint(const DenseHermitian<Scalar>& m) const {
  return apply_weights(*this, m, false);
}

template <typename Scalar>
DenseHermitian<Scalar> OperatorParam::inverse(const DenseHermitian<Scalar>& m) const {
  return apply_weights(*this, m, true);
}

template <typename Scalar>
DenseHermitian<Scalar> OperatorParam::adjoint_inverse(const DenseHermitian<Scalar>& m) const {
  return apply_weights(*this, m, true);
}

Eigen::VectorXd OperatorParam::apply(const Eigen::VectorXd& v) const {
  return apply_vector(*this, v, false);
}
Eigen::VectorXd OperatorParam::adjoint(const Eigen::VectorXd& v) const {
  return apply_vector(*this, v, false);
}
Eigen::VectorXd OperatorParam::inverse(const Eigen::VectorXd& v) const {
  return apply_vector(*this, v, true);
}
Eigen::VectorXd OperatorParam::adjoint_inverse(const Eigen::VectorXd& v) const {
  return apply_vector(*this, v, true);
}

OperatorParam OperatorParam::inverse_param() const {
  return std::visit(
      Overloaded{
          [](const IdentityParam&) { return identity(); },
          [](const ScalarParam& p) { return scalar(1.0 / p.alpha); },
          [](const DiagonalEnergyParam& p) {
            Eigen::VectorXd inv = p.d.cwiseInverse();
            return diagonal_energy(inv, std::max(p.d_max, inv.maxCoeff()));
          },
          [](const SdpHadamardParam& p) {
            return sdp_hadamard(1.0 / p.alpha, 1.0 / p.beta, p.shape);
          }},
      v_);
}

OperatorParam OperatorParam::gram_param() const {
  return std::visit(
      Overloaded{
          [](const IdentityParam&) { return identity(); },
          [](const ScalarParam& p) { return scalar(p.alpha * p.alpha); },
          [](const DiagonalEnergyParam& p) {
            Eigen::VectorXd sq = p.d.cwiseAbs2();
            return diagonal_energy(sq, std::max(p.d_max, sq.maxCoeff()));
          },
          [](const SdpHadamardParam& p) {
            return sdp_hadamard(p.alpha * p.alpha, p.beta * p.beta, p.shape);
          }},
      v_);
}

BlockWeights OperatorParam::weights() const {
  return std::visit(
      Overloaded{
          [](const IdentityParam&) { return BlockWeights{}; },
          [](const ScalarParam& p) { return BlockWeights{p.alpha, p.alpha, p.alpha}; },
          [](const DiagonalEnergyParam&) -> BlockWeights {
            throw std::invalid_argument("diagonal_energy has no block weights");
          },
          [](const SdpHadamardParam& p) {
            return BlockWeights{p.alpha / p.beta, p.alpha, p.alpha * p.beta};
          }},
      v_);
}

bool OperatorParam::definiteness_invariant() const {
  return std::visit(Overloaded{[](const IdentityParam&) { return true; },
                               [](const ScalarParam& p) { return p.alpha > 0.0; },
                               [](const DiagonalEnergyParam&) { return false; },
                               [](const SdpHadamardParam&) { return true; }},
                    v_);
}

std::string OperatorParam::describe() const {
  std::ostringstream os;
  os.precision(6);
  std::visit(Overloaded{[&](const IdentityParam&) { os << "identity"; },
                        [&](const ScalarParam& p) { os << "scalar(alpha=" << p.alpha << ")"; },
                        [&](const DiagonalEnergyParam& p) {
                          os << "diagonal_energy(n=" << p.d.size() << ", d_max=" << p.d_max << ")";
                        },
                        [&](const SdpHadamardParam& p) {
                          os << "sdp_hadamard(alpha=" << p.alpha << ", beta=" << p.beta
                             << ", N=" << p.shape.N << ", K=" << p.shape.K << ")";
                        }},
             v_);
  return os.str();
}

namespace {

Inertia inertia_in_band(const Eigen::VectorXd& values, double band) {
  Inertia in;
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) > band) {
      ++in.positive;
    } else if (values(i) < -band) {
      ++in.negative;
    } else {
      ++in.zero;
    }
  }
  return in;
}

}  // namespace

template <typename Scalar>
Inertia inertia(const DenseHermitian<Scalar>& m, double zero_tol) {
  return inertia_in_band(eig_hermitian(m).values, zero_tol * std::max(1.0, frobenius_norm(m)));
}

DefinitenessReport definiteness_invariant_check(const BlockWeights& w, const BlockShape& shape,
                                                int trials, std::uint64_t seed) {
  GaussianSampler rng(seed);
  DefinitenessReport report;
  const Index n = shape.dim();
  const double w_max = std::max({std::abs(w.top_left), std::abs(w.off_diagonal), std::abs(w.bottom_right)});
  for (int t = 0; t < trials; ++t) {
    RealHermitian x;
    switch (t % 3) {
      case 0: x = random_hermitian<double>(n, rng); break;
      case 1: x = random_psd<double>(n, 1 + rng.uniform_index(std::max<Index>(1, n - 1)), rng); break;
      default: x = random_psd<double>(n, n, rng); break;
    }
    const RealHermitian y = hadamard_blocks(x, shape, w.top_left, w.off_diagonal, w.bottom_right);
    // Zero band: eigensolver backward error, plus the rounding already in x
    // carried through the weights for y.
    const double unit = 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    const double band_x = unit * frobenius_norm(x);
    const double band_y = unit * (frobenius_norm(y) + w_max * frobenius_norm(x));
    const Inertia before = inertia_in_band(eig_hermitian(x).values, band_x);
    const Inertia after = inertia_in_band(eig_hermitian(y).values, band_y);
    ++report.trials;
    if (!(before == after)) {
      report.passed = false;
      report.counterexample = x;
      std::ostringstream os;
      os << "trial " << t << ": inertia (+" << before.positive << ", -" << before.negative << ", 0x"
         << before.zero << ") became (+" << after.positive << ", -" << after.negative << ", 0x"
         << after.zero << ")";
      report.message = os.str();
      return report;
    }
  }
  report.message = "inertia preserved on " + std::to_string(report.trials) + " trials";
  return report;
}

DefinitenessReport definiteness_invariant_check(const OperatorParam& s, int trials,
                                                std::uint64_t seed) {
  const auto* p = std::get_if<SdpHadamardParam>(&s.variant());
  if (p == nullptr) {
    throw std::invalid_argument("definiteness_invariant_check: needs an sdp_hadamard parameter, got " +
                                to_string(s.kind()));
  }
  return definiteness_invariant_check(s.weights(), p->shape, trials, seed);
}

#define PROXSPLIT_INSTANTIATE(S)                                                             \
  template DenseHermitian<S> OperatorParam::apply<S>(const DenseHermitian<S>&) const;        \
  template DenseHermitian<S> OperatorParam::adjoint<S>(const DenseHermitian<S>&) const;      \
  template DenseHermitian<S> OperatorParam::inverse<S>(const DenseHermitian<S>&) const;      \
  template DenseHermitian<S> OperatorParam::adjoint_inverse<S>(const DenseHermitian<S>&) const; \
  template Inertia inertia<S>(const DenseHermitian<S>&, double);

PROXSPLIT_INSTANTIATE(double)
PROXSPLIT_INSTANTIATE(Complex)

#undef PROXSPLIT_INSTANTIATE

}  // namespace proxsplit
