#include "proxsplit/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace proxsplit {

namespace {

void require_entrywise(const OperatorParam& s, const char* who) {
  if (s.kind() == ParamKind::diagonal_energy) {
    throw std::invalid_argument(std::string(who) + ": needs an entrywise matrix parameter, got " +
                                to_string(s.kind()));
  }
}

}  // namespace

template <typename Scalar>
DenseHermitian<Scalar> prox_psd_indicator(const OperatorParam& s, const DenseHermitian<Scalar>& v) {
  if (!s.definiteness_invariant()) {
    throw std::invalid_argument("prox_psd_indicator: parameter " + s.describe() +
                                " does not preserve the PSD cone");
  }
  return s.inverse(project_psd(v));
}

template <typename Scalar>
DenseHermitian<Scalar> prox_psd_conjugate(const OperatorParam& s, const DenseHermitian<Scalar>& v) {
  if (!s.definiteness_invariant()) {
    throw std::invalid_argument("prox_psd_conjugate: parameter " + s.describe() +
                                " does not preserve the PSD cone");
  }
  return s.adjoint(project_nsd(v));
}

template <typename Scalar>
DenseHermitian<Scalar> prox_linear_diag1(const DenseHermitian<Scalar>& g, const OperatorParam& s,
                                         const DenseHermitian<Scalar>& v) {
  require_entrywise(s, "prox_linear_diag1");
  if (g.dim() != v.dim()) {
    throw std::invalid_argument("prox_linear_diag1: G is " + std::to_string(g.dim()) +
                                "-dimensional, V is " + std::to_string(v.dim()));
  }
  MatrixX<Scalar> x = (s.inverse(v) - s.gram_param().inverse(g)).matrix();
  x.diagonal().setOnes();
  return DenseHermitian<Scalar>(x);
}

template <typename Scalar>
DenseHermitian<Scalar> prox_linear_sr(const DenseHermitian<Scalar>& g, const FixedEntrySet& observed,
                                      const OperatorParam& s, const DenseHermitian<Scalar>& v) {
  require_entrywise(s, "prox_linear_sr");
  const Index n = v.dim() - 1;
  if (n < 1 || g.dim() != v.dim()) {
    throw std::invalid_argument("prox_linear_sr: G and V must share an (N+1) dimension with N >= 1");
  }
  if (observed.indices.size() != observed.values.size()) {
    throw std::invalid_argument("prox_linear_sr: observed index and value lists differ in length");
  }
  for (Index j : observed.indices) {
    if (j < 0 || j >= n) {
      throw std::out_of_range("prox_linear_sr: observed index " + std::to_string(j) +
                              " outside [0, " + std::to_string(n) + ")");
    }
  }

  MatrixX<Scalar> work = v.matrix();
  const DenseHermitian<Scalar> top(MatrixX<Scalar>(work.topLeftCorner(n, n)));
  work.topLeftCorner(n, n) = project_toeplitz(top).matrix();

  MatrixX<Scalar> x = (s.inverse(DenseHermitian<Scalar>(work)) - s.gram_param().inverse(g)).matrix();
  for (std::size_t i = 0; i < observed.indices.size(); ++i) {
    const Index j = observed.indices[i];
    const Complex value = observed.values[i];
    if constexpr (std::is_same_v<Scalar, double>) {
      if (value.imag() != 0.0) {
        throw std::invalid_argument("prox_linear_sr: complex observation for a real-field problem");
      }
      x(j, n) = value.real();
      x(n, j) = value.real();
    } else {
      x(j, n) = value;
      x(n, j) = std::conj(value);
    }
  }
  return DenseHermitian<Scalar>(x);
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double mag = std::max(std::abs(u(i)) - 1.0, 0.0);
    out(i) = u(i) > 0.0 ? mag : (u(i) < 0.0 ? -mag : 0.0);
  }
  return out;
}

namespace {

void require_energies(const Eigen::VectorXd& d, const Eigen::VectorXd& v, const char* who) {
  if (d.size() != v.size()) {
    throw std::invalid_argument(std::string(who) + ": d has " + std::to_string(d.size()) +
                                " entries, v has " + std::to_string(v.size()));
  }
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0)) {
      throw std::invalid_argument(std::string(who) + ": d[" + std::to_string(i) +
                                  "] must be positive");
    }
  }
}

}  // namespace

Eigen::VectorXd prox_l1_orthogonal(const Eigen::VectorXd& d, const Eigen::VectorXd& v) {
  require_energies(d, v, "prox_l1_orthogonal");
  const Eigen::VectorXd u = d.cwiseSqrt().cwiseProduct(v);
  return soft_threshold(u).cwiseQuotient(d);
}

Eigen::VectorXd prox_linf_ball_conjugate(const Eigen::VectorXd& d, const Eigen::VectorXd& v) {
  require_energies(d, v, "prox_linf_ball_conjugate");
  return d.cwiseSqrt().cwiseProduct(v).cwiseMax(-1.0).cwiseMin(1.0);
}

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::none: return "none";
    case ConstraintKind::diagonal_ones: return "diagonal_ones";
    case ConstraintKind::toeplitz_fixed_entries: return "toeplitz_fixed_entries";
  }
  return "unknown";
}

template <typename Scalar>
ProxPair<Scalar> psd_psd_pair(Index dim) {
  ProxPair<Scalar> pair;
  pair.f_prox = [](const OperatorParam& s, const DenseHermitian<Scalar>& v) {
    return prox_psd_indicator(s, v);
  };
  pair.g_prox = pair.f_prox;
  pair.g_conj_prox = [](const OperatorParam& s, const DenseHermitian<Scalar>& v) {
    return prox_psd_conjugate(s, v);
  };
  pair.constraint = ConstraintKind::none;
  pair.dim = dim;
  return pair;
}

#define PROXSPLIT_INSTANTIATE(S)                                                                 \
  template DenseHermitian<S> prox_psd_indicator<S>(const OperatorParam&, const DenseHermitian<S>&); \
  template DenseHermitian<S> prox_psd_conjugate<S>(const OperatorParam&, const DenseHermitian<S>&); \
  template DenseHermitian<S> prox_linear_diag1<S>(const DenseHermitian<S>&, const OperatorParam&, \
                                                  const DenseHermitian<S>&);                     \
  template DenseHermitian<S> prox_linear_sr<S>(const DenseHermitian<S>&, const FixedEntrySet&,   \
                                               const OperatorParam&, const DenseHermitian<S>&);  \
  template ProxPair<S> psd_psd_pair<S>(Index);

PROXSPLIT_INSTANTIATE(double)
PROXSPLIT_INSTANTIATE(Complex)

#undef PROXSPLIT_INSTANTIATE

}  // namespace proxsplit
