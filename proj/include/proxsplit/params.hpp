#pragma once

// The operator parameter S: a bijective linear map applied before the
// quadratic penalty of the extended proximal operator. Four shapes are
// supported; all of them are self-adjoint.

#include "proxsplit/numerics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace proxsplit {

struct IdentityParam {};

struct ScalarParam {
  double alpha = 1.0;
};

/// Parameter matrix Diag(sqrt(d)) acting on vectors.
struct DiagonalEnergyParam {
  Eigen::VectorXd d;
  double d_max = 1e8;
};

/// Block weights alpha/beta (top-left), alpha (off-diagonal), alpha*beta
/// (bottom-right), applied entrywise to a matrix partitioned by `shape`.
struct SdpHadamardParam {
  double alpha = 1.0;
  double beta = 1.0;
  BlockShape shape;
};

enum class ParamKind { identity, scalar, diagonal_energy, sdp_hadamard };

std::string to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& name);

/// Entrywise weights of a 2x2 block Hadamard map.
struct BlockWeights {
  double top_left = 1.0;
  double off_diagonal = 1.0;
  double bottom_right = 1.0;
};

class OperatorParam {
 public:
  using Variant = std::variant<IdentityParam, ScalarParam, DiagonalEnergyParam, SdpHadamardParam>;

  static constexpr double kDefaultDMax = 1e8;

  OperatorParam() = default;

  static OperatorParam identity();
  static OperatorParam scalar(double alpha);
  static OperatorParam diagonal_energy(Eigen::VectorXd d, double d_max = kDefaultDMax);
  static OperatorParam sdp_hadamard(double alpha, double beta, const BlockShape& shape);

  ParamKind kind() const;
  const Variant& variant() const { return v_; }

  template <typename Scalar>
  DenseHermitian<Scalar> apply(const DenseHermitian<Scalar>& m) const;
  template <typename Scalar>
  DenseHermitian<Scalar> adjoint(const DenseHermitian<Scalar>& m) const;
  template <typename Scalar>
  DenseHermitian<Scalar> inverse(const DenseHermitian<Scalar>& m) const;
  template <typename Scalar>
  DenseHermitian<Scalar> adjoint_inverse(const DenseHermitian<Scalar>& m) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd adjoint(const Eigen::VectorXd& v) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& v) const;
  Eigen::VectorXd adjoint_inverse(const Eigen::VectorXd& v) const;

  /// S^-1 as a parameter of the same kind.
  OperatorParam inverse_param() const;
  /// S* S as a parameter of the same kind.
  OperatorParam gram_param() const;

  /// Weights of the entrywise map for matrix-valued kinds (identity, scalar,
  /// sdp_hadamard). Throws for diagonal_energy.
  BlockWeights weights() const;

  /// True when S maps the PSD cone onto itself and preserves inertia, which is
  /// what the closed-form PSD-indicator prox needs.
  bool definiteness_invariant() const;

  /// Short human-readable form, e.g. "sdp_hadamard(alpha=2, beta=0.5, N=40, K=1)".
  std::string describe() const;

 private:
  explicit OperatorParam(Variant v) : v_(std::move(v)) {}
  Variant v_{IdentityParam{}};
};

struct DefinitenessReport {
  bool passed = true;
  int trials = 0;
  /// First input whose inertia changed, with the two sign-count triples.
  std::optional<RealHermitian> counterexample;
  std::string message;
};

/// (positive, negative, zero) eigenvalue counts with the zero band
/// |w| <= zero_tol * max(1, ||M||).
struct Inertia {
  Index positive = 0;
  Index negative = 0;
  Index zero = 0;
  bool operator==(const Inertia&) const = default;
};

template <typename Scalar>
Inertia inertia(const DenseHermitian<Scalar>& m, double zero_tol = 1e-9);

/// Random search for an input whose inertia the block weights fail to
/// preserve. Inputs cycle through indefinite, low-rank PSD and full-rank PSD
/// matrices.
DefinitenessReport definiteness_invariant_check(const BlockWeights& weights, const BlockShape& shape,
                                                int trials, std::uint64_t seed);
/// Same for an OperatorParam; requires sdp_hadamard.
DefinitenessReport definiteness_invariant_check(const OperatorParam& s, int trials,
                                                std::uint64_t seed);

}  // namespace proxsplit
