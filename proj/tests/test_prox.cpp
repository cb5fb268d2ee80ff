#include "proxsplit/prox.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace proxsplit;
using proxsplit::testing::max_abs_diff;

namespace {

template <typename Scalar>
double subproblem_value(const OperatorParam& s, const DenseHermitian<Scalar>& z, const DenseHermitian<Scalar>& v,
                        const DenseHermitian<Scalar>* g = nullptr) {
  return 0.5 * squared_norm(s.apply(z) - v) + (g ? inner(z, *g) : 0.0);
}

/// Projected gradient on <X, G> + 1/2 ||S X - V||^2 over an affine set given by
/// its orthogonal projection. S must be an entrywise map.
template <typename Scalar, typename Project>
DenseHermitian<Scalar> projected_gradient(const OperatorParam& s, const DenseHermitian<Scalar>& g,
                                          const DenseHermitian<Scalar>& v, Project project, int iters) {
  const auto w = s.weights();
  const double lmax = std::max({w.top_left * w.top_left, w.off_diagonal * w.off_diagonal,
                                w.bottom_right * w.bottom_right});
  auto x = project(DenseHermitian<Scalar>::zero(v.dim()));
  for (int i = 0; i < iters; ++i) {
    const auto grad = g + s.adjoint(s.apply(x) - v);
    x = project(x - (1.0 / lmax) * grad);
  }
  return x;
}

template <typename Scalar>
DenseHermitian<Scalar> with_unit_diagonal(const DenseHermitian<Scalar>& m) {
  MatrixX<Scalar> out = m.matrix();
  out.diagonal().setOnes();
  return DenseHermitian<Scalar>(out);
}

/// ||T v1 - T v2||^2 <= <T v1 - T v2, v1 - v2> for the map T.
template <typename Point, typename Map>
void check_firmly_nonexpansive(Map map, std::function<Point()> sample, int pairs) {
  int failures = 0;
  for (int i = 0; i < pairs; ++i) {
    const Point v1 = sample();
    const Point v2 = sample();
    const Point d = map(v1) - map(v2);
    const double lhs = squared_norm(d);
    const double rhs = inner(d, Point(v1 - v2));
    if (lhs > rhs + 1e-10 * (1.0 + std::abs(rhs))) ++failures;
  }
  CHECK(failures == 0);
}

FixedEntrySet random_observed(Index n, GaussianSampler& rng, double frac) {
  FixedEntrySet set;
  for (Index j = 0; j < n; ++j) {
    if (rng.uniform01() < frac) {
      set.indices.push_back(j);
      set.values.emplace_back(rng.normal(), rng.normal());
    }
  }
  return set;
}

ComplexHermitian sr_objective(Index n) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  g.diagonal().head(n).setConstant(1.0 / (2.0 * n));
  g(n, n) = 0.5;
  return ComplexHermitian(g);
}

}  // namespace

TEST_CASE("prox_psd_indicator") {
  GaussianSampler rng(1);
  const auto psd = random_psd<double>(4, 2, rng);
  CHECK(max_abs_diff(prox_psd_indicator(OperatorParam::identity(), psd), psd) < 1e-12);

  Eigen::MatrixXd d = Eigen::Vector2d(1, -1).asDiagonal();
  const auto p = prox_psd_indicator(OperatorParam::identity(), RealHermitian(d));
  CHECK(p(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(p(1, 1)) < 1e-15);

  CHECK_THROWS_AS(prox_psd_indicator(OperatorParam::scalar(-1.0), psd), std::invalid_argument);
  CHECK_THROWS_AS(prox_psd_conjugate(OperatorParam::scalar(-1.0), psd), std::invalid_argument);

  SUBCASE("first-order optimality under sdp_hadamard(2, 1)") {
    const BlockShape shape(3, 2);
    const auto s = OperatorParam::sdp_hadamard(2.0, 1.0, shape);
    for (int trial = 0; trial < 10; ++trial) {
      const auto v = random_hermitian<Complex>(shape.dim(), rng);
      const auto z = prox_psd_indicator(s, v);
      CHECK(proxsplit::testing::min_eig(z) > -1e-10);
      const double best = subproblem_value(s, z, v);
      for (int k = 0; k < 100; ++k) {
        const auto q = random_psd<Complex>(shape.dim(), 1 + k % shape.dim(), rng);
        for (double t : {1e-4, 1e-2, 1.0}) {
          CHECK(subproblem_value(s, ComplexHermitian(z + t * (q - z)), v) >= best - 1e-10);
        }
      }
    }
  }
}

TEST_CASE("prox_linear_diag1") {
  GaussianSampler rng(2);
  const auto zero_g = RealHermitian::zero(4);
  const auto v = random_hermitian<double>(4, rng);
  const auto unit = with_unit_diagonal(v);
  CHECK(max_abs_diff(prox_linear_diag1(zero_g, OperatorParam::identity(), unit), unit) < 1e-15);
  CHECK(max_abs_diff(prox_linear_diag1(zero_g, OperatorParam::identity(), v), unit) < 1e-15);

  SUBCASE("matches a projected-gradient oracle") {
    const BlockShape shape(5, 1);
    for (const auto& s : {OperatorParam::sdp_hadamard(2.0, 0.5, shape), OperatorParam::sdp_hadamard(0.3, 1.7, shape),
                          OperatorParam::scalar(1.5)}) {
      const auto g = random_hermitian<double>(6, rng);
      const auto vv = random_hermitian<double>(6, rng);
      const auto closed = prox_linear_diag1(g, s, vv);
      const auto oracle =
          projected_gradient(s, g, vv, [](const RealHermitian& m) { return with_unit_diagonal(m); }, 3000);
      CHECK(max_abs_diff(closed, oracle) < 1e-8);
      CHECK(closed.matrix().diagonal() == Eigen::VectorXd::Ones(6));
    }
  }
  CHECK_THROWS_AS(prox_linear_diag1(RealHermitian::zero(3), OperatorParam::identity(), v), std::invalid_argument);
}

TEST_CASE("prox_linear_sr") {
  GaussianSampler rng(3);
  const Index n = 6;
  const auto zero_g = ComplexHermitian::zero(n + 1);

  SUBCASE("no observations and Toeplitz input is a fixed point") {
    Eigen::VectorXcd u(n);
    for (Index i = 0; i < n; ++i) u(i) = Complex(rng.normal(), i == 0 ? 0.0 : rng.normal());
    Eigen::MatrixXcd m = random_hermitian<Complex>(n + 1, rng).matrix();
    m.topLeftCorner(n, n) = toeplitz_map<Complex>(u).matrix();
    const ComplexHermitian v(m);
    CHECK(max_abs_diff(prox_linear_sr(zero_g, FixedEntrySet{}, OperatorParam::identity(), v), v) < 1e-14);
  }
  SUBCASE("fully observed column is overwritten") {
    FixedEntrySet all;
    for (Index j = 0; j < n; ++j) {
      all.indices.push_back(j);
      all.values.emplace_back(rng.normal(), rng.normal());
    }
    const auto s = OperatorParam::sdp_hadamard(0.4, 2.0, BlockShape(n, 1));
    const auto out = prox_linear_sr(sr_objective(n), all, s, random_hermitian<Complex>(n + 1, rng));
    for (Index j = 0; j < n; ++j) {
      CHECK(out(j, n) == all.values[j]);
      CHECK(out(n, j) == std::conj(all.values[j]));
    }
  }
  SUBCASE("matches a projected-gradient oracle") {
    const BlockShape shape(n, 1);
    const auto g = sr_objective(n);
    for (const auto& s : {OperatorParam::identity(), OperatorParam::sdp_hadamard(0.5, 2.0, shape),
                          OperatorParam::sdp_hadamard(1.3, 0.6, shape)}) {
      const auto observed = random_observed(n, rng, 0.6);
      const auto v = random_hermitian<Complex>(n + 1, rng);
      const auto closed = prox_linear_sr(g, observed, s, v);
      auto project = [&](const ComplexHermitian& m) {
        Eigen::MatrixXcd out = m.matrix();
        out.topLeftCorner(n, n) = project_toeplitz(ComplexHermitian(out.topLeftCorner(n, n))).matrix();
        for (std::size_t i = 0; i < observed.indices.size(); ++i) {
          out(observed.indices[i], n) = observed.values[i];
          out(n, observed.indices[i]) = std::conj(observed.values[i]);
        }
        return ComplexHermitian(out);
      };
      const auto oracle = projected_gradient(s, g, v, project, 4000);
      CHECK(max_abs_diff(closed, oracle) < 1e-8);
      for (std::size_t i = 0; i < observed.indices.size(); ++i) {
        CHECK(closed(observed.indices[i], n) == observed.values[i]);
      }
      const Eigen::MatrixXcd top = closed.matrix().topLeftCorner(n, n);
      CHECK(max_abs_diff(project_toeplitz(ComplexHermitian(top)), ComplexHermitian(top)) < 1e-12);
    }
  }
  SUBCASE("validation") {
    FixedEntrySet bad{{n}, {Complex(1, 0)}};
    CHECK_THROWS_AS(prox_linear_sr(zero_g, bad, OperatorParam::identity(), zero_g), std::out_of_range);
    FixedEntrySet complex_value{{0}, {Complex(1, 1)}};
    CHECK_THROWS_AS(prox_linear_sr(RealHermitian::zero(n + 1), complex_value, OperatorParam::identity(),
                                   RealHermitian::zero(n + 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("prox_l1_orthogonal") {
  const Eigen::Vector3d ones = Eigen::Vector3d::Ones();
  CHECK(prox_l1_orthogonal(ones, Eigen::Vector3d(2, -0.5, 3)).isApprox(Eigen::Vector3d(1, 0, 2)));
  CHECK(prox_l1_orthogonal(ones, Eigen::Vector3d::Zero()) == Eigen::Vector3d::Zero());
  CHECK(soft_threshold(Eigen::Vector3d(-3, 0.2, 1.5)).isApprox(Eigen::Vector3d(-2, 0, 0.5)));

  SUBCASE("per-coordinate grid oracle") {
    const Eigen::Vector2d d(4, 1);
    const Eigen::Vector2d v(1, 2);
    const auto x = prox_l1_orthogonal(d, v);
    for (int i = 0; i < 2; ++i) {
      double best_x = 0.0, best_val = 1e300;
      for (int k = -400000; k <= 400000; ++k) {
        const double z = k * 1e-5;
        const double val = std::abs(z) + 0.5 * std::pow(std::sqrt(d(i)) * z - v(i), 2);
        if (val < best_val) {
          best_val = val;
          best_x = z;
        }
      }
      CHECK(std::abs(x(i) - best_x) < 1e-5);
    }
  }
}

TEST_CASE("Moreau decomposition") {
  GaussianSampler rng(4);
  const BlockShape shape(3, 2);
  const std::function<ComplexHermitian(const OperatorParam&, const ComplexHermitian&)> f =
      [](const OperatorParam& s, const ComplexHermitian& v) { return prox_psd_indicator(s, v); };
  const std::function<ComplexHermitian(const OperatorParam&, const ComplexHermitian&)> fstar =
      [](const OperatorParam& s, const ComplexHermitian& v) { return prox_psd_conjugate(s, v); };
  const auto v = random_hermitian<Complex>(shape.dim(), rng);
  CHECK(moreau_residual(OperatorParam::identity(), f, fstar, v) < 1e-12);
  CHECK(moreau_residual(OperatorParam::sdp_hadamard(2.0, 0.5, shape), f, fstar, v) < 1e-9);
  CHECK(moreau_residual(OperatorParam::identity(), f, fstar, ComplexHermitian::zero(shape.dim())) == 0.0);

  const std::function<Eigen::VectorXd(const OperatorParam&, const Eigen::VectorXd&)> l1 =
      [](const OperatorParam& s, const Eigen::VectorXd& x) {
        return prox_l1_orthogonal(std::get<DiagonalEnergyParam>(s.variant()).d, x);
      };
  const std::function<Eigen::VectorXd(const OperatorParam&, const Eigen::VectorXd&)> linf =
      [](const OperatorParam& s, const Eigen::VectorXd& x) {
        return prox_linf_ball_conjugate(std::get<DiagonalEnergyParam>(s.variant()).d, x);
      };
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd d(5), x(5);
    for (int i = 0; i < 5; ++i) {
      d(i) = std::exp(rng.normal());
      x(i) = 3.0 * rng.normal();
    }
    CHECK(moreau_residual(OperatorParam::diagonal_energy(d), l1, linf, x) < 1e-12);
  }
}

TEST_CASE("S Prox^S is firmly nonexpansive") {
  GaussianSampler rng(5);
  const BlockShape shape(4, 1);
  const auto s = OperatorParam::sdp_hadamard(0.6, 2.2, shape);
  const auto g = random_hermitian<double>(shape.dim(), rng);
  auto sample_real = [&] { return RealHermitian(3.0 * random_hermitian<double>(shape.dim(), rng)); };
  auto sample_complex = [&] { return ComplexHermitian(3.0 * random_hermitian<Complex>(shape.dim(), rng)); };

  check_firmly_nonexpansive<RealHermitian>(
      [&](const RealHermitian& v) { return s.apply(prox_psd_indicator(s, v)); }, sample_real, 200);
  check_firmly_nonexpansive<RealHermitian>(
      [&](const RealHermitian& v) { return s.adjoint_inverse(prox_psd_conjugate(s, v)); }, sample_real, 200);
  check_firmly_nonexpansive<RealHermitian>(
      [&](const RealHermitian& v) { return s.apply(prox_linear_diag1(g, s, v)); }, sample_real, 200);

  const auto observed = random_observed(4, rng, 0.5);
  const auto gs = sr_objective(4);
  check_firmly_nonexpansive<ComplexHermitian>(
      [&](const ComplexHermitian& v) { return s.apply(prox_linear_sr(gs, observed, s, v)); }, sample_complex, 200);

  Eigen::VectorXd d(6);
  for (int i = 0; i < 6; ++i) d(i) = std::exp(rng.normal());
  const auto sd = OperatorParam::diagonal_energy(d);
  check_firmly_nonexpansive<Eigen::VectorXd>(
      [&](const Eigen::VectorXd& v) { return sd.apply(prox_l1_orthogonal(d, v)); },
      [&] {
        Eigen::VectorXd v(6);
        for (int i = 0; i < 6; ++i) v(i) = 3.0 * rng.normal();
        return v;
      },
      200);
}

TEST_CASE("psd_psd_pair") {
  const auto pair = psd_psd_pair<double>(3);
  CHECK(pair.dim == 3);
  CHECK(pair.constraint == ConstraintKind::none);
  CHECK(to_string(ConstraintKind::diagonal_ones) == "diagonal_ones");
}
