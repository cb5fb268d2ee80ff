#include "proxsplit/apps.hpp"
#include "proxsplit/tuning.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace proxsplit;
using proxsplit::testing::max_abs_diff;

TEST_CASE("bqp_objective") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(5, 3);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(5);
  CHECK(bqp_objective(zero, b).matrix() == Eigen::MatrixXd::Zero(4, 4));
  CHECK_THROWS_AS(bqp_objective(zero, Eigen::VectorXd::Ones(4)), std::invalid_argument);

  // x^T A^T A x - 2 b^T A x = [x; 1]^T G [x; 1] for any x.
  GaussianSampler rng(1);
  const Eigen::MatrixXd a = rng.matrix(6, 4, 1.0);
  const Eigen::VectorXd bb = rng.matrix(6, 1, 1.0);
  const auto g = bqp_objective(a, bb);
  Eigen::VectorXd x(4);
  x << 1, -1, -1, 1;
  Eigen::VectorXd lifted(5);
  lifted << x, 1.0;
  const double lhs = (a * x - bb).squaredNorm() - bb.squaredNorm();
  CHECK(lifted.dot(g.matrix() * lifted) == doctest::Approx(lhs));
  CHECK(g(4, 4) == 0.0);
}

TEST_CASE("gen_bqp") {
  const auto a = gen_bqp(40, 50, 0.05, 1.0, 7);
  const auto b = gen_bqp(40, 50, 0.05, 1.0, 7);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  CHECK(a.A.rows() == 50);
  CHECK(a.A.cols() == 40);
  CHECK(a.N() == 40);
  CHECK(a.K() == 50);
  CHECK(a.G.matrix() == a.G.matrix().transpose());
  CHECK(frobenius_norm(a.G) < 40.0 / 4.0);
  CHECK(gen_bqp(40, 50, 0.05, 1.0, 8).A != a.A);
  CHECK_THROWS_AS(gen_bqp(0, 5, 1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_bqp(5, 5, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("gen_sr") {
  SUBCASE("single spike has constant magnitude") {
    const auto inst = gen_sr(16, 1, 1.5, 1.0, 3);
    for (Index n = 0; n < 16; ++n) CHECK(std::abs(inst.x_star(n)) == doctest::Approx(std::abs(inst.amplitudes[0])));
  }
  SUBCASE("paper setup") {
    const auto inst = gen_sr(50, 10, 2.0, 0.8, 4);
    CHECK(inst.taus.size() == 10);
    CHECK(min_wraparound_separation(inst.taus) >= 1.0 / 50.0);
    for (double t : inst.taus) CHECK((t >= 0.0 && t < 1.0));
    CHECK(inst.omega.size() == 40);
    CHECK(std::is_sorted(inst.omega.begin(), inst.omega.end()));
    CHECK(std::set<Index>(inst.omega.begin(), inst.omega.end()).size() == inst.omega.size());
    CHECK(inst.G(0, 0) == Complex(1.0 / 100.0, 0));
    CHECK(inst.G(50, 50) == Complex(0.5, 0));
    CHECK(sr_measurements(inst.taus, inst.amplitudes, 50) == inst.x_star);

    const auto u = sr_true_u(inst);
    CHECK(u(0).real() == doctest::Approx(inst.amplitude_l1()));
    CHECK(u(0).imag() == 0.0);
    const auto values = eig_hermitian(toeplitz_map<Complex>(u)).values;
    const double top = values(49);
    CHECK(values(50 - 10) > 1e-6 * top);
    CHECK(std::abs(values(50 - 11)) < 1e-9 * top);

    const auto atomic = sr_atomic_solution(inst);
    CHECK(proxsplit::testing::min_eig(atomic) > -1e-9 * frobenius_norm(atomic));
    for (Index j = 0; j < 50; ++j) CHECK(atomic(j, 50) == inst.x_star(j));
  }
  SUBCASE("observation fraction rounding and determinism") {
    CHECK(gen_sr(10, 2, 1.0, 0.01, 1).omega.size() == 1);
    CHECK(gen_sr(10, 2, 1.0, 1.0, 1).omega.size() == 10);
    const auto a = gen_sr(20, 3, 1.0, 0.5, 9);
    const auto b = gen_sr(20, 3, 1.0, 0.5, 9);
    CHECK(a.taus == b.taus);
    CHECK(a.omega == b.omega);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(gen_sr(10, 10, 1.0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_sr(10, 2, 1.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_sr(10, 2, 1.0, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_sr(10, 2, -1.0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_sr(20, 19, 1.0, 0.5, 1), std::invalid_argument);
  }
  CHECK(min_wraparound_separation({0.05, 0.95}) == doctest::Approx(0.1));
}

TEST_CASE("prox pairs of the applications") {
  GaussianSampler rng(5);
  SUBCASE("bqp") {
    const auto inst = gen_bqp(6, 8, 0.3, 1.0, 1);
    const auto pair = build_prox_pair(inst);
    CHECK(pair.constraint == ConstraintKind::diagonal_ones);
    CHECK(pair.dim == 7);
    const auto s = OperatorParam::sdp_hadamard(0.5, 2.0, inst.shape);
    for (int i = 0; i < 50; ++i) {
      const auto v1 = random_hermitian<double>(7, rng);
      const auto v2 = random_hermitian<double>(7, rng);
      const auto x1 = pair.f_prox(s, v1);
      CHECK(x1.matrix().diagonal() == Eigen::VectorXd::Ones(7));
      const auto i1 = pair.f_prox(OperatorParam::identity(), v1);
      const auto i2 = pair.f_prox(OperatorParam::identity(), v2);
      CHECK(squared_norm(i1 - i2) <= inner(i1 - i2, v1 - v2) + 1e-12);
    }
  }
  SUBCASE("sr") {
    const auto inst = gen_sr(12, 2, 1.0, 0.5, 2);
    const auto pair = build_prox_pair(inst);
    CHECK(pair.constraint == ConstraintKind::toeplitz_fixed_entries);
    const auto s = OperatorParam::sdp_hadamard(0.3, 2.0, inst.shape());
    for (int i = 0; i < 50; ++i) {
      const auto v1 = random_hermitian<Complex>(13, rng);
      const auto v2 = random_hermitian<Complex>(13, rng);
      const auto x1 = pair.f_prox(s, v1);
      for (Index j : inst.omega) CHECK(x1(j, 12) == inst.x_star(j));
      const auto i1 = pair.f_prox(OperatorParam::identity(), v1);
      const auto i2 = pair.f_prox(OperatorParam::identity(), v2);
      CHECK(squared_norm(i1 - i2) <= inner(i1 - i2, v1 - v2) + 1e-12);
    }
  }
}

TEST_CASE("bqp reference solution") {
  const Index n = 8;
  const auto inst = gen_bqp(n, 10, 0.3, 1.0, 3);
  const auto pair = build_prox_pair(inst);
  const auto ref = reference_solve(pair, OperatorParam::sdp_hadamard(0.7, 1.5, inst.shape));
  REQUIRE(ref.converged);
  CHECK(ref.opt_residual <= 1e-10);
  CHECK(ref.X.matrix().diagonal() == Eigen::VectorXd::Ones(n + 1));

  const auto other = reference_solve(pair, OperatorParam::sdp_hadamard(2.0, 0.5, inst.shape));
  CHECK(frobenius_norm(other.X - ref.X) / frobenius_norm(ref.X) < 1e-6);

  CHECK(proxsplit::testing::min_eig(ref.X) > -1e-8);
  CHECK(proxsplit::testing::max_eig(ref.Lambda) < 1e-8);
  CHECK(std::abs(inner(ref.X, ref.Lambda)) < 1e-6 * frobenius_norm(ref.X) * frobenius_norm(ref.Lambda));

  const double x1 = ref.X.block(inst.shape, 1).squaredNorm();
  CHECK(x1 >= n - 1e-6);
  CHECK(x1 <= n * n + 1e-6);
  CHECK(squared_norm(ref.X) >= n + 1 - 1e-6);
  CHECK(squared_norm(ref.X) <= (n + 1) * (n + 1) + 1e-6);

  const Eigen::VectorXd mu = extract_diag_multipliers(ref.Lambda, inst.G);
  CHECK(std::abs(mu.sum() - inner(ref.X, inst.G)) < 1e-6);
  const Eigen::VectorXd ata = (inst.A.transpose() * inst.A).diagonal();
  for (Index i = 0; i < n; ++i) CHECK(mu(i) <= ata(i) + 1e-6);

  const auto capped = reference_solve(pair, OperatorParam::identity(), 1e-10, 5);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 5);
  CHECK(capped.opt_residual > 1e-10);
}

TEST_CASE("sr reference solution") {
  const auto inst = gen_sr(16, 2, 1.0, 0.8, 6);
  const auto pair = build_prox_pair(inst);
  const auto s = sr_estimate(16, 2, 1.0);
  const auto ref = reference_solve(pair, s);
  REQUIRE(ref.converged);
  CHECK(ref.Lambda(16, 16).real() == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(proxsplit::testing::min_eig(ref.X) > -1e-8);
  CHECK(proxsplit::testing::max_eig(ref.Lambda) < 1e-8);
  for (Index j : inst.omega) CHECK(ref.X(j, 16) == inst.x_star(j));
  const Eigen::MatrixXcd top = ref.X.matrix().topLeftCorner(16, 16);
  CHECK(max_abs_diff(project_toeplitz(ComplexHermitian(top)), ComplexHermitian(top)) < 1e-10);
}

TEST_CASE("mse") {
  GaussianSampler rng(7);
  const auto x = random_hermitian<double>(5, rng);
  CHECK(mse(x, x) == 0.0);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(5, 5);
  e(0, 0) = 0.1;
  CHECK(mse(RealHermitian(x.matrix() + e), x) == doctest::Approx(0.01 / 25.0));
  CHECK_THROWS_AS(mse(x, RealHermitian::zero(4)), std::invalid_argument);
}
