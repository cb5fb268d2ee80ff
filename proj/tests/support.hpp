#pragma once

#include "proxsplit/apps.hpp"
#include "proxsplit/numerics.hpp"

#include <doctest.h>

namespace proxsplit::testing {

/// Largest |entry| of the difference.
template <typename Scalar>
double max_abs_diff(const DenseHermitian<Scalar>& a, const DenseHermitian<Scalar>& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename Scalar>
double min_eig(const DenseHermitian<Scalar>& m) {
  return eig_hermitian(m).values(0);
}

template <typename Scalar>
double max_eig(const DenseHermitian<Scalar>& m) {
  const auto values = eig_hermitian(m).values;
  return values(values.size() - 1);
}

/// Log-spaced points lo..hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
  }
  return g;
}

/// Ratio between neighbouring points of log_grid.
inline double log_step(double lo, double hi, int points) { return std::pow(hi / lo, 1.0 / (points - 1)); }

}  // namespace proxsplit::testing
