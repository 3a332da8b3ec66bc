#pragma once

// Orthonormal univariate polynomial families and matching Gauss rules.
//
//   legendre: orthonormal w.r.t. the uniform density 1/2 on [-1, 1],
//             psi_n(u) = sqrt(2n+1) P_n(u)
//   hermite:  orthonormal w.r.t. the standard normal density,
//             psi_n(u) = He_n(u) / sqrt(n!)

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"

namespace pcgsa {

enum class PolynomialFamily { legendre, hermite };

inline std::string_view to_string(PolynomialFamily family) {
  return family == PolynomialFamily::legendre ? "legendre" : "hermite";
}

/// Fills out[0..max_degree] with psi_0(u) .. psi_max_degree(u).
inline void eval_orthonormal_all(PolynomialFamily family, int max_degree, double u,
                                 std::span<double> out) {
  require(max_degree >= 0, "polynomial degree must be nonnegative");
  require(out.size() >= static_cast<std::size_t>(max_degree) + 1, "output span too short");
  if (family == PolynomialFamily::legendre) {
    if (!(std::abs(u) <= 1.0)) throw InvalidArgument("legendre argument outside [-1, 1]");
    // Classical P_n stays bounded by 1 on [-1, 1]; normalize afterwards.
    double p_prev = 1.0;
    double p = u;
    out[0] = 1.0;
    if (max_degree >= 1) out[1] = std::sqrt(3.0) * u;
    for (int n = 1; n < max_degree; ++n) {
      const double p_next = ((2.0 * n + 1.0) * u * p - n * p_prev) / (n + 1.0);
      p_prev = p;
      p = p_next;
      out[n + 1] = std::sqrt(2.0 * (n + 1) + 1.0) * p;
    }
  } else {
    // Normalized three-term recurrence avoids forming n!.
    out[0] = 1.0;
    if (max_degree >= 1) out[1] = u;
    for (int n = 1; n < max_degree; ++n) {
      out[n + 1] = (u * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) /
                   std::sqrt(n + 1.0);
    }
  }
}

inline double eval_orthonormal_1d(PolynomialFamily family, int degree, double u) {
  std::vector<double> values(static_cast<std::size_t>(degree < 0 ? 1 : degree + 1));
  eval_orthonormal_all(family, degree, u, values);
  return values.back();
}

/// Gauss rule for the probability measure a family is orthonormal against.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1
};

/// Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix of the
/// orthonormal recurrence. Exact for polynomials of degree <= 2n-1.
inline GaussRule gauss_rule(PolynomialFamily family, int n) {
  require(n >= 1, "quadrature needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = family == PolynomialFamily::legendre
                         ? k / std::sqrt(4.0 * k * k - 1.0)
                         : std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
    const double v0 = eig.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = v0 * v0;
  }
  if (family == PolynomialFamily::legendre) {
    // Symmetrize to remove eigen-solver noise; keeps nodes inside [-1, 1].
    for (int k = 0; k < n / 2; ++k) {
      const auto lo = static_cast<std::size_t>(k);
      const auto hi = static_cast<std::size_t>(n - 1 - k);
      const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
      const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
      rule.nodes[lo] = -x;
      rule.nodes[hi] = x;
      rule.weights[lo] = w;
      rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }
  return rule;
}

}  // namespace pcgsa
