#pragma once

// Least Angle Regression (Efron, Hastie, Johnstone & Tibshirani), used only to
// rank predictors; coefficients are refit by ordinary least squares elsewhere.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"

namespace pcgsa {

struct LarPath {
  /// Columns of the regression matrix in order of inclusion; the active set
  /// after k steps is the first k entries.
  std::vector<std::size_t> order;
  /// Columns never eligible (constant after centering) or dropped as collinear.
  std::vector<std::size_t> excluded;
  /// True when the path ended because every residual correlation vanished.
  bool exhausted = false;

  std::vector<std::size_t> active_set(std::size_t k) const {
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(k, order.size()))};
  }
};

/// Columns are centered and scaled to unit norm implicitly; y is centered, which
/// accounts for the constant column. max_terms defaults to min(N - 1, eligible).
inline LarPath lar_path(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y,
                        std::optional<std::size_t> max_terms = std::nullopt) {
  const Eigen::Index n = psi.rows();
  const Eigen::Index p = psi.cols();
  require(y.size() == n, "lar_path: response length does not match the design matrix");
  require(n >= 2, "lar_path: need at least two observations");

  LarPath path;
  const Eigen::RowVectorXd mean = psi.colwise().mean();
  Eigen::VectorXd scale(p);
  std::vector<char> eligible(static_cast<std::size_t>(p), 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double raw = psi.col(j).norm();
    const double centered = (psi.col(j).array() - mean(j)).matrix().norm();
    scale(j) = centered;
    if (!(centered > 1e-12 * std::max(1.0, raw))) {
      eligible[static_cast<std::size_t>(j)] = 0;
      path.excluded.push_back(static_cast<std::size_t>(j));
    }
  }
  const auto n_eligible = static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), 1));
  std::size_t limit = std::min(static_cast<std::size_t>(n - 1), n_eligible);
  if (max_terms) limit = std::min(limit, *max_terms);

  // Standardized column j dotted with a centered vector v is (psi_j . v) / scale_j.
  auto correlate = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd c = psi.transpose() * v;
    for (Eigen::Index j = 0; j < p; ++j) c(j) = eligible[static_cast<std::size_t>(j)] ? c(j) / scale(j) : 0.0;
    return c;
  };
  auto standardized = [&](Eigen::Index j) -> Eigen::VectorXd {
    return (psi.col(j).array() - mean(j)).matrix() / scale(j);
  };

  const Eigen::VectorXd residual0 = (y.array() - y.mean()).matrix();
  if (residual0.norm() <= 1e-13 * y.norm()) {
    path.exhausted = true;  // constant response: nothing to explain
    return path;
  }
  Eigen::VectorXd corr = correlate(residual0);

  std::vector<char> active(static_cast<std::size_t>(p), 0);
  std::vector<Eigen::Index> act;
  // Lower Cholesky factor of the active Gram matrix and the active standardized
  // columns, preallocated to the path limit.
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(limit), static_cast<Eigen::Index>(limit));
  Eigen::MatrixXd xa(n, static_cast<Eigen::Index>(limit));

  // Returns false when column j is numerically dependent on the active set.
  auto try_add = [&](Eigen::Index j) -> bool {
    const Eigen::VectorXd xj = standardized(j);
    const auto k = static_cast<Eigen::Index>(act.size());
    Eigen::VectorXd l;
    double d2 = 1.0;
    if (k > 0) {
      const Eigen::VectorXd g = xa.leftCols(k).transpose() * xj;
      l = chol.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(g);
      d2 = xj.squaredNorm() - l.squaredNorm();
    } else {
      d2 = xj.squaredNorm();
    }
    if (!(d2 > 1e-10)) return false;
    if (k > 0) chol.row(k).head(k) = l.transpose();
    chol(k, k) = std::sqrt(d2);
    xa.col(k) = xj;
    act.push_back(j);
    active[static_cast<std::size_t>(j)] = 1;
    path.order.push_back(static_cast<std::size_t>(j));
    return true;
  };

  auto drop = [&](Eigen::Index j) {
    eligible[static_cast<std::size_t>(j)] = 0;
    corr(j) = 0.0;
    path.excluded.push_back(static_cast<std::size_t>(j));
  };

  // First entrant: largest absolute correlation, ties to the lowest index.
  double c_max = 0.0;
  for (;;) {
    Eigen::Index best = -1;
    c_max = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!eligible[static_cast<std::size_t>(j)]) continue;
      if (std::abs(corr(j)) > c_max) {
        c_max = std::abs(corr(j));
        best = j;
      }
    }
    if (best < 0 || limit == 0) {
      path.exhausted = best < 0;
      return path;
    }
    if (try_add(best)) break;
    drop(best);
  }
  const double tolerance = 1e-12 * std::max(c_max, std::numeric_limits<double>::min());

  while (path.order.size() < limit) {
    const auto k = static_cast<Eigen::Index>(act.size());
    Eigen::VectorXd sign(k);
    for (Eigen::Index a = 0; a < k; ++a) sign(a) = corr(act[static_cast<std::size_t>(a)]) >= 0.0 ? 1.0 : -1.0;
    const auto lk = chol.topLeftCorner(k, k);
    const Eigen::VectorXd g_inv_s = lk.transpose().triangularView<Eigen::Upper>().solve(
        lk.triangularView<Eigen::Lower>().solve(sign));
    const double norm_a = 1.0 / std::sqrt(sign.dot(g_inv_s));
    const Eigen::VectorXd w = norm_a * g_inv_s;
    const Eigen::VectorXd u = xa.leftCols(k) * w;
    const Eigen::VectorXd a = correlate(u);

    double gamma = std::numeric_limits<double>::infinity();
    Eigen::Index next = -1;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!eligible[static_cast<std::size_t>(j)] || active[static_cast<std::size_t>(j)]) continue;
      for (const double cand : {(c_max - corr(j)) / (norm_a - a(j)), (c_max + corr(j)) / (norm_a + a(j))}) {
        if (cand > 1e-15 * c_max / norm_a && cand < gamma) {
          gamma = cand;
          next = j;
        }
      }
    }
    if (next < 0) gamma = c_max / norm_a;  // no competitor left: move to the OLS fit

    corr -= gamma * a;
    c_max -= gamma * norm_a;
    if (next < 0 || c_max <= tolerance) {
      path.exhausted = c_max <= tolerance;
      break;
    }
    if (!try_add(next)) drop(next);
  }
  return path;
}

}  // namespace pcgsa
