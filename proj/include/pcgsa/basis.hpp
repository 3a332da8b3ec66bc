#pragma once

// Tensorized orthonormal basis: Psi_alpha(u) = prod_i psi_{alpha_i}(u_i).

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"
#include "pcgsa/multi_index.hpp"
#include "pcgsa/polynomials.hpp"
#include "pcgsa/probability.hpp"

namespace pcgsa {

struct BasisRow {
  Eigen::VectorXd values;
};

inline BasisRow eval_basis_row(const MultiIndexSet& set, const StandardPoint& u,
                               const std::vector<PolynomialFamily>& families) {
  const auto m = set.dimension();
  require(static_cast<std::size_t>(u.coordinates.size()) == m && families.size() == m,
          "basis row: dimension mismatch");
  std::vector<std::vector<double>> univariate(m);
  for (std::size_t i = 0; i < m; ++i) {
    const unsigned d = set.max_degree_of(i);
    univariate[i].resize(d + 1);
    eval_orthonormal_all(families[i], static_cast<int>(d), u.coordinates(static_cast<Eigen::Index>(i)),
                         univariate[i]);
  }
  BasisRow row{Eigen::VectorXd(static_cast<Eigen::Index>(set.size()))};
  for (std::size_t k = 0; k < set.size(); ++k) {
    double v = 1.0;
    for (const auto& t : set[k].terms()) v *= univariate[t.var][t.degree];
    row.values(static_cast<Eigen::Index>(k)) = v;
  }
  return row;
}

/// N x card(set) regression matrix for N standard-space points (one per row).
inline Eigen::MatrixXd eval_basis_matrix(const MultiIndexSet& set, const Eigen::MatrixXd& standard_points,
                                         const std::vector<PolynomialFamily>& families) {
  const auto m = set.dimension();
  require(static_cast<std::size_t>(standard_points.cols()) == m && families.size() == m,
          "basis matrix: dimension mismatch");
  const Eigen::Index n = standard_points.rows();

  // Per variable: n x (max degree + 1) table of univariate values.
  std::vector<Eigen::MatrixXd> tables(m);
  std::vector<double> buffer;
  for (std::size_t i = 0; i < m; ++i) {
    const unsigned d = set.max_degree_of(i);
    if (d == 0) continue;
    tables[i].resize(n, d + 1);
    buffer.resize(d + 1);
    for (Eigen::Index r = 0; r < n; ++r) {
      eval_orthonormal_all(families[i], static_cast<int>(d), standard_points(r, static_cast<Eigen::Index>(i)),
                           buffer);
      for (unsigned k = 0; k <= d; ++k) tables[i](r, k) = buffer[k];
    }
  }

  Eigen::MatrixXd psi(n, static_cast<Eigen::Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) {
    auto col = psi.col(static_cast<Eigen::Index>(k));
    col.setOnes();
    for (const auto& t : set[k].terms()) col.array() *= tables[t.var].col(t.degree).array();
  }
  return psi;
}

}  // namespace pcgsa
