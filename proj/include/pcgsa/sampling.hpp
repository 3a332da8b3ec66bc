#pragma once

// Latin hypercube designs and nested-LHS enrichment.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"
#include "pcgsa/probability.hpp"
#include "pcgsa/rng.hpp"

namespace pcgsa {

struct ExperimentalDesign {
  Eigen::MatrixXd points;                     // N x M, physical space
  std::optional<Eigen::VectorXd> responses;   // length N when present
  std::uint64_t seed = 0;
  std::string id;                             // e.g. "lhs-n2000-s1"
  std::optional<std::string> enrichment_of;   // id of the base design, if any

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(points.cols()); }
};

/// Stratum (0-based) of probability level p on an n-level grid.
inline std::size_t stratum_of(double p, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::floor(p * static_cast<double>(n)));
  return std::min(k, n - 1);
}

/// One sample per equal-probability stratum in every coordinate; in-stratum
/// position uniform random. Column j draws only from substream j.
inline ExperimentalDesign lhs(std::size_t n, const RandomVector& rv, std::uint64_t seed) {
  require(n >= 1, "LHS needs n >= 1");
  ExperimentalDesign design;
  design.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rv.size()));
  design.seed = seed;
  design.id = "lhs-n" + std::to_string(n) + "-s" + std::to_string(seed);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < rv.size(); ++j) {
    RandomStream stream(derive_seed(seed, j));
    const auto perm = stream.permutation(n);
    const auto& marginal = rv[j].marginal;
    for (std::size_t i = 0; i < n; ++i) {
      double p = (static_cast<double>(perm[i]) + stream.uniform()) * inv_n;
      if (marginal.kind() == DistributionKind::gaussian)
        p = std::clamp(p, 1e-300, std::nextafter(1.0, 0.0));
      design.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = marginal.quantile(p);
    }
  }
  return design;
}

/// Adds n_add points so that base + enrichment is approximately an LHS of size
/// N + n_add. Per coordinate: fill empty strata of the refined grid first (random
/// choice when there are more empty strata than new points), then the least
/// occupied ones; place uniformly inside; finally pair columns at random.
inline ExperimentalDesign nested_lhs_enrich(const ExperimentalDesign& base, std::size_t n_add,
                                            const RandomVector& rv, std::uint64_t seed) {
  require(n_add >= 1, "enrichment needs n_add >= 1");
  require(base.dimension() == rv.size(), "base design dimension does not match the random vector");
  const std::size_t n_base = base.size();
  const std::size_t total = n_base + n_add;
  ExperimentalDesign out;
  out.points.resize(static_cast<Eigen::Index>(n_add), static_cast<Eigen::Index>(rv.size()));
  out.seed = seed;
  out.id = base.id + "+enrich-n" + std::to_string(n_add) + "-s" + std::to_string(seed);
  out.enrichment_of = base.id;
  const double inv_total = 1.0 / static_cast<double>(total);

  for (std::size_t j = 0; j < rv.size(); ++j) {
    RandomStream stream(derive_seed(seed, j));
    const auto& marginal = rv[j].marginal;
    std::vector<std::size_t> count(total, 0);
    for (std::size_t i = 0; i < n_base; ++i)
      ++count[stratum_of(marginal.cdf(base.points(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j))),
                         total)];

    std::vector<std::size_t> chosen;
    chosen.reserve(n_add);
    while (chosen.size() < n_add) {
      const std::size_t level = *std::min_element(count.begin(), count.end());
      std::vector<std::size_t> candidates;
      for (std::size_t k = 0; k < total; ++k)
        if (count[k] == level) candidates.push_back(k);
      stream.shuffle(candidates);
      const std::size_t take = std::min(candidates.size(), n_add - chosen.size());
      for (std::size_t t = 0; t < take; ++t) {
        chosen.push_back(candidates[t]);
        ++count[candidates[t]];
      }
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<double> column(n_add);
    for (std::size_t t = 0; t < n_add; ++t) {
      double p = (static_cast<double>(chosen[t]) + stream.uniform()) * inv_total;
      if (marginal.kind() == DistributionKind::gaussian)
        p = std::clamp(p, 1e-300, std::nextafter(1.0, 0.0));
      column[t] = marginal.quantile(p);
    }
    stream.shuffle(column);
    for (std::size_t t = 0; t < n_add; ++t)
      out.points(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = column[t];
  }
  return out;
}

/// Stacks two designs (e.g. a base and its enrichment) into one.
inline ExperimentalDesign join_designs(const ExperimentalDesign& a, const ExperimentalDesign& b) {
  require(a.dimension() == b.dimension(), "cannot join designs of different dimension");
  ExperimentalDesign out;
  out.points.resize(a.points.rows() + b.points.rows(), a.points.cols());
  out.points << a.points, b.points;
  if (a.responses && b.responses) {
    Eigen::VectorXd y(a.responses->size() + b.responses->size());
    y << *a.responses, *b.responses;
    out.responses = std::move(y);
  }
  out.seed = a.seed;
  out.id = a.id + "|" + b.id;
  return out;
}

}  // namespace pcgsa
