#pragma once

// Moments, Sobol' indices, screening and univariate effects computed directly
// from the coefficients of a sparse PCE.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"
#include "pcgsa/polynomials.hpp"
#include "pcgsa/regression.hpp"
#include "pcgsa/rng.hpp"
#include "pcgsa/sampling.hpp"

namespace pcgsa {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double sd() const { return std::sqrt(variance); }
};

inline Moments moments(const SparsePce& pce) {
  Moments m;
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    const double y = pce.coefficients(static_cast<Eigen::Index>(k));
    if (pce.active[k].is_zero())
      m.mean = y;
    else
      m.variance += y * y;
  }
  return m;
}

using VariablePair = std::pair<std::size_t, std::size_t>;  // first < second

inline Eigen::VectorXd sobol_first(const SparsePce& pce) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pce.inputs.size()));
  const double d = moments(pce).variance;
  if (d <= 0.0) return s;
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    const auto& terms = pce.active[k].terms();
    if (terms.size() != 1) continue;
    const double y = pce.coefficients(static_cast<Eigen::Index>(k));
    s(terms[0].var) += y * y;
  }
  return s / d;
}

/// Nonzero second-order indices only.
inline std::map<VariablePair, double> sobol_second(const SparsePce& pce) {
  std::map<VariablePair, double> s;
  const double d = moments(pce).variance;
  if (d <= 0.0) return s;
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    const auto& terms = pce.active[k].terms();
    if (terms.size() != 2) continue;
    const double y = pce.coefficients(static_cast<Eigen::Index>(k));
    if (y == 0.0) continue;
    s[{terms[0].var, terms[1].var}] += y * y;
  }
  for (auto& [pair, v] : s) v /= d;
  return s;
}

inline Eigen::VectorXd sobol_total(const SparsePce& pce) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pce.inputs.size()));
  const double d = moments(pce).variance;
  if (d <= 0.0) return s;
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    const double y = pce.coefficients(static_cast<Eigen::Index>(k));
    for (const auto& t : pce.active[k].terms()) s(t.var) += y * y;
  }
  return s / d;
}

/// Index of the subset u: terms whose nonzero variables are exactly u.
inline double sobol_group(const SparsePce& pce, std::vector<std::size_t> u) {
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  require(!u.empty(), "sobol_group: empty variable subset");
  require(u.back() < pce.inputs.size(), "sobol_group: variable index out of range");
  const double d = moments(pce).variance;
  if (d <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    const auto& terms = pce.active[k].terms();
    if (terms.size() != u.size()) continue;
    bool match = true;
    for (std::size_t t = 0; t < u.size() && match; ++t) match = terms[t].var == u[t];
    if (!match) continue;
    const double y = pce.coefficients(static_cast<Eigen::Index>(k));
    acc += y * y;
  }
  return acc / d;
}

/// Sum of S_u over every nonempty u; equals 1 up to roundoff when the variance is positive.
inline double sobol_partition_sum(const SparsePce& pce) {
  std::map<std::vector<std::size_t>, double> parts;
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    if (pce.active[k].is_zero()) continue;
    std::vector<std::size_t> u;
    for (const auto& t : pce.active[k].terms()) u.push_back(t.var);
    const double y = pce.coefficients(static_cast<Eigen::Index>(k));
    parts[u] += y * y;
  }
  const double d = moments(pce).variance;
  if (d <= 0.0) return 0.0;
  double s = 0.0;
  for (const auto& [u, v] : parts) s += v / d;
  return s;
}

/// Default property label: name up to the last underscore ("phi_D4" -> "phi").
inline std::string default_group_label(const std::string& name) {
  const auto pos = name.rfind('_');
  return pos == std::string::npos || pos == 0 ? name : name.substr(0, pos);
}

struct SobolReport {
  std::vector<std::string> names;
  ResponseScale scale = ResponseScale::original;
  double mean = 0.0;
  double total_variance = 0.0;
  Eigen::VectorXd first_order;
  Eigen::VectorXd total;
  std::map<VariablePair, double> second_order;
  std::map<std::vector<std::size_t>, double> group_indices;
  double threshold = 0.01;
  std::vector<bool> important;
  std::vector<std::pair<std::string, double>> grouped_sums;  // in order of first appearance

  /// Variables by total index, largest first (ties by index).
  std::vector<std::size_t> ranking() const {
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return total(static_cast<Eigen::Index>(a)) > total(static_cast<Eigen::Index>(b));
    });
    return order;
  }

  std::vector<std::size_t> top(std::size_t k = 10) const {
    auto r = ranking();
    r.resize(std::min(k, r.size()));
    return r;
  }

  std::size_t count_important() const {
    return static_cast<std::size_t>(std::count(important.begin(), important.end(), true));
  }
};

/// Important when S_i^T >= threshold.
inline std::vector<bool> screen(const Eigen::VectorXd& total, double threshold = 0.01) {
  require(threshold >= 0.0 && threshold <= 1.0, "screening threshold must lie in [0, 1]");
  std::vector<bool> important(static_cast<std::size_t>(total.size()));
  for (Eigen::Index i = 0; i < total.size(); ++i) important[static_cast<std::size_t>(i)] = total(i) >= threshold;
  return important;
}

inline std::vector<std::pair<std::string, double>> grouped_sums(const Eigen::VectorXd& first_order,
                                                                const std::vector<std::string>& labels) {
  require(labels.size() == static_cast<std::size_t>(first_order.size()), "one group label per variable");
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == labels[i]; });
    if (it == out.end()) {
      out.emplace_back(labels[i], 0.0);
      it = std::prev(out.end());
    }
    it->second += first_order(static_cast<Eigen::Index>(i));
  }
  return out;
}

/// Full report. `labels` defaults to default_group_label of each name;
/// `groups` lists extra subsets whose S_u is wanted.
inline SobolReport sobol_report(const SparsePce& pce, double threshold = 0.01,
                                std::optional<std::vector<std::string>> labels = std::nullopt,
                                const std::vector<std::vector<std::size_t>>& groups = {}) {
  SobolReport r;
  r.names = pce.inputs.names();
  r.scale = pce.scale;
  const Moments m = moments(pce);
  r.mean = m.mean;
  r.total_variance = m.variance;
  r.first_order = sobol_first(pce);
  r.total = sobol_total(pce);
  r.second_order = sobol_second(pce);
  for (const auto& u : groups) r.group_indices[u] = sobol_group(pce, u);
  r.threshold = threshold;
  r.important = screen(r.total, threshold);
  if (!labels) {
    labels.emplace();
    for (const auto& n : r.names) labels->push_back(default_group_label(n));
  }
  r.grouped_sums = grouped_sums(r.first_order, *labels);
  return r;
}

struct UnivariateEffect {
  std::size_t variable = 0;
  std::vector<double> coefficients;  // on psi_0..psi_d of the variable; index 0 is always 0
  std::vector<double> grid;          // physical coordinates
  std::vector<double> values;
};

/// Conditional expectation E[M(X) | X_i = x] minus the mean, from univariate terms.
inline UnivariateEffect univariate_effect(const SparsePce& pce, std::size_t i, const std::vector<double>& grid) {
  require(i < pce.inputs.size(), "univariate_effect: variable index out of range");
  UnivariateEffect e;
  e.variable = i;
  e.coefficients.assign(1, 0.0);
  for (std::size_t k = 0; k < pce.active.size(); ++k) {
    const auto& terms = pce.active[k].terms();
    if (terms.size() != 1 || terms[0].var != i) continue;
    const unsigned d = terms[0].degree;
    if (e.coefficients.size() <= d) e.coefficients.resize(d + 1, 0.0);
    e.coefficients[d] += pce.coefficients(static_cast<Eigen::Index>(k));
  }
  const auto& marginal = pce.inputs[i].marginal;
  const int degree = static_cast<int>(e.coefficients.size()) - 1;
  std::vector<double> psi(e.coefficients.size());
  e.grid = grid;
  e.values.reserve(grid.size());
  for (double x : grid) {
    eval_orthonormal_all(marginal.family(), degree, marginal.to_standard(x), psi);
    double v = 0.0;
    for (std::size_t d = 1; d < psi.size(); ++d) v += e.coefficients[d] * psi[d];
    e.values.push_back(v);
  }
  return e;
}

/// Integral of the effect against the marginal, by an exact Gauss rule.
inline double effect_mean(const SparsePce& pce, const UnivariateEffect& e) {
  const auto& marginal = pce.inputs[e.variable].marginal;
  const int degree = static_cast<int>(e.coefficients.size()) - 1;
  const GaussRule rule = gauss_rule(marginal.family(), degree / 2 + 1);
  std::vector<double> psi(e.coefficients.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    eval_orthonormal_all(marginal.family(), degree, rule.nodes[k], psi);
    double v = 0.0;
    for (std::size_t d = 1; d < psi.size(); ++d) v += e.coefficients[d] * psi[d];
    acc += rule.weights[k] * v;
  }
  return acc;
}

/// Evenly spaced grid over the support (uniform) or mean +- 3 sd (Gaussian).
inline std::vector<double> effect_grid(const MarginalDistribution& m, std::size_t n = 101) {
  require(n >= 2, "effect grid needs at least two points");
  double lo = m.first();
  double hi = m.second();
  if (m.kind() == DistributionKind::gaussian) {
    lo = m.first() - 3.0 * m.second();
    hi = m.first() + 3.0 * m.second();
  }
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

struct BoxStats {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

/// Quantiles with linear interpolation between order statistics.
inline BoxStats box_stats(std::vector<double> v) {
  require(!v.empty(), "box_stats: empty sample");
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

struct SubsampleStudy {
  std::vector<std::string> names;
  Eigen::MatrixXd totals;        // repetitions x M
  Eigen::MatrixXd first_orders;  // repetitions x M
  std::vector<unsigned> degrees;
  std::vector<BoxStats> total_stats;  // per variable
};

/// Fits a PCE on `repetitions` random subsets of `subset_size` rows and
/// collects the Sobol' indices. Repetition r draws its subset from
/// derive_seed(seed, r), so results do not depend on `workers`.
inline SubsampleStudy repeated_subsample_study(const ExperimentalDesign& design, const Eigen::VectorXd& responses,
                                               const RandomVector& rv, const FitOptions& options,
                                               std::size_t subset_size = 200, std::size_t repetitions = 100,
                                               std::uint64_t seed = 0, unsigned workers = 1) {
  require(responses.size() == static_cast<Eigen::Index>(design.size()), "responses do not match the design");
  require(subset_size > 2 && subset_size <= design.size(), "subset size must lie in (2, N]");
  require(repetitions >= 1, "need at least one repetition");
  const auto m = static_cast<Eigen::Index>(rv.size());
  SubsampleStudy study;
  study.names = rv.names();
  study.totals.resize(static_cast<Eigen::Index>(repetitions), m);
  study.first_orders.resize(static_cast<Eigen::Index>(repetitions), m);
  study.degrees.assign(repetitions, 0);
  std::vector<std::string> errors(repetitions);

  auto run = [&](std::size_t r) {
    try {
      RandomStream stream(derive_seed(seed, r));
      auto perm = stream.permutation(design.size());
      perm.resize(subset_size);
      std::sort(perm.begin(), perm.end());
      ExperimentalDesign sub;
      sub.points.resize(static_cast<Eigen::Index>(subset_size), m);
      Eigen::VectorXd y(static_cast<Eigen::Index>(subset_size));
      for (std::size_t k = 0; k < subset_size; ++k) {
        sub.points.row(static_cast<Eigen::Index>(k)) = design.points.row(static_cast<Eigen::Index>(perm[k]));
        y(static_cast<Eigen::Index>(k)) = responses(static_cast<Eigen::Index>(perm[k]));
      }
      const auto fit = adaptive_fit(sub, y, rv, options);
      study.totals.row(static_cast<Eigen::Index>(r)) = sobol_total(fit.first).transpose();
      study.first_orders.row(static_cast<Eigen::Index>(r)) = sobol_first(fit.first).transpose();
      study.degrees[r] = fit.first.degree;
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(repetitions)));
  if (n_workers == 1) {
    for (std::size_t r = 0; r < repetitions; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < repetitions; r += n_workers) run(r);
      });
    for (auto& t : pool) t.join();
  }
  for (std::size_t r = 0; r < repetitions; ++r)
    if (!errors[r].empty()) throw NumericalError("subsample repetition " + std::to_string(r) + ": " + errors[r]);

  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<double> col(study.totals.col(i).data(), study.totals.col(i).data() + repetitions);
    study.total_stats.push_back(box_stats(std::move(col)));
  }
  return study;
}

}  // namespace pcgsa
