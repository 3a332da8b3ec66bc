#pragma once

// Multi-indices and hyperbolic (q-norm) truncation sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pcgsa/error.hpp"

namespace pcgsa {

/// Degree tuple alpha stored sparsely: (variable, degree > 0), sorted by variable.
class MultiIndex {
public:
  struct Term {
    std::uint32_t var;
    std::uint32_t degree;
    bool operator==(const Term&) const = default;
  };

  MultiIndex() = default;

  explicit MultiIndex(std::vector<Term> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::erase_if(terms_, [](const Term& t) { return t.degree == 0; });
    for (std::size_t k = 1; k < terms_.size(); ++k)
      require(terms_[k].var != terms_[k - 1].var, "multi-index lists a variable twice");
  }

  static MultiIndex from_dense(const std::vector<unsigned>& degrees) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (degrees[i] > 0) terms.push_back({static_cast<std::uint32_t>(i), degrees[i]});
    return MultiIndex(std::move(terms));
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t interaction_order() const { return terms_.size(); }

  unsigned degree_of(std::size_t var) const {
    for (const auto& t : terms_)
      if (t.var == var) return t.degree;
    return 0;
  }

  unsigned total_degree() const {
    unsigned s = 0;
    for (const auto& t : terms_) s += t.degree;
    return s;
  }

  double q_norm(double q) const {
    require(q > 0.0 && q <= 1.0, "q must lie in (0, 1]");
    double s = 0.0;
    for (const auto& t : terms_) s += std::pow(static_cast<double>(t.degree), q);
    return std::pow(s, 1.0 / q);
  }

  std::vector<unsigned> dense(std::size_t dimension) const {
    std::vector<unsigned> d(dimension, 0);
    for (const auto& t : terms_) {
      require(t.var < dimension, "multi-index variable beyond the dimension");
      d[t.var] = t.degree;
    }
    return d;
  }

  /// "0:2 5:1" style sparse rendering; "0" for the zero index.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms_) {
      if (!s.empty()) s += ' ';
      s += std::to_string(t.var) + ':' + std::to_string(t.degree);
    }
    return s;
  }

  bool operator==(const MultiIndex&) const = default;

private:
  std::vector<Term> terms_;
};

/// Graded order, then descending lexicographic on the dense tuple, so that
/// (1,0,0) < (0,1,0) < (0,0,1) within a grade.
inline bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  const unsigned da = a.total_degree();
  const unsigned db = b.total_degree();
  if (da != db) return da < db;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (std::size_t k = 0; k < std::min(ta.size(), tb.size()); ++k) {
    if (ta[k].var != tb[k].var) return ta[k].var < tb[k].var;
    if (ta[k].degree != tb[k].degree) return ta[k].degree > tb[k].degree;
  }
  return ta.size() < tb.size();
}

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : m.terms()) {
      h = (h ^ t.var) * 0x100000001b3ULL;
      h = (h ^ t.degree) * 0x100000001b3ULL;
    }
    return h;
  }
};

struct Truncation {
  unsigned p = 0;
  double q = 1.0;
};

/// Ordered, duplicate-free set of multi-indices over `dimension` variables.
class MultiIndexSet {
public:
  MultiIndexSet() = default;
  MultiIndexSet(std::size_t dimension, std::vector<MultiIndex> indices, Truncation truncation = {})
      : dimension_(dimension), indices_(std::move(indices)), truncation_(truncation) {
    std::sort(indices_.begin(), indices_.end(), graded_less);
    for (std::size_t k = 1; k < indices_.size(); ++k)
      require(!(indices_[k] == indices_[k - 1]), "duplicate multi-index in set");
    for (const auto& m : indices_)
      for (const auto& t : m.terms())
        require(t.var < dimension_, "multi-index variable beyond the dimension");
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const Truncation& truncation() const { return truncation_; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Position of the zero index, or size() if absent.
  std::size_t zero_position() const {
    for (std::size_t k = 0; k < indices_.size(); ++k)
      if (indices_[k].is_zero()) return k;
    return indices_.size();
  }

  bool contains(const MultiIndex& m) const {
    return std::binary_search(indices_.begin(), indices_.end(), m, graded_less);
  }

  unsigned max_degree_of(std::size_t var) const {
    unsigned d = 0;
    for (const auto& m : indices_) d = std::max(d, m.degree_of(var));
    return d;
  }

  /// Sub-set picked by positions (kept in graded order).
  MultiIndexSet subset(const std::vector<std::size_t>& positions) const {
    std::vector<MultiIndex> picked;
    picked.reserve(positions.size());
    for (auto k : positions) picked.push_back(indices_.at(k));
    return MultiIndexSet(dimension_, std::move(picked), truncation_);
  }

private:
  std::size_t dimension_ = 0;
  std::vector<MultiIndex> indices_;
  Truncation truncation_;
};

namespace detail {
// Relative slack on sum(alpha_i^q) <= p^q; keeps tuples sitting exactly on the
// boundary, e.g. (2,2) for p = 8, q = 0.5, despite rounding in pow().
inline constexpr double kTruncationSlack = 1e-10;
}  // namespace detail

/// All alpha with (sum alpha_i^q)^(1/q) <= p. Enumerates only nonzero entries
/// (choose the next active variable, then its degree) so the cost scales with
/// the size of the result rather than with the total-degree hypercube.
inline MultiIndexSet enumerate_hyperbolic(std::size_t dimension, unsigned p, double q) {
  require(dimension >= 1, "dimension must be >= 1");
  require(q > 0.0 && q <= 1.0, "q must lie in (0, 1]");
  const double budget = std::pow(static_cast<double>(p), q) * (1.0 + detail::kTruncationSlack);

  std::vector<double> cost(p + 1);
  for (unsigned d = 0; d <= p; ++d) cost[d] = std::pow(static_cast<double>(d), q);

  std::vector<MultiIndex> out;
  std::vector<MultiIndex::Term> stack;
  std::function<void(std::uint32_t, double)> descend = [&](std::uint32_t first_var, double used) {
    out.emplace_back(stack);
    for (std::uint32_t v = first_var; v < dimension; ++v) {
      bool any = false;
      for (unsigned d = 1; d <= p && used + cost[d] <= budget; ++d) {
        any = true;
        stack.push_back({v, d});
        descend(v + 1, used + cost[d]);
        stack.pop_back();
      }
      if (!any) break;  // the cheapest degree does not fit; nor will later variables
    }
  };
  descend(0, 0.0);
  return MultiIndexSet(dimension, std::move(out), Truncation{p, q});
}

/// Size of the full total-degree basis, binom(M + p, p), exactly.
inline boost::multiprecision::cpp_int count_total_degree(std::size_t dimension, unsigned p) {
  boost::multiprecision::cpp_int result = 1;
  for (unsigned k = 1; k <= p; ++k) {
    result *= static_cast<unsigned long long>(dimension + k);
    result /= k;  // exact: running product is binom(M + k, k)
  }
  return result;
}

}  // namespace pcgsa
