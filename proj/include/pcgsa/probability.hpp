#pragma once

// Independent input random vectors and the isoprobabilistic map to standard
// space: uniform [a, b] -> [-1, 1] (Legendre), gaussian -> N(0, 1) (Hermite).

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "pcgsa/error.hpp"
#include "pcgsa/polynomials.hpp"

namespace pcgsa {

enum class DistributionKind { uniform, gaussian };

class MarginalDistribution {
public:
  static MarginalDistribution uniform(double lower, double upper) {
    require(std::isfinite(lower) && std::isfinite(upper) && lower < upper,
            "uniform marginal needs finite lower < upper");
    return MarginalDistribution(DistributionKind::uniform, lower, upper);
  }

  static MarginalDistribution gaussian(double mean, double sd) {
    require(std::isfinite(mean) && std::isfinite(sd) && sd > 0.0,
            "gaussian marginal needs a finite mean and sd > 0");
    return MarginalDistribution(DistributionKind::gaussian, mean, sd);
  }

  DistributionKind kind() const { return kind_; }
  // uniform: (lower, upper); gaussian: (mean, sd)
  double first() const { return a_; }
  double second() const { return b_; }

  PolynomialFamily family() const {
    return kind_ == DistributionKind::uniform ? PolynomialFamily::legendre
                                              : PolynomialFamily::hermite;
  }

  bool in_support(double x) const {
    return kind_ == DistributionKind::uniform ? (x >= a_ && x <= b_) : std::isfinite(x);
  }

  double to_standard(double x) const {
    if (!in_support(x)) throw InvalidArgument("value outside the marginal support");
    if (kind_ == DistributionKind::gaussian) return (x - a_) / b_;
    const double u = (2.0 * x - (a_ + b_)) / (b_ - a_);
    return u < -1.0 ? -1.0 : (u > 1.0 ? 1.0 : u);  // rounding only; support already checked
  }

  double from_standard(double u) const {
    if (kind_ == DistributionKind::gaussian) return a_ + b_ * u;
    if (!(std::abs(u) <= 1.0)) throw InvalidArgument("standard uniform coordinate outside [-1, 1]");
    if (u == -1.0) return a_;
    if (u == 1.0) return b_;
    return 0.5 * (a_ + b_) + 0.5 * (b_ - a_) * u;
  }

  double cdf(double x) const {
    if (kind_ == DistributionKind::gaussian)
      return boost::math::cdf(boost::math::normal_distribution<>(a_, b_), x);
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    return (x - a_) / (b_ - a_);
  }

  /// Inverse CDF on [0, 1) (gaussian: open interval (0, 1)).
  double quantile(double p) const {
    if (kind_ == DistributionKind::gaussian) {
      require(p > 0.0 && p < 1.0, "gaussian quantile needs p in (0, 1)");
      return boost::math::quantile(boost::math::normal_distribution<>(a_, b_), p);
    }
    require(p >= 0.0 && p <= 1.0, "uniform quantile needs p in [0, 1]");
    const double x = a_ + (b_ - a_) * p;
    return x > b_ ? b_ : x;
  }

  bool operator==(const MarginalDistribution&) const = default;

private:
  MarginalDistribution(DistributionKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  DistributionKind kind_;
  double a_;
  double b_;
};

struct NamedMarginal {
  std::string name;
  MarginalDistribution marginal;
  bool operator==(const NamedMarginal&) const = default;
};

/// Ordered, independent marginals. No correlation data exists by construction.
class RandomVector {
public:
  explicit RandomVector(std::vector<NamedMarginal> marginals) : marginals_(std::move(marginals)) {
    require(!marginals_.empty(), "random vector needs at least one variable");
    std::set<std::string> seen;
    for (const auto& m : marginals_) {
      require(!m.name.empty(), "variable names must be nonempty");
      require(seen.insert(m.name).second, "duplicate variable name: " + m.name);
    }
  }

  std::size_t size() const { return marginals_.size(); }
  const NamedMarginal& operator[](std::size_t i) const { return marginals_[i]; }
  const std::vector<NamedMarginal>& marginals() const { return marginals_; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(marginals_.size());
    for (const auto& m : marginals_) out.push_back(m.name);
    return out;
  }

  std::vector<PolynomialFamily> families() const {
    std::vector<PolynomialFamily> out;
    out.reserve(marginals_.size());
    for (const auto& m : marginals_) out.push_back(m.marginal.family());
    return out;
  }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < marginals_.size(); ++i)
      if (marginals_[i].name == name) return i;
    throw InvalidArgument("unknown variable: " + name);
  }

  bool operator==(const RandomVector&) const = default;

private:
  std::vector<NamedMarginal> marginals_;
};

struct PhysicalPoint {
  Eigen::VectorXd coordinates;
};

struct StandardPoint {
  Eigen::VectorXd coordinates;
};

inline StandardPoint to_standard(const PhysicalPoint& x, const RandomVector& rv) {
  require(static_cast<std::size_t>(x.coordinates.size()) == rv.size(),
          "point dimension does not match the random vector");
  StandardPoint u{Eigen::VectorXd(x.coordinates.size())};
  for (Eigen::Index j = 0; j < x.coordinates.size(); ++j) {
    const auto& m = rv[static_cast<std::size_t>(j)];
    if (!m.marginal.in_support(x.coordinates(j)))
      throw InvalidArgument("coordinate " + m.name + " outside its support");
    u.coordinates(j) = m.marginal.to_standard(x.coordinates(j));
  }
  return u;
}

inline PhysicalPoint from_standard(const StandardPoint& u, const RandomVector& rv) {
  require(static_cast<std::size_t>(u.coordinates.size()) == rv.size(),
          "point dimension does not match the random vector");
  PhysicalPoint x{Eigen::VectorXd(u.coordinates.size())};
  for (Eigen::Index j = 0; j < u.coordinates.size(); ++j)
    x.coordinates(j) = rv[static_cast<std::size_t>(j)].marginal.from_standard(u.coordinates(j));
  return x;
}

/// Row-wise to_standard over an N x M matrix of physical points.
inline Eigen::MatrixXd to_standard_rows(const Eigen::MatrixXd& points, const RandomVector& rv) {
  require(static_cast<std::size_t>(points.cols()) == rv.size(),
          "design dimension does not match the random vector");
  Eigen::MatrixXd u(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const auto& m = rv[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (!m.marginal.in_support(points(i, j)))
        throw InvalidArgument("row " + std::to_string(i) + ": " + m.name + " outside its support");
      u(i, j) = m.marginal.to_standard(points(i, j));
    }
  }
  return u;
}

}  // namespace pcgsa
