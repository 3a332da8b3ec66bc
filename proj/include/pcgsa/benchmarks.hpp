#pragma once

// Analytic test functions with closed-form Sobol' indices.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcgsa/error.hpp"
#include "pcgsa/probability.hpp"

namespace pcgsa::benchmarks {

struct Ishigami {
  double a = 7.0;
  double b = 0.1;

  static RandomVector inputs() {
    const double pi = std::numbers::pi;
    return RandomVector({{"x1", MarginalDistribution::uniform(-pi, pi)},
                         {"x2", MarginalDistribution::uniform(-pi, pi)},
                         {"x3", MarginalDistribution::uniform(-pi, pi)}});
  }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    require(x.size() == 3, "Ishigami takes three inputs");
    const double s = std::sin(x(0));
    const double t = std::sin(x(1));
    return s + a * t * t + b * std::pow(x(2), 4) * s;
  }

  double variance() const {
    const double pi4 = std::pow(std::numbers::pi, 4);
    return a * a / 8.0 + b * pi4 / 5.0 + b * b * pi4 * pi4 / 18.0 + 0.5;
  }
  double partial_1() const {
    const double pi4 = std::pow(std::numbers::pi, 4);
    const double c = 1.0 + b * pi4 / 5.0;
    return 0.5 * c * c;
  }
  double partial_2() const { return a * a / 8.0; }
  double partial_13() const {
    const double pi8 = std::pow(std::numbers::pi, 8);
    return b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);
  }
};

/// g(x) = prod_i (|4 x_i - 2| + a_i) / (1 + a_i), x_i ~ U(0, 1).
struct SobolG {
  std::vector<double> a;

  RandomVector inputs() const {
    std::vector<NamedMarginal> m;
    for (std::size_t i = 0; i < a.size(); ++i)
      m.push_back({"x" + std::to_string(i + 1), MarginalDistribution::uniform(0.0, 1.0)});
    return RandomVector(std::move(m));
  }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    require(static_cast<std::size_t>(x.size()) == a.size(), "g-function: dimension mismatch");
    double g = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      g *= (std::abs(4.0 * x(static_cast<Eigen::Index>(i)) - 2.0) + a[i]) / (1.0 + a[i]);
    return g;
  }

  double partial(std::size_t i) const { return 1.0 / (3.0 * (1.0 + a[i]) * (1.0 + a[i])); }

  double variance() const {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) v *= 1.0 + partial(i);
    return v - 1.0;
  }

  std::vector<double> first_order() const {
    std::vector<double> s(a.size());
    const double v = variance();
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = partial(i) / v;
    return s;
  }
};

/// Applies `f` to each row of `points`.
template <class F>
Eigen::VectorXd evaluate_rows(const F& f, const Eigen::MatrixXd& points) {
  Eigen::VectorXd y(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) y(i) = f(points.row(i).transpose());
  return y;
}

}  // namespace pcgsa::benchmarks
