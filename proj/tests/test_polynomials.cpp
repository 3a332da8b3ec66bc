#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "pcgsa/polynomials.hpp"

using namespace pcgsa;

namespace {

// Orthonormal Legendre of degree 8 at x = 3/10, from the closed-form
// coefficients of P_8 in exact rational arithmetic.
double legendre8_at_0_3() {
  using boost::multiprecision::cpp_rational;
  const cpp_rational x(3, 10);
  const long coeff[] = {35, 0, -1260, 0, 6930, 0, -12012, 0, 6435};
  cpp_rational p = 0, xp = 1;
  for (long c : coeff) {
    p += c * xp;
    xp *= x;
  }
  p /= 128;
  using F = boost::multiprecision::cpp_bin_float_50;
  const F v = F(p) * sqrt(F(17));
  return static_cast<double>(v);
}

// Probabilists' orthonormal Hermite from Boost's physicists' polynomials.
double hermite_oracle(unsigned n, double x) {
  return boost::math::hermite(n, x / std::sqrt(2.0)) * std::pow(2.0, -0.5 * n) /
         std::sqrt(boost::math::factorial<double>(n));
}

double gram_error(PolynomialFamily f, int degree) {
  const GaussRule rule = gauss_rule(f, degree + 1);
  std::vector<double> v(static_cast<std::size_t>(degree) + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    eval_orthonormal_all(f, degree, rule.nodes[k], v);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; b <= degree; ++b) gram(a, b) += rule.weights[k] * v[a] * v[b];
  }
  return (gram - Eigen::MatrixXd::Identity(degree + 1, degree + 1)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Orthonormal1d, LowDegreeExamples) {
  EXPECT_NEAR(eval_orthonormal_1d(PolynomialFamily::legendre, 1, 1.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(eval_orthonormal_1d(PolynomialFamily::hermite, 2, 0.0), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(eval_orthonormal_1d(PolynomialFamily::legendre, 0, -1.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_orthonormal_1d(PolynomialFamily::hermite, 0, 5.0), 1.0);
}

TEST(Orthonormal1d, Legendre8MatchesExactRational) {
  EXPECT_NEAR(eval_orthonormal_1d(PolynomialFamily::legendre, 8, 0.3), legendre8_at_0_3(), 1e-13);
}

TEST(Orthonormal1d, LegendreRejectsOutsideInterval) {
  EXPECT_THROW(eval_orthonormal_1d(PolynomialFamily::legendre, 3, 1.0000001), InvalidArgument);
  EXPECT_THROW(eval_orthonormal_1d(PolynomialFamily::legendre, 3, NAN), InvalidArgument);
  EXPECT_THROW(eval_orthonormal_1d(PolynomialFamily::legendre, -1, 0.0), InvalidArgument);
}

TEST(Orthonormal1d, LegendreMatchesBoost) {
  for (int n = 0; n <= 30; ++n)
    for (double x : {-1.0, -0.77, -0.1, 0.0, 0.42, 0.93, 1.0})
      EXPECT_NEAR(eval_orthonormal_1d(PolynomialFamily::legendre, n, x),
                  std::sqrt(2.0 * n + 1.0) * boost::math::legendre_p(n, x), 1e-12)
          << "n=" << n << " x=" << x;
}

TEST(Orthonormal1d, HermiteMatchesBoost) {
  for (unsigned n = 0; n <= 30; ++n)
    for (double x : {-4.0, -1.3, 0.0, 0.5, 2.2, 6.0}) {
      const double ref = hermite_oracle(n, x);
      EXPECT_NEAR(eval_orthonormal_1d(PolynomialFamily::hermite, static_cast<int>(n), x), ref,
                  1e-11 * std::max(1.0, std::abs(ref)))
          << "n=" << n << " x=" << x;
    }
}

TEST(GaussRule, LegendreNodesMatchBoost) {
  // Boost's 10-point rule is on [-1, 1] with weights summing to 2 and stores
  // the nonnegative half of the symmetric nodes.
  const GaussRule rule = gauss_rule(PolynomialFamily::legendre, 10);
  const auto& abscissa = boost::math::quadrature::gauss<double, 10>::abscissa();
  const auto& weights = boost::math::quadrature::gauss<double, 10>::weights();
  for (std::size_t k = 0; k < abscissa.size(); ++k) {
    EXPECT_NEAR(rule.nodes[5 + k], abscissa[k], 1e-14);
    EXPECT_NEAR(rule.nodes[4 - k], -abscissa[k], 1e-14);
    EXPECT_NEAR(rule.weights[5 + k], 0.5 * weights[k], 1e-14);
  }
}

TEST(GaussRule, HermiteReproducesGaussianMoments) {
  const GaussRule rule = gauss_rule(PolynomialFamily::hermite, 12);
  double double_factorial = 1.0;  // (2k-1)!!
  for (int k = 0; k <= 11; ++k) {
    double even = 0.0, odd = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      even += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      odd += rule.weights[i] * std::pow(rule.nodes[i], 2 * k + 1);
    }
    EXPECT_NEAR(even / double_factorial, 1.0, 1e-11) << "k=" << k;
    EXPECT_NEAR(odd, 0.0, 1e-8 * double_factorial);
    double_factorial *= 2 * k + 1;
  }
}

TEST(Orthonormality, GramMatricesUpToDegree15) {
  for (int p = 0; p <= 15; ++p) {
    EXPECT_LE(gram_error(PolynomialFamily::legendre, p), 1e-10) << p;
    EXPECT_LE(gram_error(PolynomialFamily::hermite, p), 1e-10) << p;
  }
}

TEST(Orthonormal1d, StableAtDegree40) {
  std::vector<double> v(41);
  eval_orthonormal_all(PolynomialFamily::legendre, 40, 1.0, v);
  for (int n = 0; n <= 40; ++n) EXPECT_NEAR(v[n], std::sqrt(2.0 * n + 1.0), 1e-12);
  EXPECT_LE(gram_error(PolynomialFamily::legendre, 30), 1e-9);
}
