#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "pcgsa/basis.hpp"
#include "pcgsa/multi_index.hpp"

using namespace pcgsa;

namespace {

// Brute force over the dense hypercube {0..p}^M.
std::set<std::vector<unsigned>> brute_force(std::size_t m, unsigned p, double q) {
  std::set<std::vector<unsigned>> out;
  std::vector<unsigned> a(m, 0);
  for (;;) {
    double s = 0.0;
    for (unsigned d : a) s += std::pow(static_cast<double>(d), q);
    if (s <= std::pow(static_cast<double>(p), q) * (1.0 + 1e-10)) out.insert(a);
    std::size_t k = 0;
    while (k < m && a[k] == p) a[k++] = 0;
    if (k == m) break;
    ++a[k];
  }
  return out;
}

std::set<std::vector<unsigned>> dense_set(const MultiIndexSet& s) {
  std::set<std::vector<unsigned>> out;
  for (const auto& m : s) out.insert(m.dense(s.dimension()));
  return out;
}

}  // namespace

TEST(Hyperbolic, SmallTotalDegree) { EXPECT_EQ(enumerate_hyperbolic(2, 2, 1.0).size(), 6u); }

TEST(Hyperbolic, PaperSetSizes) {
  EXPECT_EQ(enumerate_hyperbolic(78, 8, 0.5).size(), 18643u);
  EXPECT_EQ(enumerate_hyperbolic(78, 10, 0.5).size(), 106887u);
}

TEST(Hyperbolic, RejectsBadQ) {
  EXPECT_THROW(enumerate_hyperbolic(3, 2, 0.0), InvalidArgument);
  EXPECT_THROW(enumerate_hyperbolic(3, 2, 1.5), InvalidArgument);
  EXPECT_THROW(enumerate_hyperbolic(0, 2, 0.5), InvalidArgument);
}

TEST(Hyperbolic, MatchesBruteForce) {
  for (std::size_t m = 1; m <= 4; ++m)
    for (unsigned p = 0; p <= 6; ++p)
      for (double q : {0.3, 0.5, 0.75, 1.0})
        EXPECT_EQ(dense_set(enumerate_hyperbolic(m, p, q)), brute_force(m, p, q)) << m << " " << p << " " << q;
}

TEST(Hyperbolic, QOneEqualsTotalDegreeCount) {
  for (std::size_t m = 1; m <= 6; ++m)
    for (unsigned p = 0; p <= 6; ++p)
      EXPECT_EQ(boost::multiprecision::cpp_int(enumerate_hyperbolic(m, p, 1.0).size()), count_total_degree(m, p));
}

TEST(Hyperbolic, SetInvariants) {
  const auto s = enumerate_hyperbolic(6, 5, 0.6);
  EXPECT_LT(s.zero_position(), s.size());
  EXPECT_TRUE(s[0].is_zero());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_LE(s[k].q_norm(0.6), 5.0 * (1.0 + 1e-9));
    if (k > 0) {
      EXPECT_TRUE(graded_less(s[k - 1], s[k]));
      EXPECT_LE(s[k - 1].total_degree(), s[k].total_degree());
    }
  }
}

TEST(Hyperbolic, NestedInQAndP) {
  const auto narrow = enumerate_hyperbolic(5, 6, 0.4);
  const auto wide = enumerate_hyperbolic(5, 6, 0.8);
  for (const auto& m : narrow) EXPECT_TRUE(wide.contains(m));
  const auto low = enumerate_hyperbolic(5, 4, 0.8);
  for (const auto& m : low) EXPECT_TRUE(wide.contains(m));
}

TEST(Hyperbolic, DeterministicOrder) {
  const auto a = enumerate_hyperbolic(10, 4, 0.5);
  const auto b = enumerate_hyperbolic(10, 4, 0.5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(CountTotalDegree, Examples) {
  EXPECT_EQ(count_total_degree(2, 2), 6);
  EXPECT_EQ(count_total_degree(78, 8), boost::multiprecision::cpp_int("53060358690"));
  EXPECT_EQ(count_total_degree(78, 0), 1);
  EXPECT_EQ(count_total_degree(7, 0), 1);
  // binom(300, 150) needs more than 64 bits.
  EXPECT_EQ(count_total_degree(150, 150),
            boost::multiprecision::cpp_int("93759702772827452793193754439064084879232655700081358920472352712975170021839591675861424"));
}

TEST(MultiIndex, Basics) {
  const auto m = MultiIndex::from_dense({0, 2, 0, 1});
  EXPECT_EQ(m.total_degree(), 3u);
  EXPECT_EQ(m.interaction_order(), 2u);
  EXPECT_EQ(m.degree_of(1), 2u);
  EXPECT_EQ(m.degree_of(0), 0u);
  EXPECT_NEAR(m.q_norm(0.5), std::pow(std::sqrt(2.0) + 1.0, 2.0), 1e-12);
  EXPECT_THROW(MultiIndex({{1, 1}, {1, 2}}), InvalidArgument);
}

TEST(BasisRow, Examples) {
  const MultiIndexSet zero(2, {MultiIndex{}});
  const std::vector<PolynomialFamily> leg(2, PolynomialFamily::legendre);
  StandardPoint u{Eigen::Vector2d(0.3, -0.2)};
  EXPECT_EQ(eval_basis_row(zero, u, leg).values.size(), 1);
  EXPECT_DOUBLE_EQ(eval_basis_row(zero, u, leg).values(0), 1.0);

  const MultiIndexSet one(2, {MultiIndex::from_dense({1, 1})});
  EXPECT_NEAR(eval_basis_row(one, StandardPoint{Eigen::Vector2d(1.0, 1.0)}, leg).values(0), 3.0, 1e-14);
  EXPECT_THROW(eval_basis_row(one, StandardPoint{Eigen::Vector3d(0, 0, 0)}, leg), InvalidArgument);
}

TEST(BasisRow, ProductOfUnivariateValues) {
  const auto set = enumerate_hyperbolic(4, 5, 0.7);
  const std::vector<PolynomialFamily> fam{PolynomialFamily::legendre, PolynomialFamily::hermite,
                                          PolynomialFamily::legendre, PolynomialFamily::hermite};
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> nor;
  for (int trial = 0; trial < 20; ++trial) {
    StandardPoint u{Eigen::Vector4d(uni(gen), nor(gen), uni(gen), nor(gen))};
    const BasisRow row = eval_basis_row(set, u, fam);
    for (std::size_t k = 0; k < set.size(); ++k) {
      double ref = 1.0;
      for (std::size_t i = 0; i < 4; ++i)
        ref *= eval_orthonormal_1d(fam[i], static_cast<int>(set[k].degree_of(i)), u.coordinates(i));
      EXPECT_NEAR(row.values(k), ref, 1e-14 * std::max(1.0, std::abs(ref)));
    }
    Eigen::MatrixXd pts(1, 4);
    pts.row(0) = u.coordinates.transpose();
    EXPECT_LE((eval_basis_matrix(set, pts, fam).row(0).transpose() - row.values).cwiseAbs().maxCoeff(), 1e-14);
  }
}
