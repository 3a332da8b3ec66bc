#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pcgsa/probability.hpp"

using namespace pcgsa;

namespace {

RandomVector mixed() {
  return RandomVector({{"a", MarginalDistribution::uniform(5.0, 25.0)},
                       {"b", MarginalDistribution::uniform(0.01, 1.0)},
                       {"c", MarginalDistribution::gaussian(2.0, 3.0)},
                       {"d", MarginalDistribution::uniform(-30.0, 30.0)}});
}

}  // namespace

TEST(Marginal, RejectsDegenerateParameters) {
  EXPECT_THROW(MarginalDistribution::uniform(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(MarginalDistribution::uniform(2.0, 1.0), InvalidArgument);
  EXPECT_THROW(MarginalDistribution::gaussian(0.0, 0.0), InvalidArgument);
  EXPECT_THROW(MarginalDistribution::gaussian(0.0, -1.0), InvalidArgument);
  EXPECT_THROW(MarginalDistribution::uniform(0.0, INFINITY), InvalidArgument);
}

TEST(Marginal, FamiliesFollowKind) {
  EXPECT_EQ(MarginalDistribution::uniform(0, 1).family(), PolynomialFamily::legendre);
  EXPECT_EQ(MarginalDistribution::gaussian(0, 1).family(), PolynomialFamily::hermite);
}

TEST(ToStandard, UniformMidpointAndBounds) {
  EXPECT_DOUBLE_EQ(MarginalDistribution::uniform(5, 25).to_standard(15), 0.0);
  EXPECT_DOUBLE_EQ(MarginalDistribution::uniform(0.01, 1).to_standard(1.0), 1.0);
  EXPECT_DOUBLE_EQ(MarginalDistribution::uniform(0.01, 1).to_standard(0.01), -1.0);
}

TEST(ToStandard, Gaussian) { EXPECT_DOUBLE_EQ(MarginalDistribution::gaussian(2, 3).to_standard(8), 2.0); }

TEST(ToStandard, OutOfSupportIsRejectedNotClamped) {
  const auto m = MarginalDistribution::uniform(5, 25);
  EXPECT_THROW(m.to_standard(25.0000001), InvalidArgument);
  EXPECT_THROW(m.to_standard(4.9), InvalidArgument);
  EXPECT_THROW(m.to_standard(NAN), InvalidArgument);
}

TEST(ToStandard, DimensionMismatch) {
  const auto rv = mixed();
  EXPECT_THROW(to_standard(PhysicalPoint{Eigen::VectorXd::Zero(3)}, rv), InvalidArgument);
  EXPECT_THROW(from_standard(StandardPoint{Eigen::VectorXd::Zero(5)}, rv), InvalidArgument);
}

TEST(FromStandard, Examples) {
  EXPECT_DOUBLE_EQ(MarginalDistribution::uniform(-30, 30).from_standard(0.0), 0.0);
  EXPECT_DOUBLE_EQ(MarginalDistribution::uniform(0.00240, 0.00360).from_standard(1.0), 0.00360);
  EXPECT_THROW(MarginalDistribution::uniform(0, 1).from_standard(1.5), InvalidArgument);
}

TEST(RoundTrip, ThousandRandomPoints) {
  const auto rv = mixed();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> z;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    StandardPoint s{Eigen::VectorXd(4)};
    s.coordinates << u(gen), u(gen), z(gen), u(gen);
    const PhysicalPoint x = from_standard(s, rv);
    const StandardPoint back = to_standard(x, rv);
    worst = std::max(worst, (back.coordinates - s.coordinates).cwiseAbs().maxCoeff());
    const PhysicalPoint again = from_standard(back, rv);
    for (Eigen::Index j = 0; j < 4; ++j)
      EXPECT_LE(std::abs(again.coordinates(j) - x.coordinates(j)), 1e-14 * std::max(1.0, std::abs(x.coordinates(j))));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ToStandard, StrictlyMonotone) {
  const auto m = MarginalDistribution::uniform(0.0084, 0.116);
  double prev = -2.0;
  for (int k = 0; k <= 1000; ++k) {
    const double x = 0.0084 + (0.116 - 0.0084) * k / 1000.0;
    const double u = m.to_standard(std::min(x, 0.116));
    EXPECT_GT(u, prev);
    prev = u;
  }
  const auto g = MarginalDistribution::gaussian(1.0, 0.5);
  EXPECT_LT(g.to_standard(-3.0), g.to_standard(-2.999));
}

TEST(RandomVector, NamesMustBeUniqueAndNonempty) {
  EXPECT_THROW(RandomVector({}), InvalidArgument);
  EXPECT_THROW(RandomVector({{"x", MarginalDistribution::uniform(0, 1)}, {"x", MarginalDistribution::uniform(0, 1)}}),
               InvalidArgument);
  const auto rv = mixed();
  EXPECT_EQ(rv.index_of("c"), 2u);
  EXPECT_THROW(rv.index_of("zz"), InvalidArgument);
}

TEST(Marginal, QuantileInvertsCdf) {
  const auto g = MarginalDistribution::gaussian(2.0, 3.0);
  for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) EXPECT_NEAR(g.cdf(g.quantile(p)), p, 1e-13);
  const auto u = MarginalDistribution::uniform(-1.0, 3.0);
  EXPECT_DOUBLE_EQ(u.quantile(0.25), 0.0);
  EXPECT_DOUBLE_EQ(u.cdf(0.0), 0.25);
}
