#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "pcgsa/sampling.hpp"

using namespace pcgsa;

namespace {

RandomVector uniforms(std::size_t m) {
  std::vector<NamedMarginal> v;
  for (std::size_t j = 0; j < m; ++j) v.push_back({"x" + std::to_string(j), MarginalDistribution::uniform(-1.0 - j, 2.0 + j)});
  return RandomVector(std::move(v));
}

// Number of points per stratum of an n-level grid, per column.
std::vector<std::vector<std::size_t>> occupancy(const Eigen::MatrixXd& pts, const RandomVector& rv, std::size_t n) {
  std::vector<std::vector<std::size_t>> out(rv.size(), std::vector<std::size_t>(n, 0));
  for (std::size_t j = 0; j < rv.size(); ++j)
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      ++out[j][stratum_of(rv[j].marginal.cdf(pts(i, static_cast<Eigen::Index>(j))), n)];
  return out;
}

bool stratified(const Eigen::MatrixXd& pts, const RandomVector& rv) {
  for (const auto& col : occupancy(pts, rv, static_cast<std::size_t>(pts.rows())))
    for (auto c : col)
      if (c != 1) return false;
  return true;
}

}  // namespace

TEST(Lhs, FourByTwoQuartiles) {
  const auto rv = uniforms(2);
  const auto d = lhs(4, rv, 11);
  EXPECT_EQ(d.size(), 4u);
  EXPECT_TRUE(stratified(d.points, rv));
}

TEST(Lhs, Deterministic) {
  const auto rv = uniforms(5);
  EXPECT_EQ(lhs(50, rv, 3).points, lhs(50, rv, 3).points);
  EXPECT_NE(lhs(50, rv, 3).points, lhs(50, rv, 4).points);
}

TEST(Lhs, PaperSizedDesign) {
  const auto rv = uniforms(78);
  const auto d = lhs(2000, rv, 1);
  EXPECT_EQ(d.points.rows(), 2000);
  EXPECT_EQ(d.points.cols(), 78);
  EXPECT_TRUE(stratified(d.points, rv));
}

TEST(Lhs, GaussianColumnStratified) {
  const RandomVector rv({{"g", MarginalDistribution::gaussian(1.0, 2.0)}, {"u", MarginalDistribution::uniform(0, 1)}});
  const auto d = lhs(300, rv, 9);
  EXPECT_TRUE(d.points.allFinite());
  EXPECT_TRUE(stratified(d.points, rv));
}

TEST(Lhs, AddingColumnsKeepsEarlierColumns) {
  const auto small = lhs(40, uniforms(3), 5);
  const auto big = lhs(40, uniforms(6), 5);
  EXPECT_EQ(small.points, big.points.leftCols(3));
}

TEST(Lhs, RejectsEmpty) { EXPECT_THROW(lhs(0, uniforms(2), 1), InvalidArgument); }

TEST(Enrichment, SmallCaseFillsAllQuartiles) {
  const auto rv = uniforms(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto base = lhs(2, rv, seed);
    const auto add = nested_lhs_enrich(base, 2, rv, seed + 100);
    const auto joint = join_designs(base, add);
    // The base occupies one quartile per half; the two new points take the rest.
    const auto occ = occupancy(joint.points, rv, 4);
    for (auto c : occ[0]) EXPECT_EQ(c, 1u) << "seed " << seed;
  }
}

TEST(Enrichment, PaperSizedUnion) {
  const auto rv = uniforms(78);
  const auto base = lhs(2000, rv, 1);
  const auto add = nested_lhs_enrich(base, 2000, rv, 2);
  EXPECT_EQ(add.points.rows(), 2000);
  const auto joint = join_designs(base, add);
  EXPECT_EQ(joint.points.rows(), 4000);
  const std::size_t cap = 1;  // ceil(4000 / 4000)
  std::size_t occupied = 0, total = 0;
  for (const auto& col : occupancy(joint.points, rv, 4000)) {
    for (auto c : col) {
      EXPECT_LE(c, cap + 1);
      occupied += c > 0;
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(occupied) / static_cast<double>(total), 0.9);
}

TEST(Enrichment, UnionCoverageAndCapsUnevenSizes) {
  const auto rv = uniforms(4);
  const auto base = lhs(30, rv, 8);
  const auto add = nested_lhs_enrich(base, 17, rv, 9);
  const auto joint = join_designs(base, add);
  const std::size_t n = 47;
  std::size_t occupied = 0;
  for (const auto& col : occupancy(joint.points, rv, n))
    for (auto c : col) {
      EXPECT_LE(c, 2u);
      occupied += c > 0;
    }
  EXPECT_GE(static_cast<double>(occupied) / (4.0 * n), 0.9);
}

TEST(Enrichment, NoDuplicatePoints) {
  const auto rv = uniforms(3);
  const auto base = lhs(100, rv, 1);
  const auto add = nested_lhs_enrich(base, 100, rv, 2);
  std::set<std::vector<double>> seen;
  for (const auto* d : {&base, &add})
    for (Eigen::Index i = 0; i < d->points.rows(); ++i) {
      std::vector<double> row(3);
      for (Eigen::Index j = 0; j < 3; ++j) row[static_cast<std::size_t>(j)] = d->points(i, j);
      EXPECT_TRUE(seen.insert(row).second);
    }
}

TEST(Enrichment, DeterministicAndSupported) {
  const auto rv = uniforms(3);
  const auto base = lhs(20, rv, 1);
  const auto a = nested_lhs_enrich(base, 10, rv, 2);
  EXPECT_EQ(a.points, nested_lhs_enrich(base, 10, rv, 2).points);
  EXPECT_EQ(a.enrichment_of, base.id);
  for (Eigen::Index i = 0; i < a.points.rows(); ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(rv[j].marginal.in_support(a.points(i, static_cast<Eigen::Index>(j))));
}

TEST(Enrichment, Errors) {
  const auto base = lhs(5, uniforms(2), 1);
  EXPECT_THROW(nested_lhs_enrich(base, 0, uniforms(2), 1), InvalidArgument);
  EXPECT_THROW(nested_lhs_enrich(base, 3, uniforms(3), 1), InvalidArgument);
}
