#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "knnreal/generators.hpp"
#include "knnreal/knn_oracle.hpp"

using namespace knnreal;
using fixtures::q;

namespace {

Realization fig1_positions() {
  return fixtures::line({0, q("5/2"), 5, q("13/2"), 8, 12});
}

}  // namespace

TEST(KnnGraph, Fig1PositionsGiveFig1) {
  EXPECT_EQ(knn_graph(fig1_positions().points, 2), fixtures::fig1());
}

TEST(KnnGraph, SmallLines) {
  const auto g = knn_graph(PointSet(1, {0, 1, 3}), 1);
  EXPECT_EQ(g, fixtures::graph1(3, 1, {{1, 2}, {2, 1}, {3, 2}}));
  try {
    knn_graph(PointSet(1, {0, 1, 2}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TieAtBoundary);
  }
  try {
    knn_graph(PointSet(1, {0, 1}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(PointSet, RejectsDuplicatesAndBadShape) {
  EXPECT_THROW(PointSet(1, {0, 1, 0}), Error);
  EXPECT_THROW(PointSet(2, {0, 1, 2}), Error);
  EXPECT_THROW(PointSet(0, {}), Error);
  EXPECT_EQ(PointSet(2, {}).size(), 0u);
}

TEST(VerifyRealization, Fig1) {
  const auto g = fixtures::fig1();
  EXPECT_TRUE(verify_realization(g, fig1_positions()));
  EXPECT_FALSE(verify_realization(g, fixtures::line({1, 2, 3, 4, 5, 6})));
  EXPECT_TRUE(verify_realization(fixtures::complete(3), fixtures::line({0, 7, 100})));
}

TEST(VerifyRealization, ShapeMismatch) {
  EXPECT_THROW(verify_realization(fixtures::fig1(), fixtures::line({0, 1, 2})), Error);
}

TEST(SigmaScore, Fig1) {
  const auto g = fixtures::fig1();
  auto s = sigma_score(g, fig1_positions());
  EXPECT_EQ(s.preserved_edges, 12u);
  EXPECT_EQ(s.fraction, 1);

  s = sigma_score(g, fixtures::line({1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(s.preserved_edges, 11u);
  EXPECT_EQ(s.fraction, Rational(11, 12));
}

TEST(SigmaScore, ReversedComponentScoresBelowOne) {
  // Two line components far apart; the second one's edges point the wrong way.
  const auto g = fixtures::graph1(6, 1, {{1, 2}, {2, 1}, {3, 2}, {4, 6}, {5, 6}, {6, 5}});
  const auto r = fixtures::line({0, 1, 3, 100, 101, 103});
  EXPECT_TRUE(sigma_score(g, r).fraction < 1);
}

TEST(SigmaScore, TiesCountGenerously) {
  // Vertex 2 sits exactly between 1 and 3 with k = 1: both candidates tie,
  // so the edge fails (two points at distance <= 1).
  const auto g = fixtures::graph1(3, 1, {{1, 2}, {2, 1}, {3, 2}});
  EXPECT_EQ(sigma_score(g, fixtures::line({0, 1, 2})).preserved_edges, 2u);
}

TEST(FloatOrder, MarginIsRelative) {
  DistanceOrder<double> o;
  EXPECT_TRUE(o.less(1.0, 1.001));
  EXPECT_FALSE(o.less(1.0, 1.0 + 1e-12));
  EXPECT_TRUE(o.less_equal(1.0 + 1e-12, 1.0));
}

TEST(KnnProperties, LineRoundTrip) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + rng() % 40;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n - 1, 6);
    const auto p = to_exact(gen_points(n, 1, seed, Distribution::LineDistinctGaps));
    const auto g = knn_graph(p, k);
    const auto r = identity_realization(p);
    EXPECT_TRUE(verify_realization(g, r));
    EXPECT_EQ(sigma_score(g, r).fraction, 1);
  }
}

TEST(KnnProperties, RelabelingCommutes) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto rng = substream(seed, "relabel-test");
    const std::size_t n = 5 + rng() % 20, k = 1 + rng() % 4;
    const auto p = gen_points(n, 2, seed, Distribution::UniformBox);
    const auto perm = random_permutation(n, rng);
    std::vector<double> c(n * 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 2; ++j) c[perm[i] * 2 + j] = p[i][j];
    const auto g = knn_graph(to_exact(p), k);
    const auto gp = knn_graph(to_exact(FloatPointSet(2, c)), k);
    EXPECT_EQ(relabel(g, perm), gp);
  }
}

TEST(KnnProperties, FloatAndExactAgreeOnGenericInput) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = gen_points(40, 3, seed, Distribution::Gaussian);
    EXPECT_EQ(knn_graph(p, 4), knn_graph(to_exact(p), 4));
  }
}
