#include <gtest/gtest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "knnreal/approx_embedder.hpp"
#include "knnreal/generators.hpp"
#include "knnreal/knn_oracle.hpp"

using namespace knnreal;
using fixtures::graph1;

namespace {

UndirectedGraph undirected(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  UndirectedGraph h(n);
  for (auto [a, b] : edges) h.add(static_cast<Vertex>(a - 1), static_cast<Vertex>(b - 1));
  return h;
}

std::vector<UndirectedEdge> edge_list(const UndirectedGraph& h) {
  std::vector<UndirectedEdge> e;
  for (Vertex v = 0; v < h.n(); ++v)
    for (const auto& a : h.adj(v))
      if (v < a.to) e.push_back({v, a.to});
  return e;
}

// Largest component after removing `cut`, by union-find.
std::size_t largest_component(const UndirectedGraph& h, const std::vector<UndirectedEdge>& cut) {
  std::vector<Vertex> parent(h.n());
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edge_list(h))
    if (std::find(cut.begin(), cut.end(), e) == cut.end()) parent[find(e.first)] = find(e.second);
  std::map<Vertex, std::size_t> size;
  std::size_t best = 0;
  for (Vertex v = 0; v < h.n(); ++v) best = std::max(best, ++size[find(v)]);
  return best;
}

bool balanced(const UndirectedGraph& h, const std::vector<UndirectedEdge>& cut) {
  return largest_component(h, cut) <= (h.n() + 1) / 2;
}

// Minimum balanced cut size over all edge subsets.
std::size_t exhaustive_min_balanced_cut(const UndirectedGraph& h) {
  const auto edges = edge_list(h);
  std::size_t best = edges.size();
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    std::vector<UndirectedEdge> cut;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (mask >> i & 1) cut.push_back(edges[i]);
    if (cut.size() < best && balanced(h, cut)) best = cut.size();
  }
  return best;
}

// Every k-regular digraph on f's vertices containing f's edges, by brute force.
std::set<std::vector<Edge>> brute_supergraphs(const Fragment& f, std::size_t k) {
  const std::size_t n = f.size();
  std::vector<std::vector<std::vector<Vertex>>> choices(n);
  for (Vertex v = 0; v < n; ++v) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (mask >> v & 1 || static_cast<std::size_t>(std::popcount(mask)) != k) continue;
      bool ok = true;
      for (Vertex w : f.out[v]) ok = ok && (mask >> w & 1);
      if (!ok) continue;
      std::vector<Vertex> t;
      for (Vertex w = 0; w < n; ++w)
        if (mask >> w & 1) t.push_back(w);
      choices[v].push_back(t);
    }
  }
  std::set<std::vector<Edge>> out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<Edge> e;
    for (Vertex v = 0; v < n; ++v)
      for (Vertex w : choices[v][idx[v]]) e.emplace_back(v, w);
    std::sort(e.begin(), e.end());
    out.insert(e);
    std::size_t v = n;
    while (v-- > 0) {
      if (++idx[v] < choices[v].size()) break;
      idx[v] = 0;
    }
    if (v == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<Edge> sorted_edges(const DirectedGraph& g) { return g.edges(); }

DirectedGraph knn_of_random_points(std::size_t n, std::size_t k, std::size_t d, std::uint64_t seed) {
  return knn_graph(to_exact(gen_points(n, d, seed, Distribution::UniformBox)), k);
}

// For each vertex, its k nearest images lie in its own component.
bool translation_sound(const DirectedGraph& g, const EmbeddingResult& r) {
  const auto& comp = r.cut.components.component_id;
  for (Vertex u = 0; u < g.n(); ++u) {
    std::vector<std::pair<Rational, Vertex>> d;
    for (Vertex w = 0; w < g.n(); ++w)
      if (w != u) d.emplace_back(squared_distance(r.realization.position(u), r.realization.position(w)), w);
    std::sort(d.begin(), d.end());
    for (std::size_t i = 0; i < g.k(); ++i)
      if (comp[d[i].second] != comp[u]) return false;
  }
  return true;
}

// Quasi-score of a fragment under local points.
std::size_t local_preserved(const Fragment& f, std::size_t k, const PointSet& p) {
  std::size_t s = 0;
  for (Vertex u = 0; u < f.size(); ++u)
    for (Vertex v : f.out[u]) {
      const auto duv = squared_distance(p[u], p[v]);
      std::size_t within = 0;
      for (Vertex w = 0; w < f.size(); ++w)
        if (w != u && squared_distance(p[u], p[w]) <= duv) ++within;
      if (within <= k) ++s;
    }
  return s;
}

EmbedOptions with_seed(std::uint64_t seed, unsigned threads = 0) {
  EmbedOptions o;
  o.seed = seed;
  o.threads = threads;
  return o;
}

SolveOptions solve_seed(std::uint64_t seed) {
  SolveOptions o;
  o.seed = seed;
  return o;
}

}  // namespace

// ---------------------------------------------------------------- balanced cut

TEST(BalancedCut, PathOfFourCutsTheMiddleEdge) {
  const auto h = undirected(4, {{1, 2}, {2, 3}, {3, 4}});
  const auto cut = approx_min_balanced_cut(h);
  ASSERT_EQ(cut.size(), 1u);
  EXPECT_EQ(cut[0], (UndirectedEdge{1, 2}));
  EXPECT_EQ(exhaustive_min_balanced_cut(h), 1u);
}

TEST(BalancedCut, TwoTrianglesAreAlreadyBalanced) {
  const auto h = undirected(6, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}});
  EXPECT_TRUE(approx_min_balanced_cut(h).empty());
}

TEST(BalancedCut, K4SplitsTwoAndTwo) {
  const auto h = undirected(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  const auto cut = approx_min_balanced_cut(h);
  EXPECT_EQ(cut.size(), 4u);
  EXPECT_EQ(exhaustive_min_balanced_cut(h), 4u);
  EXPECT_EQ(largest_component(h, cut), 2u);
}

TEST(BalancedCut, AlwaysBalancedAndOftenOptimalOnSmallGraphs) {
  std::mt19937_64 rng(11);
  std::size_t optimal = 0, trials = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 8;
    UndirectedGraph h(n);
    std::size_t m = 0;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (m < 14 && rng() % 3 == 0) {
          h.add(a, b);
          ++m;
        }
    const auto cut = approx_min_balanced_cut(h, {16, rng()});
    ASSERT_TRUE(balanced(h, cut)) << "trial " << t;
    ++trials;
    if (cut.size() == exhaustive_min_balanced_cut(h)) ++optimal;
  }
  // Quality is measured rather than promised; on graphs this small the
  // heuristic should almost always hit the optimum.
  EXPECT_GE(optimal * 10, trials * 8);
}

TEST(CutEdges, SmallGraphIsLeftWhole) {
  const auto r = cut_edges(fixtures::fig1(), Rational(1, 2), 6);
  EXPECT_TRUE(r.removed_edges.empty());
  EXPECT_EQ(r.components.component_count, 1u);
  EXPECT_EQ(r.removed_fraction, 0);
  EXPECT_FALSE(r.threshold_exceeded);
}

TEST(CutEdges, DisjointTrianglesStayApart) {
  const auto g = graph1(6, 2, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2},
                               {4, 5}, {4, 6}, {5, 4}, {5, 6}, {6, 4}, {6, 5}});
  const auto r = cut_edges(g, Rational(1, 2), 3);
  EXPECT_TRUE(r.removed_edges.empty());
  EXPECT_EQ(r.components.component_count, 2u);
}

TEST(CutEdges, GridPointsRespectCapAndReportFraction) {
  std::vector<Rational> c;
  // 8x8 grid with small fixed jitter so that no point has tied k-th neighbors.
  std::mt19937_64 rng(64);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      c.push_back(Rational(i * 1000 + static_cast<long>(rng() % 100)));
      c.push_back(Rational(j * 1000 + static_cast<long>(rng() % 100)));
    }
  const auto g = knn_graph(PointSet(2, std::move(c)), 2);
  const auto r = cut_edges(g, Rational(1, 2), 16);
  for (const auto& m : r.components.members) EXPECT_LE(m.size(), 16u);
  EXPECT_LE(r.removed_fraction, Rational(1, 2));
  EXPECT_EQ(r.removed_fraction, Rational(static_cast<long>(r.removed_edges.size()), 128));
  EXPECT_FALSE(r.threshold_exceeded);
}

TEST(CutEdges, CapAndComponentsHoldOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 20 + rng() % 150;
    const std::size_t k = 1 + rng() % 4;
    const std::size_t cap = k + 2 + rng() % 20;
    const auto g = random_regular_digraph(n, k, rng);
    const auto r = cut_edges(g, Rational(1, 10), cap, {16, rng()});
    std::vector<char> seen(n, 0);
    for (const auto& m : r.components.members) {
      EXPECT_LE(m.size(), cap);
      for (Vertex v : m) seen[v]++;
    }
    EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), static_cast<std::ptrdiff_t>(n));
    EXPECT_TRUE(std::is_sorted(r.removed_edges.begin(), r.removed_edges.end()));
    EXPECT_EQ(r.threshold_exceeded, r.removed_fraction > Rational(1, 10));
    // Removed edges are exactly the edges joining different components.
    std::size_t crossing = 0;
    for (const auto& [u, v] : g.edges())
      crossing += r.components.component_id[u] != r.components.component_id[v];
    EXPECT_LE(crossing, r.removed_edges.size());
  }
}

TEST(CutEdges, DefaultSizeCap) {
  EXPECT_EQ(default_size_cap(3, Rational(3, 20)), 28u);
  EXPECT_EQ(default_size_cap(2, Rational(1)), 4u);
  EXPECT_EQ(default_size_cap(1, Rational(1, 2)), 4u);
}

// ----------------------------------------------------------------- supergraphs

TEST(Supergraphs, RegularFragmentYieldsItself) {
  const auto g = fixtures::fig1();
  std::vector<Vertex> all(6);
  std::iota(all.begin(), all.end(), Vertex{0});
  const auto f = make_fragment(g, all);
  SupergraphEnumerator it(f, 2);
  DirectedGraph sg;
  ASSERT_TRUE(it.next(sg));
  EXPECT_EQ(sorted_edges(sg), sorted_edges(g));
  EXPECT_FALSE(it.next(sg));
  EXPECT_EQ(supergraph_count(f, 2), 1u);
}

TEST(Supergraphs, ThreeVerticesOneEdgeHasFourCompletions) {
  const auto f = make_fragment(3, {{0, 1}});
  SupergraphEnumerator it(f, 1);
  DirectedGraph sg;
  std::set<std::vector<Edge>> got;
  while (it.next(sg)) got.insert(sorted_edges(sg));
  const std::set<std::vector<Edge>> want{
      {{0, 1}, {1, 0}, {2, 0}}, {{0, 1}, {1, 0}, {2, 1}},
      {{0, 1}, {1, 2}, {2, 0}}, {{0, 1}, {1, 2}, {2, 1}}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(supergraph_count(f, 1), 4u);
}

TEST(Supergraphs, EmptyFragmentOnKPlusOneIsComplete) {
  const auto f = make_fragment(3, {});
  SupergraphEnumerator it(f, 2);
  DirectedGraph sg;
  ASSERT_TRUE(it.next(sg));
  EXPECT_EQ(sorted_edges(sg), sorted_edges(fixtures::complete(3)));
  EXPECT_FALSE(it.next(sg));
}

TEST(Supergraphs, Errors) {
  EXPECT_THROW(SupergraphEnumerator(make_fragment(3, {{0, 1}, {0, 2}}), 1), Error);
  try {
    supergraph_count(make_fragment(3, {{0, 1}, {0, 2}}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FragmentOverfull);
  }
  try {
    supergraph_count(make_fragment(2, {}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FragmentTooSmall);
  }
}

TEST(Supergraphs, MatchBruteForceOnRandomFragments) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 4;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(2, n - 1);
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u) {
      std::size_t deg = 0;
      for (Vertex v = 0; v < n; ++v)
        if (u != v && deg < k && rng() % 3 == 0) {
          e.emplace_back(u, v);
          ++deg;
        }
    }
    const auto f = make_fragment(n, e);
    std::set<std::vector<Edge>> got;
    std::size_t yielded = 0;
    SupergraphEnumerator it(f, k);
    DirectedGraph sg;
    while (it.next(sg)) {
      got.insert(sorted_edges(sg));
      ++yielded;
    }
    const auto want = brute_supergraphs(f, k);
    EXPECT_EQ(got, want) << "trial " << t;
    EXPECT_EQ(yielded, want.size());
    EXPECT_EQ(supergraph_count(f, k), want.size());
  }
}

// ------------------------------------------------------------- solve_component

TEST(SolveComponent, ThreeCycleIsCertifiedImpossible) {
  const auto g = fixtures::three_cycle();
  const auto f = make_fragment(g, {0, 1, 2});
  for (std::size_t d : {1u, 2u, 3u}) {
    SolveOptions quick;
    quick.restarts = 3;
    quick.iterations = 100;
    const auto s = solve_component(f, 1, d, quick);
    EXPECT_EQ(s.status, ComponentStatus::CertifiedImpossible) << "d=" << d;
    ASSERT_EQ(s.certificates.size(), 1u);
    EXPECT_TRUE(verify_lambda_cycle(g, s.certificates[0]));
    EXPECT_EQ(s.points.size(), 3u);
  }
}

TEST(SolveComponent, AtMostKVerticesUseLattice) {
  const auto f = make_fragment(3, {{0, 1}, {1, 2}});
  const auto s = solve_component(f, 3, 2);
  EXPECT_EQ(s.status, ComponentStatus::CertifiedQuasi);
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_EQ(s.points.dim(), 2u);
  EXPECT_TRUE(is_quasi_realization(f, 3, s.points));
}

TEST(SolveComponent, Fig1OnTheLine) {
  const auto g = fixtures::fig1();
  const auto f = make_fragment(g, {0, 1, 2, 3, 4, 5});
  const auto s = solve_component(f, 2, 1);
  EXPECT_EQ(s.status, ComponentStatus::CertifiedQuasi);
  EXPECT_TRUE(is_quasi_realization(f, 2, s.points));
  EXPECT_TRUE(verify_realization(g, identity_realization(s.points)));
}

TEST(SolveComponent, Fig1InThePlane) {
  const auto f = make_fragment(fixtures::fig1(), {0, 1, 2, 3, 4, 5});
  const auto s = solve_component(f, 2, 2, solve_seed(3));
  EXPECT_EQ(s.status, ComponentStatus::CertifiedQuasi);
  EXPECT_TRUE(is_quasi_realization(f, 2, s.points));
}

TEST(SolveComponent, CertifiedOutputsPassTheExactPredicate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = knn_of_random_points(60, 3, 2, seed);
    const auto cut = cut_edges(g, Rational(3, 20), 20, {16, seed});
    for (const auto& m : cut.components.members) {
      const auto f = make_fragment(g, m, cut.removed_edges);
      if (f.size() <= 3) continue;
      const auto s = solve_component(f, 3, 2, solve_seed(seed));
      if (s.status == ComponentStatus::CertifiedQuasi) {
        EXPECT_TRUE(is_quasi_realization(f, 3, s.points));
      }
      // Every fragment of a realizable graph has a quasi-realization.
      EXPECT_NE(s.status, ComponentStatus::CertifiedImpossible);
    }
  }
}

TEST(QuasiPredicate, CountsNonStrictly) {
  // Vertex 1 points at 2; vertex 3 is exactly as far, so two vertices lie
  // within reach and k=1 fails while k=2 passes.
  const auto f = make_fragment(3, {{0, 1}});
  const PointSet p(1, {Rational(0), Rational(1), Rational(-1)});
  EXPECT_FALSE(is_quasi_realization(f, 1, p));
  EXPECT_TRUE(is_quasi_realization(f, 2, p));
}

// -------------------------------------------------------------------- assembly

TEST(Assemble, SingleComponentIsAShift) {
  const auto g = fixtures::fig1();
  ComponentSolution s;
  s.vertices = {0, 1, 2, 3, 4, 5};
  s.points = fixtures::line({0, fixtures::q("5/2"), 5, fixtures::q("13/2"), 8, 12}).points;
  s.status = ComponentStatus::CertifiedQuasi;
  CutResult cut;
  cut.components = weak_components_without(g, {});
  const auto r = assemble_embedding({s}, 1, g, cut);
  EXPECT_EQ(r.score.fraction, 1);
  const Rational shift = r.realization.position(0)[0];
  for (Vertex v = 0; v < 6; ++v) EXPECT_EQ(r.realization.position(v)[0] - shift, s.points[v][0]);
}

TEST(Assemble, TwoCompleteComponentsSeparate) {
  const auto g = graph1(6, 2, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2},
                               {4, 5}, {4, 6}, {5, 4}, {5, 6}, {6, 4}, {6, 5}});
  // Unit-diameter local solutions.
  const PointSet local(2, {Rational(0), Rational(0), Rational(1), Rational(0), Rational(1, 2), Rational(1, 2)});
  std::vector<ComponentSolution> sols(2);
  sols[0].vertices = {0, 1, 2};
  sols[1].vertices = {3, 4, 5};
  for (auto& s : sols) {
    s.points = local;
    s.status = ComponentStatus::CertifiedQuasi;
  }
  CutResult cut;
  cut.components = weak_components_without(g, {});
  const auto r = assemble_embedding(sols, 2, g, cut);
  EXPECT_EQ(r.score.fraction, 1);
  EXPECT_GE(r.translation, 3 * 3);  // 3 * diameter(1) * (2 + 1)
  Rational intra = 0, inter = -1;
  for (Vertex a = 0; a < 6; ++a)
    for (Vertex b = a + 1; b < 6; ++b) {
      const auto d = squared_distance(r.realization.position(a), r.realization.position(b));
      if ((a < 3) == (b < 3)) intra = std::max(intra, d);
      else if (inter < 0 || d < inter) inter = d;
    }
  EXPECT_GE(inter, 4 * intra);  // at least twice as far
  EXPECT_TRUE(translation_sound(g, r));
}

TEST(Assemble, Fig1SplitInHalves) {
  const auto g = fixtures::fig1();
  const std::vector<Edge> removed{{2, 3}, {3, 2}, {4, 2}};  // every edge across the split
  CutResult cut;
  cut.removed_edges = removed;
  cut.components = weak_components_without(g, removed);
  ASSERT_EQ(cut.components.component_count, 2u);
  std::vector<ComponentSolution> sols;
  for (const auto& m : cut.components.members)
    sols.push_back(solve_component(make_fragment(g, m, removed), 2, 1));
  for (const auto& s : sols) ASSERT_EQ(s.status, ComponentStatus::CertifiedQuasi);
  const auto r = assemble_embedding(sols, 1, g, cut);
  EXPECT_GE(r.score.fraction, Rational(8, 12));
  EXPECT_GE(r.score.preserved_edges, 12u - removed.size());
}

TEST(Assemble, RejectsUnsolvedOrImpossible) {
  const auto g = fixtures::three_cycle();
  CutResult cut;
  cut.components = weak_components_without(g, {});
  ComponentSolution s;
  s.vertices = {0, 1, 2};
  s.points = PointSet(1, {Rational(0), Rational(1), Rational(2)});
  s.status = ComponentStatus::Unknown;
  try {
    assemble_embedding({s}, 1, g, cut);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsolvedComponent);
  }
  s.status = ComponentStatus::CertifiedImpossible;
  try {
    assemble_embedding({s}, 1, g, cut);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImpossibleComponent);
  }
  EXPECT_NO_THROW(assemble_embedding({s}, 1, g, cut, true));
}

// ----------------------------------------------------------------------- embed

TEST(Embed, HundredRandomPointsInThePlane) {
  const auto g = knn_of_random_points(100, 3, 2, 1);
  const auto r = embed(g, 2, Rational(3, 20), with_seed(1));
  EXPECT_EQ(r.status, EmbedStatus::Success);
  EXPECT_GE(r.score.fraction, Rational(85, 100));
  EXPECT_GE(r.score.fraction, 1 - r.cut.removed_fraction);
  for (const auto& m : r.cut.components.members) EXPECT_LE(m.size(), r.size_cap);
}

TEST(Embed, ThreeCycleIsCertifiedImpossible) {
  const auto g = fixtures::three_cycle();
  const auto r = embed(g, 2, Rational(3, 20));
  EXPECT_EQ(r.status, EmbedStatus::CertifiedImpossible);
  ASSERT_EQ(r.components.size(), 1u);
  ASSERT_FALSE(r.components[0].certificates.empty());
  EXPECT_TRUE(verify_lambda_cycle(g, r.components[0].certificates[0]));
}

TEST(Embed, RealizableLineGraphScoresOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = line_knn_graph(20, 2, seed);
    const auto r = embed(g, 1, Rational(1, 10), with_seed(seed));
    ASSERT_EQ(r.cut.components.component_count, 1u);
    EXPECT_EQ(r.status, EmbedStatus::Success);
    EXPECT_EQ(r.score.fraction, 1);
    EXPECT_TRUE(verify_realization(g, r.realization));
  }
}

TEST(Embed, AccountingTranslationAndLocalScores) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = knn_of_random_points(120, 3, 2, 100 + seed);
    const auto r = embed(g, 2, Rational(1, 5), with_seed(seed));
    const bool all_certified = std::all_of(r.components.begin(), r.components.end(), [](const auto& c) {
      return c.status == ComponentStatus::CertifiedQuasi;
    });
    if (all_certified) {
      EXPECT_GE(r.score.preserved_edges + r.cut.removed_edges.size(), g.edge_count());
    }
    const bool large = std::all_of(r.cut.components.members.begin(), r.cut.components.members.end(),
                                   [&](const auto& m) { return m.size() > g.k(); });
    if (large) {
      EXPECT_TRUE(translation_sound(g, r));
    }

    // Local quasi-scores sum to the global score on intra-component edges.
    std::size_t local_sum = 0;
    for (const auto& c : r.components)
      local_sum += local_preserved(make_fragment(g, c.vertices, r.cut.removed_edges), g.k(), c.points);
    std::size_t global_intra = 0;
    const auto& comp = r.cut.components.component_id;
    for (Vertex u = 0; u < g.n(); ++u) {
      std::vector<Rational> d;
      for (Vertex w = 0; w < g.n(); ++w)
        if (w != u) d.push_back(squared_distance(r.realization.position(u), r.realization.position(w)));
      std::sort(d.begin(), d.end());
      for (Vertex v : g.out(u)) {
        if (comp[u] != comp[v]) continue;
        if (std::binary_search(r.cut.removed_edges.begin(), r.cut.removed_edges.end(), Edge{u, v})) continue;
        const auto duv = squared_distance(r.realization.position(u), r.realization.position(v));
        if (static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), duv) - d.begin()) <= g.k())
          ++global_intra;
      }
    }
    if (large) {
      EXPECT_EQ(local_sum, global_intra) << "seed " << seed;
    }
  }
}

TEST(Embed, ResultDoesNotDependOnThreadCount) {
  const auto g = knn_of_random_points(150, 3, 2, 9);
  const auto a = embed(g, 2, Rational(3, 20), with_seed(4, 1));
  const auto b = embed(g, 2, Rational(3, 20), with_seed(4, 4));
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.score.fraction, b.score.fraction);
  EXPECT_EQ(a.realization.points.coords(), b.realization.points.coords());
}

TEST(Embed, RejectsBadParameters) {
  const auto g = fixtures::fig1();
  EXPECT_THROW(embed(g, 0, Rational(1, 2)), Error);
  EXPECT_THROW(embed(g, 1, Rational(0)), Error);
  EXPECT_THROW(embed(g, 1, Rational(3, 2)), Error);
}
