#pragma once

// Seeded instance generators. Every stream is derived from (seed, name) so
// adding a new consumer never shifts the numbers an old one sees.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "knnreal/error.hpp"
#include "knnreal/graph.hpp"
#include "knnreal/op_counter.hpp"
#include "knnreal/points.hpp"

namespace knnreal {

/// Named substream of a global seed.
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

enum class Distribution { UniformBox, Gaussian, LineDistinctGaps };

/// Largest k for which line-distinct-gaps output is guaranteed tie-free.
inline constexpr std::size_t kLineTieWindow = 64;

namespace detail {

/// Does some point have equal distances to a left and a right neighbor
/// within `w` positions? Same-side distances are strictly monotone already.
inline bool has_line_tie(const std::vector<std::int64_t>& x, std::size_t w) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t l = 1, r = 1;
    while (l <= w && r <= w && l <= i && i + r < n) {
      const auto dl = x[i] - x[i - l], dr = x[i + r] - x[i];
      if (dl == dr) return true;
      if (dl < dr) ++l;
      else ++r;
    }
  }
  return false;
}

/// Sorted integer positions with pairwise-distinct gaps in [2^20, 2^21).
inline std::vector<std::int64_t> line_positions(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> gap(std::int64_t{1} << 20, (std::int64_t{1} << 21) - 1);
  const std::size_t w = std::min(n == 0 ? 0 : n - 1, kLineTieWindow);
  std::vector<std::int64_t> x(n);
  while (true) {
    std::unordered_set<std::int64_t> used;
    for (std::size_t i = 1; i < n; ++i) {
      std::int64_t g;
      do g = gap(rng);
      while (!used.insert(g).second);
      x[i] = x[i - 1] + g;
    }
    if (!has_line_tie(x, w)) return x;
  }
}

}  // namespace detail

/// Deterministic point sets. Coordinates are doubles that convert exactly
/// to rationals; line-distinct-gaps coordinates are integers.
inline FloatPointSet gen_points(std::size_t n, std::size_t d, std::uint64_t seed, Distribution dist) {
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  auto rng = substream(seed, "gen_points");
  std::vector<double> c;
  c.reserve(n * d);
  switch (dist) {
    case Distribution::UniformBox: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (std::size_t i = 0; i < n * d; ++i) c.push_back(u(rng));
      break;
    }
    case Distribution::Gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      for (std::size_t i = 0; i < n * d; ++i) c.push_back(g(rng));
      break;
    }
    case Distribution::LineDistinctGaps: {
      if (d != 1) throw Error(ErrorCode::DimensionMismatch, "line-distinct-gaps is one-dimensional");
      for (auto x : detail::line_positions(n, rng)) c.push_back(static_cast<double>(x));
      break;
    }
  }
  return FloatPointSet(d, std::move(c));
}

/// kNN graph of sorted, tie-free line positions by a two-pointer sweep.
/// O(kn) total.
inline DirectedGraph knn_graph_sorted_line(const std::vector<std::int64_t>& x, std::size_t k,
                                           OpCounter* ops = nullptr) {
  const std::size_t n = x.size();
  if (n < k + 1) throw Error(ErrorCode::TooFewPoints, "need at least k+1 points");
  std::vector<Edge> edges;
  edges.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t l = i, r = i;  // next candidates are l-1 and r+1
    for (std::size_t t = 0; t < k; ++t) {
      const bool take_left =
          l > 0 && (r + 1 >= n || x[i] - x[l - 1] < x[r + 1] - x[i]);
      if (take_left) edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(--l));
      else edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(++r));
    }
    count(ops, k);
  }
  return build_graph(n, k, edges);
}

/// Relabels vertex v as perm[v].
inline DirectedGraph relabel(const DirectedGraph& g, const std::vector<Vertex>& perm) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return build_graph(g.n(), g.k(), edges);
}

inline std::vector<Vertex> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> p(n);
  std::iota(p.begin(), p.end(), Vertex{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Line kNN graph with randomly shuffled labels, for scaling runs.
inline DirectedGraph line_knn_graph(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > kLineTieWindow) throw Error(ErrorCode::Usage, "k too large for tie-free line generator");
  auto rng = substream(seed, "line_knn_graph");
  const auto x = detail::line_positions(n, rng);
  return relabel(knn_graph_sorted_line(x, k), random_permutation(n, rng));
}

/// Uniformly random out-sets of size k (not uniform over graphs up to
/// isomorphism, just over labeled k-regular digraphs).
inline DirectedGraph random_regular_digraph(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  if (n < k + 1) throw Error(ErrorCode::TooFewPoints, "need at least k+1 vertices");
  std::vector<Edge> edges;
  edges.reserve(n * k);
  std::vector<Vertex> others;
  for (Vertex v = 0; v < n; ++v) {
    others.clear();
    for (Vertex w = 0; w < n; ++w)
      if (w != v) others.push_back(w);
    for (std::size_t t = 0; t < k; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, others.size() - 1);
      std::swap(others[t], others[pick(rng)]);
      edges.emplace_back(v, others[t]);
    }
  }
  return build_graph(n, k, edges);
}

}  // namespace knnreal
