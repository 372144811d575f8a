#pragma once

// Heuristic balanced edge separators on the undirected shadow of a digraph,
// and the recursive cutting scheme built on them.
//
// Nothing here carries an approximation guarantee. Balance is the only
// property downstream code relies on, and it is checked.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "knnreal/graph.hpp"
#include "knnreal/rational.hpp"

namespace knnreal {

/// Weighted simple undirected graph. Edge weight counts how many of the two
/// directions exist in the source digraph (1 or 2).
class UndirectedGraph {
 public:
  struct Arc {
    Vertex to;
    std::uint32_t weight;
  };

  UndirectedGraph() = default;
  explicit UndirectedGraph(std::size_t n) : adj_(n) {}

  std::size_t n() const noexcept { return adj_.size(); }
  const std::vector<Arc>& adj(Vertex v) const noexcept { return adj_[v]; }

  /// Adds weight w to {u, v}; repeated calls accumulate.
  void add(Vertex u, Vertex v, std::uint32_t w = 1) {
    bump(u, v, w);
    bump(v, u, w);
  }

  std::size_t edge_count() const noexcept {
    std::size_t s = 0;
    for (const auto& a : adj_) s += a.size();
    return s / 2;
  }

  static UndirectedGraph shadow(const DirectedGraph& g) {
    UndirectedGraph h(g.n());
    for (const auto& [u, v] : g.edges()) h.add(u, v);
    return h;
  }

 private:
  void bump(Vertex u, Vertex v, std::uint32_t w) {
    for (auto& a : adj_[u])
      if (a.to == v) {
        a.weight += w;
        return;
      }
    adj_[u].push_back({v, w});
  }

  std::vector<std::vector<Arc>> adj_;
};

using UndirectedEdge = std::pair<Vertex, Vertex>;  // first < second

namespace detail {

inline UndirectedEdge uedge(Vertex a, Vertex b) { return {std::min(a, b), std::max(a, b)}; }

/// Connected components of h, ignoring edges whose side[] labels differ when
/// `side` is non-empty.
inline std::vector<std::vector<Vertex>> components(const UndirectedGraph& h,
                                                   const std::vector<char>& side = {}) {
  std::vector<char> seen(h.n(), 0);
  std::vector<std::vector<Vertex>> out;
  for (Vertex s = 0; s < h.n(); ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    std::vector<Vertex> comp{s};
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (const auto& a : h.adj(comp[i]))
        if (!seen[a.to] && (side.empty() || side[a.to] == side[comp[i]])) {
          seen[a.to] = 1;
          comp.push_back(a.to);
        }
    out.push_back(std::move(comp));
  }
  return out;
}

/// Region growing inside `block`: repeatedly absorb the frontier vertex whose
/// absorption raises the cut weight least. Returns the best prefix with size
/// in [lo, hi] as a membership mask, plus its cut weight.
inline std::pair<std::vector<char>, std::int64_t> grow_region(const UndirectedGraph& h,
                                                              const std::vector<char>& in_block,
                                                              Vertex seed, std::size_t lo,
                                                              std::size_t hi) {
  const std::size_t n = h.n();
  std::vector<char> in_s(n, 0);
  std::vector<std::int64_t> link(n, 0);  // weight into S
  std::vector<std::int64_t> deg(n, 0);   // weight inside the block
  for (Vertex v = 0; v < n; ++v)
    if (in_block[v])
      for (const auto& a : h.adj(v))
        if (in_block[a.to]) deg[v] += a.weight;

  using Item = std::pair<std::int64_t, Vertex>;  // (cut increase, vertex), min first
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  std::vector<Vertex> order;
  std::int64_t cut = 0, best_cut = -1;
  std::size_t best_size = 0;
  frontier.push({deg[seed], seed});
  auto next = [&](Vertex& v) {
    while (!frontier.empty()) {
      auto [delta, x] = frontier.top();
      frontier.pop();
      if (!in_s[x] && delta == deg[x] - 2 * link[x]) {  // skip stale entries
        v = x;
        return true;
      }
    }
    return false;
  };
  Vertex v;
  while (order.size() < hi && next(v)) {
    in_s[v] = 1;
    order.push_back(v);
    cut += deg[v] - 2 * link[v];
    for (const auto& a : h.adj(v)) {
      if (!in_block[a.to] || in_s[a.to]) continue;
      link[a.to] += a.weight;
      frontier.push({deg[a.to] - 2 * link[a.to], a.to});
    }
    if (order.size() >= lo && (best_cut < 0 || cut < best_cut)) {
      best_cut = cut;
      best_size = order.size();
    }
  }
  std::vector<char> mask(n, 0);
  for (std::size_t i = 0; i < best_size; ++i) mask[order[i]] = 1;
  return {std::move(mask), best_cut};
}

/// Passes of single-vertex moves across the cut with positive gain, keeping
/// |S| within [lo, hi]. Stops when a pass finds nothing.
inline std::int64_t refine(const UndirectedGraph& h, const std::vector<char>& in_block,
                           std::vector<char>& in_s, std::size_t lo, std::size_t hi,
                           std::int64_t cut, std::size_t max_passes = 8) {
  std::size_t size = 0;
  for (Vertex v = 0; v < h.n(); ++v) size += in_block[v] && in_s[v];
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    bool moved = false;
    for (Vertex v = 0; v < h.n(); ++v) {
      if (!in_block[v]) continue;
      std::int64_t same = 0, other = 0;
      for (const auto& a : h.adj(v)) {
        if (!in_block[a.to]) continue;
        (in_s[a.to] == in_s[v] ? same : other) += a.weight;
      }
      const std::int64_t gain = other - same;
      if (gain <= 0) continue;
      if (in_s[v] ? size - 1 < lo : size + 1 > hi) continue;
      in_s[v] ^= 1;
      size += in_s[v] ? 1 : std::size_t(-1);
      cut -= gain;
      moved = true;
    }
    if (!moved) break;
  }
  return cut;
}

}  // namespace detail

struct BalancedCutOptions {
  std::size_t seeds = 16;
  std::uint64_t seed = 0;
};

/// Edge set whose removal leaves every component with at most
/// ceil(|V|/2) vertices. Empty when h is already balanced.
inline std::vector<UndirectedEdge> approx_min_balanced_cut(const UndirectedGraph& h,
                                                           BalancedCutOptions opt = {}) {
  const std::size_t n = h.n();
  const std::size_t half = (n + 1) / 2;
  auto comps = detail::components(h);
  auto big = std::find_if(comps.begin(), comps.end(), [&](const auto& c) { return c.size() > half; });
  if (big == comps.end()) return {};

  const auto& block = *big;
  std::vector<char> in_block(n, 0);
  for (Vertex v : block) in_block[v] = 1;
  const std::size_t lo = block.size() - half;
  const std::size_t hi = half;

  std::mt19937_64 rng(opt.seed ^ (0x5851f42d4c957f2dull * (n + 1)));
  std::vector<Vertex> seeds;
  {
    // A pseudo-peripheral vertex first (far end of a BFS from the lowest id),
    // then random block members.
    std::vector<int> dist(n, -1);
    std::vector<Vertex> q{block.front()};
    dist[block.front()] = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (const auto& a : h.adj(q[i]))
        if (dist[a.to] < 0) {
          dist[a.to] = dist[q[i]] + 1;
          q.push_back(a.to);
        }
    seeds.push_back(q.back());
    std::uniform_int_distribution<std::size_t> pick(0, block.size() - 1);
    while (seeds.size() < std::min(opt.seeds, block.size())) seeds.push_back(block[pick(rng)]);
  }

  std::vector<char> best;
  std::int64_t best_cut = -1;
  for (Vertex s : seeds) {
    auto [mask, cut] = detail::grow_region(h, in_block, s, lo, hi);
    if (cut < 0) continue;
    cut = detail::refine(h, in_block, mask, lo, hi, cut);
    if (best_cut < 0 || cut < best_cut) {
      best_cut = cut;
      best = std::move(mask);
    }
  }

  std::vector<UndirectedEdge> out;
  for (Vertex v : block)
    for (const auto& a : h.adj(v))
      if (v < a.to && in_block[a.to] && best[v] != best[a.to]) out.push_back({v, a.to});
  std::sort(out.begin(), out.end());
  return out;
}

/// Result of recursive cutting. Removed edges are directed edges of the
/// source graph, sorted.
struct CutResult {
  std::vector<Edge> removed_edges;
  ComponentLabeling components;
  Rational removed_fraction = 0;
  bool threshold_exceeded = false;
};

/// Components of g after deleting `removed` (sorted directed edges),
/// ignoring direction, discovered breadth-first from the lowest id.
inline ComponentLabeling weak_components_without(const DirectedGraph& g,
                                                 const std::vector<Edge>& removed) {
  auto gone = [&](Vertex u, Vertex v) { return std::binary_search(removed.begin(), removed.end(), Edge{u, v}); };
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  ComponentLabeling lab;
  lab.component_id.assign(g.n(), unset);
  for (Vertex s = 0; s < g.n(); ++s) {
    if (lab.component_id[s] != unset) continue;
    const auto id = static_cast<std::uint32_t>(lab.component_count++);
    std::vector<Vertex> q{s};
    lab.component_id[s] = id;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Vertex v = q[i];
      auto visit = [&](Vertex w) {
        if (lab.component_id[w] == unset) {
          lab.component_id[w] = id;
          q.push_back(w);
        }
      };
      for (Vertex w : g.out(v))
        if (!gone(v, w)) visit(w);
      for (Vertex w : g.in(v))
        if (!gone(w, v)) visit(w);
    }
    lab.members.push_back(std::move(q));
  }
  return lab;
}

/// Recursively splits the undirected shadow of g with balanced cuts until
/// every piece has at most size_cap vertices.
inline CutResult cut_edges(const DirectedGraph& g, const Rational& eps, std::size_t size_cap,
                           BalancedCutOptions opt = {}) {
  const auto shadow = UndirectedGraph::shadow(g);
  std::vector<UndirectedEdge> cut;
  std::vector<std::vector<Vertex>> work{{}};
  for (Vertex v = 0; v < g.n(); ++v) work.front().push_back(v);
  std::vector<std::uint32_t> local(g.n());

  while (!work.empty()) {
    auto piece = std::move(work.back());
    work.pop_back();
    if (piece.size() <= size_cap) continue;
    // Induced subgraph on the piece, minus edges already cut.
    std::sort(piece.begin(), piece.end());
    for (std::uint32_t i = 0; i < piece.size(); ++i) local[piece[i]] = i;
    UndirectedGraph h(piece.size());
    std::vector<char> member(g.n(), 0);
    for (Vertex v : piece) member[v] = 1;
    for (Vertex v : piece)
      for (const auto& a : shadow.adj(v))
        if (v < a.to && member[a.to] &&
            !std::binary_search(cut.begin(), cut.end(), detail::uedge(v, a.to)))
          h.add(local[v], local[a.to], a.weight);

    auto split = approx_min_balanced_cut(h, {opt.seeds, opt.seed + piece.front()});
    for (auto [a, b] : split) cut.push_back(detail::uedge(piece[a], piece[b]));
    std::sort(cut.begin(), cut.end());

    std::vector<char> side(h.n(), 0);
    if (!split.empty()) {
      // Sides follow from connectivity of h minus the split.
      UndirectedGraph rest(h.n());
      for (Vertex v = 0; v < h.n(); ++v)
        for (const auto& a : h.adj(v))
          if (v < a.to && !std::binary_search(split.begin(), split.end(), UndirectedEdge{v, a.to}))
            rest.add(v, a.to, a.weight);
      for (auto& comp : detail::components(rest)) {
        std::vector<Vertex> global;
        for (Vertex x : comp) global.push_back(piece[x]);
        work.push_back(std::move(global));
      }
    } else {
      for (auto& comp : detail::components(h)) {
        std::vector<Vertex> global;
        for (Vertex x : comp) global.push_back(piece[x]);
        work.push_back(std::move(global));
      }
    }
  }

  CutResult res;
  for (const auto& [u, v] : g.edges())
    if (std::binary_search(cut.begin(), cut.end(), detail::uedge(u, v))) res.removed_edges.push_back({u, v});
  res.components = weak_components_without(g, res.removed_edges);
  if (g.edge_count() > 0) {
    res.removed_fraction = Rational(static_cast<unsigned long>(res.removed_edges.size()),
                                    static_cast<unsigned long>(g.edge_count()));
    res.removed_fraction.canonicalize();
  }
  res.threshold_exceeded = res.removed_fraction > eps;
  return res;
}

/// Default piece size: max(k + 2, ceil(1/eps) * (k + 1)).
inline std::size_t default_size_cap(std::size_t k, const Rational& eps) {
  mpz_class inv_ceil;
  mpz_cdiv_q(inv_ceil.get_mpz_t(), eps.get_den_mpz_t(), eps.get_num_mpz_t());
  return std::max<std::size_t>(k + 2, inv_ceil.get_ui() * (k + 1));
}

}  // namespace knnreal
