#pragma once

// Realizability in *some* Euclidean space: G is realizable only if the
// pair-order graph is acyclic. A cycle is a refutation certificate valid in
// every dimension.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "knnreal/graph.hpp"

namespace knnreal {

/// Unordered vertex pair, normalized so that first < second.
struct VertexPair {
  Vertex first = 0;
  Vertex second = 0;

  VertexPair() = default;
  VertexPair(Vertex a, Vertex b) : first(std::min(a, b)), second(std::max(a, b)) {}

  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

/// Implicit digraph on vertex pairs: {v,u} -> {v,u'} whenever (v,u) is an
/// edge and (v,u') is not. Edges are generated on demand, never stored.
class PairOrderGraph {
 public:
  explicit PairOrderGraph(const DirectedGraph& g) : g_(&g) {}

  std::size_t node_count() const noexcept { return g_->n() * g_->n(); }
  std::size_t id(VertexPair p) const noexcept { return p.first * g_->n() + p.second; }
  VertexPair pair(std::size_t id) const noexcept {
    return {static_cast<Vertex>(id / g_->n()), static_cast<Vertex>(id % g_->n())};
  }

  /// Resumable successor enumeration for one pair node.
  struct Cursor {
    VertexPair node;
    std::uint8_t side = 0;  // 0: centre is node.first, 1: centre is node.second
    Vertex next = 0;
    std::uint32_t skip = 0;
  };

  Cursor cursor(VertexPair p) const noexcept { return Cursor{p}; }

  bool next_successor(Cursor& c, VertexPair& succ) const {
    const std::size_t n = g_->n();
    while (c.side < 2) {
      const Vertex centre = c.side == 0 ? c.node.first : c.node.second;
      const Vertex other = c.side == 0 ? c.node.second : c.node.first;
      if (c.next == 0 && c.skip == 0 && !g_->has_edge(centre, other)) {
        advance_side(c);
        continue;
      }
      const auto co = g_->closed_out(centre);
      while (c.next < n) {
        while (c.skip < co.size() && co[c.skip] < c.next) ++c.skip;
        const Vertex w = c.next++;
        if (c.skip < co.size() && co[c.skip] == w) continue;
        succ = VertexPair(centre, w);
        return true;
      }
      advance_side(c);
    }
    return false;
  }

  bool is_edge(VertexPair from, VertexPair to) const {
    auto try_centre = [&](Vertex v) {
      const bool in_from = from.first == v || from.second == v;
      const bool in_to = to.first == v || to.second == v;
      if (!in_from || !in_to) return false;
      const Vertex u = from.first == v ? from.second : from.first;
      const Vertex u2 = to.first == v ? to.second : to.first;
      return u != u2 && g_->has_edge(v, u) && !g_->has_edge(v, u2);
    };
    return try_centre(from.first) || try_centre(from.second);
  }

 private:
  static void advance_side(Cursor& c) noexcept {
    ++c.side;
    c.next = 0;
    c.skip = 0;
  }

  const DirectedGraph* g_;
};

struct LambdaOptions {
  std::size_t max_vertices = 2000;
};

struct LambdaResult {
  bool realizable = false;
  /// Topological order of all pairs (shorter-distance pairs first) when acyclic.
  std::vector<VertexPair> order;
  /// cycle[i] -> cycle[i+1] -> ... -> cycle[0] when cyclic.
  std::vector<VertexPair> cycle;
};

/// Iterative depth-first search over the implicit pair-order graph.
inline LambdaResult lambda_acyclic(const DirectedGraph& g, LambdaOptions opt = {}) {
  if (g.n() > opt.max_vertices)
    throw Error(ErrorCode::ResourceLimit,
                "pair-order check capped at " + std::to_string(opt.max_vertices) +
                    " vertices, graph has " + std::to_string(g.n()));
  const PairOrderGraph lam(g);
  const std::size_t n = g.n();
  enum : std::uint8_t { White, Gray, Black };
  std::vector<std::uint8_t> color(lam.node_count(), White);
  std::vector<PairOrderGraph::Cursor> stack;
  std::vector<VertexPair> postorder;
  postorder.reserve(n * (n > 0 ? n - 1 : 0) / 2);

  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      const VertexPair root(a, b);
      if (color[lam.id(root)] != White) continue;
      color[lam.id(root)] = Gray;
      stack.push_back(lam.cursor(root));
      while (!stack.empty()) {
        VertexPair succ;
        if (lam.next_successor(stack.back(), succ)) {
          const auto sid = lam.id(succ);
          if (color[sid] == White) {
            color[sid] = Gray;
            stack.push_back(lam.cursor(succ));
          } else if (color[sid] == Gray) {
            LambdaResult res;
            auto it = std::find_if(stack.begin(), stack.end(),
                                   [&](const auto& c) { return c.node == succ; });
            for (; it != stack.end(); ++it) res.cycle.push_back(it->node);
            return res;
          }
        } else {
          color[lam.id(stack.back().node)] = Black;
          postorder.push_back(stack.back().node);
          stack.pop_back();
        }
      }
    }
  }
  LambdaResult res;
  res.realizable = true;
  res.order.assign(postorder.rbegin(), postorder.rend());
  return res;
}

/// Independent check that a claimed certificate is a closed walk in the
/// pair-order graph.
inline bool verify_lambda_cycle(const DirectedGraph& g, const std::vector<VertexPair>& cycle) {
  if (cycle.size() < 2) return false;
  const PairOrderGraph lam(g);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const auto& p = cycle[i];
    if (p.first >= p.second || p.second >= g.n()) return false;
    if (!lam.is_edge(p, cycle[(i + 1) % cycle.size()])) return false;
  }
  return true;
}

}  // namespace knnreal
