#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "knnreal/error.hpp"

namespace knnreal {

/// Vertices are dense 0-based ids inside the library. Files and the CLI use
/// 1-based ids; conversion happens in io.hpp.
using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable k-regular digraph in compressed sparse row form.
///
/// Both open and closed neighborhoods are stored. The closed variants contain
/// the vertex itself, so |closed_out(v)| == k + 1 always.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t edge_count() const noexcept { return n_ * k_; }

  std::span<const Vertex> out(Vertex v) const noexcept {
    return {out_.data() + v * k_, k_};
  }
  std::span<const Vertex> closed_out(Vertex v) const noexcept {
    return {closed_out_.data() + v * (k_ + 1), k_ + 1};
  }
  std::span<const Vertex> in(Vertex v) const noexcept {
    return {in_.data() + in_offset_[v], in_offset_[v + 1] - in_offset_[v]};
  }
  std::span<const Vertex> closed_in(Vertex v) const noexcept {
    return {closed_in_.data() + in_offset_[v] + v,
            in_offset_[v + 1] - in_offset_[v] + 1};
  }

  bool has_edge(Vertex u, Vertex v) const noexcept {
    const auto o = out(u);
    return std::binary_search(o.begin(), o.end(), v);
  }

  /// All edges (u, v) ordered by u, then v.
  std::vector<Edge> edges() const {
    std::vector<Edge> e;
    e.reserve(edge_count());
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : out(u)) e.emplace_back(u, v);
    return e;
  }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.out_ == b.out_;
  }

  friend DirectedGraph build_graph(std::size_t n, std::size_t k,
                                   std::span<const Edge> edges);

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<Vertex> out_;         // n * k
  std::vector<Vertex> closed_out_;  // n * (k + 1)
  std::vector<std::size_t> in_offset_;
  std::vector<Vertex> in_;
  std::vector<Vertex> closed_in_;  // in_ with v spliced in; offset in_offset_[v] + v
};

/// Validates and builds a k-regular digraph. Work is O(kn + |edges|).
inline DirectedGraph build_graph(std::size_t n, std::size_t k,
                                 std::span<const Edge> edges) {
  DirectedGraph g;
  g.n_ = n;
  g.k_ = k;
  std::vector<std::size_t> outdeg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw Error(ErrorCode::IdOutOfRange,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) +
                      ") outside [0," + std::to_string(n) + ")");
    if (u == v)
      throw Error(ErrorCode::SelfLoop, "self-loop at " + std::to_string(u));
    ++outdeg[u];
  }
  for (Vertex v = 0; v < n; ++v)
    if (outdeg[v] != k)
      throw Error(ErrorCode::NotKRegular,
                  "vertex " + std::to_string(v) + " has out-degree " +
                      std::to_string(outdeg[v]) + ", expected " +
                      std::to_string(k));

  g.out_.assign(n * k, 0);
  std::vector<std::size_t> fill(n, 0);
  for (const auto& [u, v] : edges) g.out_[u * k + fill[u]++] = v;
  for (Vertex u = 0; u < n; ++u) {
    auto first = g.out_.begin() + static_cast<std::ptrdiff_t>(u * k);
    auto last = first + static_cast<std::ptrdiff_t>(k);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last)
      throw Error(ErrorCode::DuplicateEdge,
                  "duplicate edge from " + std::to_string(u) + " to " +
                      std::to_string(*std::adjacent_find(first, last)));
  }

  g.closed_out_.resize(n * (k + 1));
  for (Vertex u = 0; u < n; ++u) {
    const auto o = g.out(u);
    auto dst = g.closed_out_.begin() + static_cast<std::ptrdiff_t>(u * (k + 1));
    auto split = std::lower_bound(o.begin(), o.end(), u);
    dst = std::copy(o.begin(), split, dst);
    *dst++ = u;
    std::copy(split, o.end(), dst);
  }

  // Transpose by counting sort; scanning sources in increasing order leaves
  // every in-list sorted.
  g.in_offset_.assign(n + 1, 0);
  for (Vertex v : g.out_) ++g.in_offset_[v + 1];
  for (std::size_t v = 0; v < n; ++v) g.in_offset_[v + 1] += g.in_offset_[v];
  g.in_.resize(n * k);
  std::fill(fill.begin(), fill.end(), 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.out(u)) g.in_[g.in_offset_[v] + fill[v]++] = u;

  g.closed_in_.resize(n * k + n);
  for (Vertex v = 0; v < n; ++v) {
    const auto i = g.in(v);
    auto dst = g.closed_in_.begin() +
               static_cast<std::ptrdiff_t>(g.in_offset_[v] + v);
    auto split = std::lower_bound(i.begin(), i.end(), v);
    dst = std::copy(i.begin(), split, dst);
    *dst++ = v;
    std::copy(split, i.end(), dst);
  }
  return g;
}

inline DirectedGraph build_graph(std::size_t n, std::size_t k,
                                 const std::vector<Edge>& edges) {
  return build_graph(n, k, std::span<const Edge>(edges));
}

inline std::vector<Vertex> closed_out(const DirectedGraph& g, Vertex v) {
  const auto s = g.closed_out(v);
  return {s.begin(), s.end()};
}

inline std::vector<Vertex> closed_in(const DirectedGraph& g, Vertex v) {
  const auto s = g.closed_in(v);
  return {s.begin(), s.end()};
}

struct ComponentLabeling {
  std::vector<std::uint32_t> component_id;
  std::size_t component_count = 0;
  std::vector<std::vector<Vertex>> members;  // breadth-first discovery order
};

/// Weakly-connected components, discovered breadth-first from the lowest
/// unvisited vertex.
inline ComponentLabeling weak_components(const DirectedGraph& g) {
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  ComponentLabeling lab;
  lab.component_id.assign(g.n(), unset);
  std::vector<Vertex> queue;
  queue.reserve(g.n());
  for (Vertex s = 0; s < g.n(); ++s) {
    if (lab.component_id[s] != unset) continue;
    const auto id = static_cast<std::uint32_t>(lab.component_count++);
    queue.clear();
    queue.push_back(s);
    lab.component_id[s] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      auto visit = [&](Vertex w) {
        if (lab.component_id[w] == unset) {
          lab.component_id[w] = id;
          queue.push_back(w);
        }
      };
      for (Vertex w : g.out(v)) visit(w);
      for (Vertex w : g.in(v)) visit(w);
    }
    lab.members.emplace_back(queue.begin(), queue.end());
  }
  return lab;
}

}  // namespace knnreal
