#pragma once

// Brute-force ground truth: kNN graphs of point sets, strict realization
// checks, and the edge-preservation score. Everything here is O(n^2)-ish and
// meant to be obviously correct rather than fast.

#include <algorithm>
#include <numeric>
#include <vector>

#include "knnreal/graph.hpp"
#include "knnreal/points.hpp"

namespace knnreal {

struct ApproxScore {
  std::size_t preserved_edges = 0;
  std::size_t total_edges = 0;
  Rational fraction = 1;
};

/// Directed edge a -> b iff b is one of the k nearest points to a.
template <class Scalar>
DirectedGraph knn_graph(const BasicPointSet<Scalar>& p, std::size_t k,
                        DistanceOrder<Scalar> order = {}) {
  const std::size_t n = p.size();
  if (n < k + 1)
    throw Error(ErrorCode::TooFewPoints, std::to_string(n) +
                                             " points cannot have " +
                                             std::to_string(k) + " neighbors each");
  std::vector<Edge> edges;
  edges.reserve(n * k);
  std::vector<Scalar> dist(n);
  std::vector<Vertex> idx;
  idx.reserve(n);
  auto closer = [&](Vertex a, Vertex b) { return dist[a] < dist[b]; };
  for (Vertex a = 0; a < n; ++a) {
    idx.clear();
    for (Vertex b = 0; b < n; ++b) {
      if (b == a) continue;
      dist[b] = squared_distance(p[a], p[b]);
      idx.push_back(b);
    }
    if (k == 0) continue;
    if (idx.size() > k) {
      std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k),
                       idx.end(), closer);
      const Vertex outside = idx[k];
      const Vertex kth = *std::max_element(
          idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), closer);
      if (!order.less(dist[kth], dist[outside]))
        throw Error(ErrorCode::TieAtBoundary,
                    "point " + std::to_string(a) + ": k-th and (k+1)-th nearest "
                    "distances are equal");
    }
    for (std::size_t j = 0; j < k; ++j) edges.emplace_back(a, idx[j]);
  }
  return build_graph(n, k, edges);
}

namespace detail {

template <class Scalar>
void check_realization_shape(const DirectedGraph& g,
                             const BasicRealization<Scalar>& r) {
  if (r.assignment.size() != g.n())
    throw Error(ErrorCode::DimensionMismatch,
                "realization places " + std::to_string(r.assignment.size()) +
                    " vertices, graph has " + std::to_string(g.n()));
  for (auto idx : r.assignment)
    if (idx >= r.points.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "assignment refers to point " + std::to_string(idx) +
                      " of " + std::to_string(r.points.size()));
}

template <class Scalar>
bool injective(const BasicRealization<Scalar>& r) {
  std::vector<char> used(r.points.size(), 0);
  for (auto idx : r.assignment) {
    if (used[idx]) return false;
    used[idx] = 1;
  }
  return true;
}

}  // namespace detail

/// True iff every out-neighbor of every vertex is strictly closer than every
/// non-neighbor. Per vertex we compare the farthest neighbor against the
/// nearest non-neighbor, so the scan is O(n^2), not O(n^3).
template <class Scalar>
bool verify_realization(const DirectedGraph& g, const BasicRealization<Scalar>& r,
                        DistanceOrder<Scalar> order = {}) {
  detail::check_realization_shape(g, r);
  if (!detail::injective(r)) return false;
  const std::size_t n = g.n();
  for (Vertex v = 0; v < n; ++v) {
    const auto out = g.out(v);
    if (out.empty() || out.size() + 1 == n) continue;
    Scalar far_in = 0;
    bool have_near_out = false;
    Scalar near_out = 0;
    auto next = out.begin();
    for (Vertex w = 0; w < n; ++w) {
      if (w == v) continue;
      Scalar d = squared_distance(r.position(v), r.position(w));
      while (next != out.end() && *next < w) ++next;
      if (next != out.end() && *next == w) {
        if (d > far_in) far_in = d;
      } else if (!have_near_out || d < near_out) {
        near_out = d;
        have_near_out = true;
      }
    }
    if (!order.less(far_in, near_out)) return false;
  }
  return true;
}

/// Edge-preservation score: edge (u,v) counts when at most k vertices other
/// than u lie at distance <= dist(u,v) from u (non-strict on purpose).
template <class Scalar>
ApproxScore sigma_score(const DirectedGraph& g, const BasicRealization<Scalar>& r,
                        DistanceOrder<Scalar> order = {}) {
  detail::check_realization_shape(g, r);
  ApproxScore s;
  s.total_edges = g.edge_count();
  const std::size_t n = g.n();
  std::vector<Scalar> all;
  all.reserve(n);
  std::vector<Scalar> to_out;
  for (Vertex u = 0; u < n; ++u) {
    all.clear();
    for (Vertex w = 0; w < n; ++w)
      if (w != u) all.push_back(squared_distance(r.position(u), r.position(w)));
    std::sort(all.begin(), all.end());
    for (Vertex v : g.out(u)) {
      Scalar d = squared_distance(r.position(u), r.position(v));
      auto it = std::upper_bound(all.begin(), all.end(), d,
                                 [&](const Scalar& target, const Scalar& e) {
                                   return !order.less_equal(e, target);
                                 });
      if (static_cast<std::size_t>(it - all.begin()) <= g.k()) ++s.preserved_edges;
    }
  }
  if (s.total_edges > 0) {
    s.fraction = Rational(static_cast<unsigned long>(s.preserved_edges),
                          static_cast<unsigned long>(s.total_edges));
    s.fraction.canonicalize();
  }
  return s;
}

}  // namespace knnreal
