#pragma once

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "knnreal/graph.hpp"
#include "knnreal/points.hpp"

namespace fixtures {

using knnreal::DirectedGraph;
using knnreal::Edge;
using knnreal::Vertex;

/// Builds from 1-based edge pairs, as they appear in files.
inline DirectedGraph graph1(std::size_t n, std::size_t k,
                            std::initializer_list<std::pair<int, int>> edges) {
  std::vector<Edge> e;
  for (auto [u, v] : edges) e.emplace_back(u - 1, v - 1);
  return knnreal::build_graph(n, k, e);
}

inline DirectedGraph fig1() {
  return graph1(6, 2, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 2}, {3, 4},
                       {4, 3}, {4, 5}, {5, 3}, {5, 4}, {6, 4}, {6, 5}});
}

inline DirectedGraph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) e.emplace_back(u, v);
  return knnreal::build_graph(n, n - 1, e);
}

inline DirectedGraph three_cycle() { return graph1(3, 1, {{1, 2}, {2, 3}, {3, 1}}); }

/// Three leaves pointing at a hub that points back at one of them.
inline DirectedGraph star_in() { return graph1(4, 1, {{1, 4}, {2, 4}, {3, 4}, {4, 1}}); }

inline knnreal::Realization line(std::initializer_list<knnreal::Rational> xs) {
  return knnreal::identity_realization(knnreal::PointSet(1, std::vector<knnreal::Rational>(xs)));
}

inline knnreal::Rational q(const char* s) { return knnreal::Rational(s); }

}  // namespace fixtures
