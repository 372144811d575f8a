#pragma once

// Linear-time recognition of kNN graphs on the line.
//
// Pipeline: classify vertices by closed out-set, order the classes along the
// line, order vertices inside each class by their in-window signature, then
// check that every closed out-set is a contiguous, monotone window of the
// resulting ordering. The final check alone decides realizability; earlier
// stages may produce garbage on non-realizable inputs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knnreal/graph.hpp"
#include "knnreal/op_counter.hpp"

namespace knnreal {

using ClassId = std::uint32_t;

struct ClassPartition {
  std::vector<std::vector<Vertex>> classes;
  std::vector<ClassId> class_of;

  std::size_t size() const noexcept { return classes.size(); }
  Vertex representative(ClassId c) const noexcept { return classes[c].front(); }
  /// Closed out-set shared by the class (taken from its first member).
  std::span<const Vertex> out_window(const DirectedGraph& g, ClassId c) const noexcept {
    return g.closed_out(representative(c));
  }
};

using ClassOrdering = std::vector<ClassId>;
using VertexOrdering = std::vector<Vertex>;

/// R(v) = (p, q): first and last ordering positions of classes wholly inside
/// the closed in-set of v.
struct InWindowSignature {
  std::uint32_t p = 0;
  std::uint32_t q = 0;
};

namespace detail {

inline bool same_set(std::span<const Vertex> a, std::span<const Vertex> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

inline std::size_t intersection_size(std::span<const Vertex> a, std::span<const Vertex> b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++c; ++i; ++j; }
  }
  return c;
}

}  // namespace detail

/// Greedy O(kn) partition into out-set classes. Exact whenever g is
/// realizable on the line; otherwise only a partition.
inline ClassPartition classify(const DirectedGraph& g, OpCounter* ops = nullptr) {
  const std::size_t n = g.n();
  const std::size_t k = g.k();
  ClassPartition part;
  part.class_of.assign(n, 0);
  std::vector<char> alive(n, 1);
  std::vector<Vertex> inset;
  std::vector<std::uint32_t> overlap;
  std::vector<Vertex> same, other;

  auto emit = [&](std::vector<Vertex>& c) {
    if (c.empty()) return;
    const auto id = static_cast<ClassId>(part.classes.size());
    for (Vertex u : c) part.class_of[u] = id;
    part.classes.push_back(c);
  };

  for (Vertex v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    const auto cin = g.closed_in(v);
    count(ops, cin.size());
    inset.clear();
    for (Vertex u : cin)
      if (alive[u]) inset.push_back(u);
    // v is alive and in its own closed in-set, so inset is never empty.

    const auto out_v = g.closed_out(v);
    overlap.resize(inset.size());
    for (std::size_t j = 0; j < inset.size(); ++j) {
      overlap[j] = static_cast<std::uint32_t>(
          detail::intersection_size(g.closed_out(inset[j]), out_v));
      count(ops, 2 * (k + 1));
    }

    for (std::uint32_t i = 1; i <= k + 1; ++i) {
      same.clear();
      other.clear();
      for (std::size_t j = 0; j < inset.size(); ++j) {
        count(ops);
        if (overlap[j] != i) continue;
        const Vertex u = inset[j];
        count(ops, k + 1);
        if (same.empty() || detail::same_set(g.closed_out(u), g.closed_out(same.front())))
          same.push_back(u);
        else
          other.push_back(u);
      }
      emit(same);
      emit(other);
    }
    for (Vertex u : inset) alive[u] = 0;
  }
  return part;
}

/// Reusable scratch for class_order across components; sized to the full
/// partition, reset only where touched.
struct ClassOrderWorkspace {
  explicit ClassOrderWorkspace(std::size_t classes)
      : overlap(classes, 0), removed(classes, 0), placed(classes, 0) {}

  std::vector<std::uint32_t> overlap;
  std::vector<ClassId> touched;
  std::vector<std::uint32_t> removed;  // == epoch means removed
  std::vector<std::uint32_t> placed;
  std::uint32_t epoch = 0;
};

/// Orders the classes of one weakly-connected component along the line.
/// Throws Error(Stuck) when the extension runs dry before every class is
/// placed, which cannot happen on realizable inputs.
inline ClassOrdering class_order(const DirectedGraph& g, const ClassPartition& part,
                                 std::span<const ClassId> component_classes,
                                 ClassOrderWorkspace& ws, OpCounter* ops = nullptr) {
  if (component_classes.empty()) return {};
  const ClassId x = *std::min_element(component_classes.begin(), component_classes.end());
  if (component_classes.size() == 1) return {x};

  // Overlap |out[D] ∩ out[C]| for all classes C intersecting out[D]: C's
  // representative appears in the closed in-set of each shared vertex.
  auto gather = [&](ClassId d, auto&& available) {
    ws.touched.clear();
    for (Vertex w : part.out_window(g, d)) {
      const auto cin = g.closed_in(w);
      count(ops, cin.size());
      for (Vertex u : cin) {
        const ClassId c = part.class_of[u];
        if (c == d || part.representative(c) != u || !available(c)) continue;
        if (ws.overlap[c]++ == 0) ws.touched.push_back(c);
      }
    }
  };
  auto clear_overlap = [&] {
    for (ClassId c : ws.touched) ws.overlap[c] = 0;
  };

  gather(x, [](ClassId) { return true; });
  if (ws.touched.empty())
    throw Error(ErrorCode::Stuck, "no class shares a vertex with the seed class");
  ClassId y = ws.touched.front();
  for (ClassId c : ws.touched)
    if (ws.overlap[c] > ws.overlap[y] || (ws.overlap[c] == ws.overlap[y] && c < y)) y = c;

  const auto out_x = part.out_window(g, x);
  std::vector<Vertex> xy;
  std::set_intersection(out_x.begin(), out_x.end(), part.out_window(g, y).begin(),
                        part.out_window(g, y).end(), std::back_inserter(xy));
  std::vector<ClassId> left, right;
  std::vector<Vertex> xc;
  for (ClassId c : ws.touched) {
    xc.clear();
    const auto out_c = part.out_window(g, c);
    std::set_intersection(out_x.begin(), out_x.end(), out_c.begin(), out_c.end(),
                          std::back_inserter(xc));
    count(ops, 2 * out_x.size());
    if (std::includes(xy.begin(), xy.end(), xc.begin(), xc.end()))
      right.push_back(c);
    else
      left.push_back(c);
  }
  clear_overlap();

  std::vector<ClassId> sorted;
  std::vector<std::uint32_t> bucket_count(g.k() + 3, 0);
  auto find = [&](std::span<const ClassId> excluded) {
    const std::uint32_t epoch = ++ws.epoch;
    ws.removed[x] = epoch;
    for (ClassId c : excluded) ws.removed[c] = epoch;
    auto available = [&](ClassId c) { return ws.removed[c] != epoch; };
    ClassOrdering seq;
    ClassId d = x;
    while (true) {
      gather(d, available);
      if (ws.touched.empty()) break;
      // Counting sort by decreasing overlap; keys lie in [1, k+1].
      std::fill(bucket_count.begin(), bucket_count.end(), 0);
      for (ClassId c : ws.touched) ++bucket_count[g.k() + 1 - std::min<std::uint32_t>(ws.overlap[c], g.k() + 1)];
      std::uint32_t run = 0;
      for (auto& b : bucket_count) {
        const auto t = b;
        b = run;
        run += t;
      }
      sorted.assign(ws.touched.size(), 0);
      for (ClassId c : ws.touched)
        sorted[bucket_count[g.k() + 1 - std::min<std::uint32_t>(ws.overlap[c], g.k() + 1)]++] = c;
      count(ops, g.k() + 2 * sorted.size());
      clear_overlap();
      for (ClassId c : sorted) {
        seq.push_back(c);
        ws.removed[c] = epoch;
      }
      d = sorted.back();
    }
    return seq;
  };

  ClassOrdering lower = find(right);
  ClassOrdering upper = find(left);

  ClassOrdering result;
  result.reserve(lower.size() + 1 + upper.size());
  result.assign(lower.rbegin(), lower.rend());
  result.push_back(x);
  result.insert(result.end(), upper.begin(), upper.end());

  const std::uint32_t epoch = ++ws.epoch;
  for (ClassId c : result) {
    if (ws.placed[c] == epoch)
      throw Error(ErrorCode::Stuck, "class " + std::to_string(c) + " reached from both sides");
    ws.placed[c] = epoch;
  }
  if (result.size() != component_classes.size())
    throw Error(ErrorCode::Stuck, "ordered " + std::to_string(result.size()) + " of " +
                                      std::to_string(component_classes.size()) + " classes");
  return result;
}

/// Convenience overload for a weakly-connected graph.
inline ClassOrdering class_order(const DirectedGraph& g, const ClassPartition& part,
                                 OpCounter* ops = nullptr) {
  std::vector<ClassId> all(part.size());
  for (ClassId c = 0; c < all.size(); ++c) all[c] = c;
  ClassOrderWorkspace ws(part.size());
  return class_order(g, part, all, ws, ops);
}

/// In-window signature of every vertex relative to a class ordering.
inline std::vector<InWindowSignature> in_window_signatures(const DirectedGraph& g,
                                                           const ClassPartition& part,
                                                           const ClassOrdering& order,
                                                           OpCounter* ops = nullptr) {
  constexpr auto unplaced = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> pos(part.size(), unplaced);
  for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::uint32_t> seen(part.size(), 0);
  std::vector<ClassId> touched;
  std::vector<InWindowSignature> sig(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    touched.clear();
    const auto cin = g.closed_in(v);
    count(ops, 2 * cin.size());
    for (Vertex u : cin) {
      const ClassId c = part.class_of[u];
      if (seen[c]++ == 0) touched.push_back(c);
    }
    std::uint32_t p = unplaced, q = 0;
    for (ClassId c : touched) {
      if (seen[c] == part.classes[c].size() && pos[c] != unplaced) {
        p = std::min(p, pos[c]);
        q = std::max(q, pos[c]);
      }
      seen[c] = 0;
    }
    if (p == unplaced) p = q = pos[part.class_of[v]] == unplaced ? 0 : pos[part.class_of[v]];
    sig[v] = {p, q};
  }
  return sig;
}

/// Concatenates the classes in order, each sorted internally by
/// (p + q, p, vertex id) of the in-window signature.
inline VertexOrdering vertex_order(const DirectedGraph& g, const ClassPartition& part,
                                   const ClassOrdering& order, OpCounter* ops = nullptr) {
  const auto sig = in_window_signatures(g, part, order, ops);
  VertexOrdering vo;
  vo.reserve(g.n());
  for (ClassId c : order) {
    const auto first = vo.insert(vo.end(), part.classes[c].begin(), part.classes[c].end());
    // A class lies inside its own closed out-set, so it has at most k+1
    // members and this sort costs O(k log k).
    std::sort(first, vo.end(), [&](Vertex a, Vertex b) {
      const auto ka = sig[a].p + sig[a].q, kb = sig[b].p + sig[b].q;
      if (ka != kb) return ka < kb;
      if (sig[a].p != sig[b].p) return sig[a].p < sig[b].p;
      return a < b;
    });
    count(ops, 2 * part.classes[c].size());
  }
  return vo;
}

enum class Violation { None, NotPermutation, NonContiguous, NonMonotone, InDegreeBound, Stuck };

constexpr std::string_view to_string(Violation v) noexcept {
  switch (v) {
    case Violation::None: return "none";
    case Violation::NotPermutation: return "not-a-permutation";
    case Violation::NonContiguous: return "non-contiguous-out-window";
    case Violation::NonMonotone: return "non-monotone-out-window";
    case Violation::InDegreeBound: return "in-degree-exceeds-2k+1";
    case Violation::Stuck: return "class-order-stuck";
  }
  return "unknown";
}

struct Condition1Result {
  bool feasible = false;
  /// windows[i] = first ordering position of closed_out(vo[i]) (0-based).
  std::vector<std::uint32_t> windows;
  Vertex witness = 0;
  std::size_t witness_position = 0;
  Violation violation = Violation::None;
};

/// Checks that every closed out-set is a contiguous block of k+1 positions
/// and that block starts never decrease along the ordering. O(kn).
inline Condition1Result check_condition1(const DirectedGraph& g, const VertexOrdering& vo,
                                         OpCounter* ops = nullptr) {
  const std::size_t n = g.n();
  Condition1Result res;
  constexpr auto unplaced = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> pos(n, unplaced);
  if (vo.size() != n) {
    res.violation = Violation::NotPermutation;
    return res;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (vo[i] >= n || pos[vo[i]] != unplaced) {
      res.violation = Violation::NotPermutation;
      res.witness_position = i;
      return res;
    }
    pos[vo[i]] = i;
  }
  res.windows.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const Vertex v = vo[i];
    std::uint32_t lo = unplaced, hi = 0;
    for (Vertex w : g.closed_out(v)) {
      lo = std::min(lo, pos[w]);
      hi = std::max(hi, pos[w]);
    }
    count(ops, g.k() + 1);
    auto fail = [&](Violation why) {
      res.windows.clear();
      res.witness = v;
      res.witness_position = i;
      res.violation = why;
      return res;
    };
    if (hi - lo != g.k()) return fail(Violation::NonContiguous);
    if (i > 0 && lo < res.windows[i - 1]) return fail(Violation::NonMonotone);
    res.windows[i] = lo;
  }
  res.feasible = true;
  return res;
}

struct Decision1D {
  bool realizable = false;
  VertexOrdering ordering;
  std::vector<std::uint32_t> windows;
  Vertex witness = 0;
  Violation violation = Violation::None;

  ComponentLabeling components;
  ClassPartition partition;
  std::vector<ClassOrdering> class_orderings;  // one per component, discovery order
};

/// Decides kNN-realizability on the line in O(kn).
inline Decision1D decide_1d(const DirectedGraph& g, OpCounter* ops = nullptr) {
  Decision1D d;
  d.components = weak_components(g);
  count(ops, g.n() + 2 * g.edge_count());
  d.partition = classify(g, ops);

  // A line realization never has more than 2k+1 vertices in a closed in-set.
  // Checking this first also keeps class ordering linear on hostile input.
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.closed_in(v).size() > 2 * g.k() + 1) {
      d.witness = v;
      d.violation = Violation::InDegreeBound;
      return d;
    }
  }
  count(ops, g.n());

  ClassOrderWorkspace ws(d.partition.size());
  std::vector<char> listed(d.partition.size(), 0);
  std::vector<ClassId> comp_classes;
  ClassOrdering all;
  all.reserve(d.partition.size());
  for (const auto& members : d.components.members) {
    comp_classes.clear();
    for (Vertex v : members) {
      const ClassId c = d.partition.class_of[v];
      if (!listed[c]) {
        listed[c] = 1;
        comp_classes.push_back(c);
      }
    }
    count(ops, members.size());
    try {
      d.class_orderings.push_back(class_order(g, d.partition, comp_classes, ws, ops));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Stuck) throw;
      d.witness = members.front();
      d.violation = Violation::Stuck;
      return d;
    }
    all.insert(all.end(), d.class_orderings.back().begin(), d.class_orderings.back().end());
  }

  d.ordering = vertex_order(g, d.partition, all, ops);
  auto c1 = check_condition1(g, d.ordering, ops);
  d.realizable = c1.feasible;
  d.windows = std::move(c1.windows);
  d.witness = c1.witness;
  d.violation = c1.violation;
  return d;
}

}  // namespace knnreal
