#pragma once

// Approximate embedding in R^d: cut the graph into small pieces, find a
// quasi-realization of every piece, and place the pieces far apart along the
// first axis. Edges between pieces are the only ones sacrificed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "knnreal/balanced_cut.hpp"
#include "knnreal/generators.hpp"
#include "knnreal/graph.hpp"
#include "knnreal/knn_oracle.hpp"
#include "knnreal/lambda_check.hpp"
#include "knnreal/lp_feasibility.hpp"
#include "knnreal/points.hpp"

namespace knnreal {

/// Induced piece of a digraph; out-degrees may be below k.
struct Fragment {
  std::vector<Vertex> vertices;          // global ids
  std::vector<std::vector<Vertex>> out;  // local ids, sorted

  std::size_t size() const noexcept { return vertices.size(); }
  std::size_t edge_count() const noexcept {
    std::size_t s = 0;
    for (const auto& o : out) s += o.size();
    return s;
  }
};

/// Fragment on `members` keeping the edges of g that survive `removed`.
inline Fragment make_fragment(const DirectedGraph& g, const std::vector<Vertex>& members,
                              const std::vector<Edge>& removed = {}) {
  Fragment f;
  f.vertices = members;
  std::vector<std::uint32_t> local(g.n(), static_cast<std::uint32_t>(-1));
  for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
  f.out.resize(members.size());
  for (std::uint32_t i = 0; i < members.size(); ++i) {
    for (Vertex w : g.out(members[i])) {
      if (local[w] == static_cast<std::uint32_t>(-1)) continue;
      if (std::binary_search(removed.begin(), removed.end(), Edge{members[i], w})) continue;
      f.out[i].push_back(local[w]);
    }
    std::sort(f.out[i].begin(), f.out[i].end());
  }
  return f;
}

/// Fragment from local edges, for tests and tools.
inline Fragment make_fragment(std::size_t n, const std::vector<Edge>& edges) {
  Fragment f;
  f.vertices.resize(n);
  std::iota(f.vertices.begin(), f.vertices.end(), Vertex{0});
  f.out.resize(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error(ErrorCode::IdOutOfRange, "fragment edge out of range");
    f.out[u].push_back(v);
  }
  for (auto& o : f.out) {
    std::sort(o.begin(), o.end());
    if (std::adjacent_find(o.begin(), o.end()) != o.end())
      throw Error(ErrorCode::DuplicateEdge, "fragment has a repeated edge");
  }
  return f;
}

namespace detail {

inline void check_fragment(const Fragment& f, std::size_t k) {
  if (f.size() < k + 1)
    throw Error(ErrorCode::FragmentTooSmall, "fragment has " + std::to_string(f.size()) +
                                                 " vertices, supergraphs need k+1");
  for (std::size_t v = 0; v < f.size(); ++v)
    if (f.out[v].size() > k)
      throw Error(ErrorCode::FragmentOverfull, "vertex " + std::to_string(f.vertices[v]) +
                                                   " has out-degree above k");
}

/// C(n, r), saturating at `cap`.
inline std::uint64_t binom_capped(std::uint64_t n, std::uint64_t r, std::uint64_t cap) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  long double acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * static_cast<long double>(n - r + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

}  // namespace detail

/// Number of k-regular completions, saturating at `cap`.
inline std::uint64_t supergraph_count(const Fragment& f, std::size_t k,
                                      std::uint64_t cap = static_cast<std::uint64_t>(-1)) {
  detail::check_fragment(f, k);
  long double acc = 1;
  for (std::size_t v = 0; v < f.size(); ++v) {
    acc *= static_cast<long double>(
        detail::binom_capped(f.size() - 1 - f.out[v].size(), k - f.out[v].size(), cap));
    if (acc > static_cast<long double>(cap)) return cap;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

/// Streams every k-regular supergraph on the fragment's vertex set (local
/// ids). Order is lexicographic in the per-vertex choice of added targets,
/// with the lowest vertex most significant.
class SupergraphEnumerator {
 public:
  SupergraphEnumerator(const Fragment& f, std::size_t k) : f_(&f), k_(k) {
    detail::check_fragment(f, k);
    const std::size_t n = f.size();
    cand_.resize(n);
    pick_.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      for (Vertex w = 0; w < n; ++w)
        if (w != v && !std::binary_search(f.out[v].begin(), f.out[v].end(), w)) cand_[v].push_back(w);
      pick_[v].resize(k - f.out[v].size());
      std::iota(pick_[v].begin(), pick_[v].end(), std::size_t{0});
    }
  }

  /// Writes the next supergraph into `out`; false once exhausted.
  bool next(DirectedGraph& out) {
    if (done_) return false;
    std::vector<Edge> edges;
    edges.reserve(f_->size() * k_);
    for (Vertex v = 0; v < f_->size(); ++v) {
      for (Vertex w : f_->out[v]) edges.emplace_back(v, w);
      for (auto i : pick_[v]) edges.emplace_back(v, cand_[v][i]);
    }
    out = build_graph(f_->size(), k_, edges);
    advance();
    return true;
  }

 private:
  // Next r-combination of {0..m-1} in lexicographic order; false on wrap.
  static bool next_combination(std::vector<std::size_t>& c, std::size_t m) {
    const std::size_t r = c.size();
    for (std::size_t i = r; i-- > 0;) {
      if (c[i] < m - r + i) {
        ++c[i];
        for (std::size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
        return true;
      }
    }
    std::iota(c.begin(), c.end(), std::size_t{0});
    return false;
  }

  void advance() {
    for (std::size_t v = f_->size(); v-- > 0;)
      if (next_combination(pick_[v], cand_[v].size())) return;
    done_ = true;
  }

  const Fragment* f_;
  std::size_t k_;
  std::vector<std::vector<Vertex>> cand_;
  std::vector<std::vector<std::size_t>> pick_;
  bool done_ = false;
};

/// Quasi-realization test: for every edge (u,v) at most k vertices other
/// than u lie within distance |uv| of u. Points are indexed by local id.
template <class Scalar>
bool is_quasi_realization(const Fragment& f, std::size_t k, const BasicPointSet<Scalar>& p,
                          DistanceOrder<Scalar> order = {}) {
  if (p.size() != f.size())
    throw Error(ErrorCode::DimensionMismatch, "one point per fragment vertex required");
  for (Vertex u = 0; u < f.size(); ++u) {
    if (f.out[u].empty()) continue;
    Scalar reach = 0;
    for (Vertex v : f.out[u]) {
      Scalar d = squared_distance(p[u], p[v]);
      if (d > reach) reach = d;
    }
    std::size_t within = 0;
    for (Vertex w = 0; w < f.size(); ++w)
      if (w != u && order.less_equal(squared_distance(p[u], p[w]), reach)) ++within;
    if (within > k) return false;
  }
  return true;
}

enum class ComponentStatus { CertifiedQuasi, HeuristicQuasi, CertifiedImpossible, Unknown };

constexpr std::string_view to_string(ComponentStatus s) noexcept {
  switch (s) {
    case ComponentStatus::CertifiedQuasi: return "certified-quasi";
    case ComponentStatus::HeuristicQuasi: return "heuristic-quasi";
    case ComponentStatus::CertifiedImpossible: return "certified-impossible";
    case ComponentStatus::Unknown: return "unknown";
  }
  return "unknown";
}

struct ComponentSolution {
  std::vector<Vertex> vertices;  // global ids; points[i] belongs to vertices[i]
  PointSet points;               // always present, best effort when not solved
  ComponentStatus status = ComponentStatus::Unknown;
  /// One pair-order cycle (global ids) per supergraph when impossible.
  std::vector<std::vector<VertexPair>> certificates;
  std::size_t supergraphs_checked = 0;
  std::size_t restarts_used = 0;
};

struct SolveOptions {
  std::uint64_t supergraph_budget = 10000;
  std::size_t restarts = 50;
  std::size_t iterations = 500;
  double margin = 1e-3;  // hinge margin, relative to squared diameter
  unsigned rational_bits = 40;
  std::uint64_t seed = 0;
};

namespace detail {

using Mat = Eigen::MatrixXd;

inline Mat lattice(std::size_t n, std::size_t d) {
  Mat x = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
  return x;
}

/// Classical scaling of undirected hop distances.
inline Mat mds_init(const Fragment& f, std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(f.size());
  std::vector<std::vector<Vertex>> adj(f.size());
  for (Vertex u = 0; u < f.size(); ++u)
    for (Vertex v : f.out[u]) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  Mat d2(n, n);
  for (Vertex s = 0; s < f.size(); ++s) {
    std::vector<int> dist(f.size(), -1);
    std::vector<Vertex> q{s};
    dist[s] = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (Vertex w : adj[q[i]])
        if (dist[w] < 0) {
          dist[w] = dist[q[i]] + 1;
          q.push_back(w);
        }
    const int far = static_cast<int>(f.size());
    for (Vertex t = 0; t < f.size(); ++t) {
      const double h = dist[t] < 0 ? far : dist[t];
      d2(s, t) = h * h;
    }
  }
  const Mat j = Mat::Identity(n, n) - Mat::Constant(n, n, 1.0 / static_cast<double>(n));
  const Mat b = -0.5 * j * d2 * j;
  Eigen::SelfAdjointEigenSolver<Mat> es(b);
  Mat x(n, static_cast<Eigen::Index>(d));
  std::normal_distribution<double> jitter(0.0, 1e-3);
  for (std::size_t c = 0; c < d; ++c) {
    const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(c);
    const double lambda = col >= 0 ? std::max(es.eigenvalues()(col), 0.0) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      x(i, static_cast<Eigen::Index>(c)) =
          (col >= 0 ? es.eigenvectors()(i, col) * std::sqrt(lambda) : 0.0) + jitter(rng);
  }
  return x;
}

/// Centers and scales to unit diameter.
inline void normalize(Mat& x) {
  x.rowwise() -= x.colwise().mean();
  double diam2 = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) diam2 = std::max(diam2, (x.row(i) - x.row(j)).squaredNorm());
  if (diam2 > 0) x /= std::sqrt(diam2);
}

/// Hinge loss of the quasi-predicate with per-vertex allowance for
/// k - deg(u) intruders (the nearest non-neighbors). Fills the gradient.
inline double quasi_loss(const Fragment& f, std::size_t k, const Mat& x, double margin, Mat& grad) {
  const std::size_t n = f.size();
  grad.setZero(x.rows(), x.cols());
  double loss = 0;
  std::vector<double> d(n);
  std::vector<Vertex> others;
  std::vector<char> is_nb(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    const auto& nb = f.out[u];
    if (nb.empty()) continue;
    for (Vertex w = 0; w < n; ++w) d[w] = (x.row(u) - x.row(w)).squaredNorm();
    double reach = 0;
    for (Vertex v : nb) {
      reach = std::max(reach, d[v]);
      is_nb[v] = 1;
    }
    others.clear();
    for (Vertex w = 0; w < n; ++w)
      if (w != u && !is_nb[w] && d[w] < reach + margin) others.push_back(w);
    const std::size_t allowance = k - nb.size();
    if (others.size() > allowance) {
      std::sort(others.begin(), others.end(), [&](Vertex a, Vertex b) { return d[a] < d[b]; });
      // The nearest `allowance` intruders are tolerated; the rest must move
      // out past every neighbor.
      for (std::size_t t = allowance; t < others.size(); ++t) {
        const Vertex w = others[t];
        for (Vertex v : nb) {
          const double h = d[v] - d[w] + margin;
          if (h <= 0) continue;
          loss += h;
          grad.row(u) += 2.0 * (x.row(w) - x.row(v));
          grad.row(v) -= 2.0 * (x.row(u) - x.row(v));
          grad.row(w) += 2.0 * (x.row(u) - x.row(w));
        }
      }
    }
    for (Vertex v : nb) is_nb[v] = 0;
  }
  return loss;
}

inline std::optional<PointSet> rationalized(const Mat& x, unsigned bits) {
  std::vector<Rational> c;
  c.reserve(static_cast<std::size_t>(x.size()));
  if (!x.allFinite()) return std::nullopt;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) c.push_back(rationalize(x(i, j), bits));
  try {
    return PointSet(static_cast<std::size_t>(x.cols()), std::move(c));
  } catch (const Error&) {
    return std::nullopt;  // two points collapsed onto one grid cell
  }
}

inline FloatPointSet as_points(const Mat& x) {
  std::vector<double> c;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) c.push_back(x(i, j));
  return FloatPointSet(static_cast<std::size_t>(x.cols()), std::move(c));
}

/// Exact line pipeline on each supergraph, up to the budget.
inline std::optional<PointSet> try_line_pipeline(const Fragment& f, std::size_t k, std::uint64_t budget) {
  if (supergraph_count(f, k, budget + 1) > budget) return std::nullopt;
  SupergraphEnumerator it(f, k);
  DirectedGraph sg;
  while (it.next(sg)) {
    if (!decide_1d(sg).realizable) continue;
    auto r = realize_1d(sg);
    if (!r.line) continue;
    auto pts = r.line->realization().points;
    if (is_quasi_realization(f, k, pts)) return pts;
  }
  return std::nullopt;
}

}  // namespace detail

/// Finds a quasi-realization of one piece in R^d, or certifies that none
/// exists in any dimension, or gives up.
inline ComponentSolution solve_component(const Fragment& f, std::size_t k, std::size_t d,
                                         const SolveOptions& opt = {}) {
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  for (const auto& o : f.out)
    if (o.size() > k) throw Error(ErrorCode::FragmentOverfull, "out-degree above k");
  ComponentSolution sol;
  sol.vertices = f.vertices;
  const std::size_t n = f.size();

  auto accept = [&](PointSet pts, ComponentStatus st) {
    sol.points = std::move(pts);
    sol.status = st;
    return sol;
  };

  if (n <= k) {
    // Every vertex has fewer than k others to count, so any distinct points work.
    auto pts = *detail::rationalized(detail::lattice(n, d), 0);
    return accept(std::move(pts), ComponentStatus::CertifiedQuasi);
  }

  if (d == 1)
    if (auto pts = detail::try_line_pipeline(f, k, opt.supergraph_budget))
      return accept(std::move(*pts), ComponentStatus::CertifiedQuasi);

  auto rng = substream(opt.seed, "solve_component");
  detail::Mat best;
  double best_loss = -1;
  bool heuristic = false;
  detail::Mat grad;
  for (std::size_t start = 0; start < opt.restarts; ++start) {
    sol.restarts_used = start + 1;
    detail::Mat x;
    if (start == 0) {
      x = detail::mds_init(f, d, rng);
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    }
    detail::normalize(x);
    for (std::size_t it = 0; it < opt.iterations; ++it) {
      const double loss = detail::quasi_loss(f, k, x, opt.margin, grad);
      if (best_loss < 0 || loss < best_loss) {
        best_loss = loss;
        best = x;
      }
      if (loss == 0) {
        if (auto pts = detail::rationalized(x, opt.rational_bits)) {
          if (is_quasi_realization(f, k, *pts)) return accept(std::move(*pts), ComponentStatus::CertifiedQuasi);
        }
        if (is_quasi_realization(f, k, detail::as_points(x))) heuristic = true;
        break;
      }
      double gmax = 0;
      for (Eigen::Index i = 0; i < grad.rows(); ++i) gmax = std::max(gmax, grad.row(i).norm());
      if (!(gmax > 0) || !std::isfinite(gmax)) break;  // stationary: try another start
      const double progress = static_cast<double>(it) / static_cast<double>(opt.iterations);
      const double lr = 0.05 * (1.0 - progress) + 0.002;
      x -= (lr / gmax) * grad;
      detail::normalize(x);
    }
    if (heuristic) break;
  }

  auto fallback = best.size() ? detail::rationalized(best, opt.rational_bits) : std::nullopt;
  if (!fallback) fallback = detail::rationalized(detail::lattice(n, d), 0);

  if (heuristic) return accept(std::move(*fallback), ComponentStatus::HeuristicQuasi);

  // Search failed. If every completion has a pair-order cycle, no
  // quasi-realization exists in any dimension.
  if (supergraph_count(f, k, opt.supergraph_budget + 1) <= opt.supergraph_budget) {
    SupergraphEnumerator it(f, k);
    DirectedGraph sg;
    std::vector<std::vector<VertexPair>> certs;
    bool all_cyclic = true;
    while (it.next(sg)) {
      ++sol.supergraphs_checked;
      auto lam = lambda_acyclic(sg);
      if (lam.realizable) {
        all_cyclic = false;
        break;
      }
      std::vector<VertexPair> cyc;
      for (auto p : lam.cycle) cyc.emplace_back(f.vertices[p.first], f.vertices[p.second]);
      certs.push_back(std::move(cyc));
    }
    if (all_cyclic) {
      sol.certificates = std::move(certs);
      return accept(std::move(*fallback), ComponentStatus::CertifiedImpossible);
    }
  }
  return accept(std::move(*fallback), ComponentStatus::Unknown);
}

enum class EmbedStatus { Success, CertifiedImpossible, Unknown };

constexpr std::string_view to_string(EmbedStatus s) noexcept {
  switch (s) {
    case EmbedStatus::Success: return "success";
    case EmbedStatus::CertifiedImpossible: return "certified-impossible";
    case EmbedStatus::Unknown: return "unknown";
  }
  return "unknown";
}

struct EmbeddingResult {
  EmbedStatus status = EmbedStatus::Unknown;
  Realization realization;
  ApproxScore score;
  CutResult cut;
  std::vector<ComponentSolution> components;
  Rational translation = 0;  // |x|, along the first axis
  std::size_t size_cap = 0;
};

namespace detail {

/// Rational upper bound on sqrt(q).
inline Rational sqrt_upper(const Rational& q) {
  Rational r = rationalize(std::sqrt(q.get_d()), 20);
  Rational step(1, 1 << 20);
  while (r * r < q) r += step;
  return r;
}

}  // namespace detail

/// Places component i at i * x + (local points minus the component's first
/// point), with |x| = 3 * (largest diameter) * (components + 1).
inline EmbeddingResult assemble_embedding(std::vector<ComponentSolution> solutions, std::size_t d,
                                          const DirectedGraph& g, CutResult cut,
                                          bool allow_unsolved = false) {
  for (const auto& s : solutions) {
    if (allow_unsolved) break;
    if (s.status == ComponentStatus::CertifiedImpossible)
      throw Error(ErrorCode::ImpossibleComponent, "a component has no quasi-realization in any dimension");
    if (s.status == ComponentStatus::Unknown)
      throw Error(ErrorCode::UnsolvedComponent, "a component was not solved");
  }
  Rational diam2 = 0;
  for (const auto& s : solutions) {
    if (s.points.dim() != d) throw Error(ErrorCode::DimensionMismatch, "component dimension differs");
    for (std::size_t i = 0; i < s.points.size(); ++i)
      for (std::size_t j = i + 1; j < s.points.size(); ++j)
        diam2 = std::max(diam2, squared_distance(s.points[i], s.points[j]));
  }
  const Rational diam = sgn(diam2) > 0 ? detail::sqrt_upper(diam2) : Rational(1);
  EmbeddingResult res;
  res.translation = 3 * diam * static_cast<unsigned long>(solutions.size() + 1);

  std::vector<Rational> coords(g.n() * d);
  std::vector<char> placed(g.n(), 0);
  for (std::size_t c = 0; c < solutions.size(); ++c) {
    const auto& s = solutions[c];
    const Rational shift = res.translation * static_cast<unsigned long>(c + 1);
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      const Vertex v = s.vertices[i];
      placed[v] = 1;
      for (std::size_t j = 0; j < d; ++j)
        coords[v * d + j] = s.points[i][j] - s.points[0][j] + (j == 0 ? shift : Rational(0));
    }
  }
  if (std::count(placed.begin(), placed.end(), 1) != static_cast<std::ptrdiff_t>(g.n()))
    throw Error(ErrorCode::DimensionMismatch, "components do not cover the graph");
  res.realization = identity_realization(PointSet(d, std::move(coords)), Provenance::HeuristicComponent);
  res.score = sigma_score(g, res.realization);

  const bool all_certified = std::all_of(solutions.begin(), solutions.end(), [](const auto& s) {
    return s.status == ComponentStatus::CertifiedQuasi;
  });
  if (all_certified && res.score.preserved_edges + cut.removed_edges.size() < g.edge_count())
    throw InvariantViolation("assembled score below the kept-edge count");
  res.cut = std::move(cut);
  res.components = std::move(solutions);
  return res;
}

struct EmbedOptions {
  std::size_t size_cap = 0;  // 0: default_size_cap(k, eps)
  SolveOptions solve;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Cut, solve every piece (in parallel), assemble.
inline EmbeddingResult embed(const DirectedGraph& g, std::size_t d, const Rational& eps,
                             EmbedOptions opt = {}) {
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  if (sgn(eps) <= 0 || eps > 1) throw Error(ErrorCode::Usage, "eps must lie in (0, 1]");
  const std::size_t cap = opt.size_cap ? opt.size_cap : default_size_cap(g.k(), eps);
  auto cut = cut_edges(g, eps, cap, {16, opt.seed});

  const auto& members = cut.components.members;
  std::vector<ComponentSolution> sols(members.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c; (c = next++) < members.size();) {
      SolveOptions so = opt.solve;
      so.seed = substream(opt.seed, "component", c)();
      sols[c] = solve_component(make_fragment(g, members[c], cut.removed_edges), g.k(), d, so);
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, members.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  EmbedStatus status = EmbedStatus::Success;
  for (const auto& s : sols) {
    if (s.status == ComponentStatus::CertifiedImpossible) status = EmbedStatus::CertifiedImpossible;
    else if (s.status == ComponentStatus::Unknown && status == EmbedStatus::Success) status = EmbedStatus::Unknown;
  }
  auto res = assemble_embedding(std::move(sols), d, g, std::move(cut), true);
  res.status = status;
  res.size_cap = cap;
  return res;
}

}  // namespace knnreal
