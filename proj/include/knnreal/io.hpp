#pragma once

// Plain-text formats. Vertex ids are 1-based in every file.
//
//   graph:        "n k", then n*k lines "u v"
//   realization:  "d", then n lines "v x_1 ... x_d" (rationals or decimals)
//   report:       "key=value" lines
//
// '#' starts a comment anywhere; blank lines are ignored.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "knnreal/error.hpp"
#include "knnreal/graph.hpp"
#include "knnreal/points.hpp"
#include "knnreal/rational.hpp"

namespace knnreal {

namespace detail {

/// Yields (line number, tokens) for each non-empty line.
class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(is_, line)) {
      ++lineno_;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      tokens.clear();
      for (std::string t; ls >> t;) tokens.push_back(std::move(t));
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno_) + ": " + what);
  }

  std::size_t lineno() const noexcept { return lineno_; }

 private:
  std::istream& is_;
  std::size_t lineno_ = 0;
};

inline std::uint64_t parse_count(const LineReader& r, const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    r.fail("expected a non-negative integer, got '" + tok + "'");
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    r.fail("integer out of range: '" + tok + "'");
  }
}

}  // namespace detail

inline DirectedGraph read_graph(std::istream& is) {
  detail::LineReader r(is);
  std::vector<std::string> t;
  if (!r.next(t)) r.fail("empty graph file");
  if (t.size() != 2) r.fail("header must be 'n k'");
  const auto n = detail::parse_count(r, t[0]);
  const auto k = detail::parse_count(r, t[1]);
  if (n > (std::uint64_t{1} << 31) || k > n) r.fail("implausible header");
  std::vector<Edge> edges;
  edges.reserve(n * k);
  while (r.next(t)) {
    if (t.size() != 2) r.fail("edge lines are 'u v'");
    const auto u = detail::parse_count(r, t[0]);
    const auto v = detail::parse_count(r, t[1]);
    if (u < 1 || u > n || v < 1 || v > n) r.fail("vertex id out of range 1.." + std::to_string(n));
    if (edges.size() == n * k) r.fail("more than n*k edges");
    edges.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
  }
  if (edges.size() != n * k)
    throw Error(ErrorCode::Parse, "expected " + std::to_string(n * k) + " edges, found " +
                                      std::to_string(edges.size()));
  return build_graph(n, k, edges);
}

inline void write_graph(std::ostream& os, const DirectedGraph& g) {
  os << g.n() << ' ' << g.k() << '\n';
  for (const auto& [u, v] : g.edges()) os << u + 1 << ' ' << v + 1 << '\n';
}

/// Vertex v (1-based in the file) is placed at points[v-1].
inline Realization read_realization(std::istream& is) {
  detail::LineReader r(is);
  std::vector<std::string> t;
  if (!r.next(t)) r.fail("empty realization file");
  if (t.size() != 1) r.fail("first line must be the dimension");
  const auto d = detail::parse_count(r, t[0]);
  if (d == 0) r.fail("dimension must be positive");
  std::vector<std::pair<std::uint64_t, std::vector<Rational>>> rows;
  while (r.next(t)) {
    if (t.size() != d + 1) r.fail("expected a vertex id and " + std::to_string(d) + " coordinates");
    std::vector<Rational> c;
    for (std::size_t j = 1; j <= d; ++j) {
      try {
        c.push_back(parse_rational(t[j]));
      } catch (const Error& e) {
        r.fail(e.message());
      }
    }
    rows.emplace_back(detail::parse_count(r, t[0]), std::move(c));
  }
  const std::size_t n = rows.size();
  std::vector<Rational> coords(n * d);
  std::vector<char> seen(n, 0);
  for (auto& [id, c] : rows) {
    if (id < 1 || id > n)
      throw Error(ErrorCode::Parse, "vertex id " + std::to_string(id) + " outside 1.." + std::to_string(n));
    if (seen[id - 1]) throw Error(ErrorCode::Parse, "vertex id " + std::to_string(id) + " repeated");
    seen[id - 1] = 1;
    std::move(c.begin(), c.end(), coords.begin() + static_cast<std::ptrdiff_t>((id - 1) * d));
  }
  return identity_realization(PointSet(d, std::move(coords)), Provenance::UserSupplied);
}

inline void write_realization(std::ostream& os, const Realization& r) {
  const std::size_t d = r.points.dim();
  os << d << '\n';
  for (std::size_t v = 0; v < r.assignment.size(); ++v) {
    os << v + 1;
    for (const auto& x : r.position(v)) os << ' ' << format_rational(x);
    os << '\n';
  }
}

/// Points use the realization format with vertex ids as point labels.
inline PointSet read_points(std::istream& is) { return read_realization(is).points; }

inline void write_points(std::ostream& os, const PointSet& p) {
  write_realization(os, identity_realization(p));
}

inline void write_points(std::ostream& os, const FloatPointSet& p) { write_points(os, to_exact(p)); }

/// Ordered key=value report. Keys are stable; values never contain newlines.
class RunReport {
 public:
  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = std::move(value);
        return;
      }
    entries_.emplace_back(std::move(key), std::move(value));
  }

  template <class T>
  void set(std::string key, const T& value) {
    std::ostringstream ss;
    ss << value;
    set(std::move(key), ss.str());
  }

  const std::string* get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return &v;
    return nullptr;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  void write(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
  }

  static RunReport read(std::istream& is) {
    RunReport rep;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected key=value");
      rep.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return rep;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Space-separated 1-based ids.
template <class Range>
std::string join_ids(const Range& ids) {
  std::string s;
  for (auto v : ids) {
    if (!s.empty()) s += ' ';
    s += std::to_string(v + 1);
  }
  return s;
}

}  // namespace knnreal
