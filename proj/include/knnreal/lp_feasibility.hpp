#pragma once

// Coordinates for a feasible line ordering.
//
// Variables are the n-1 gaps between consecutive vertices of the ordering.
// Each vertex contributes a "left" row (its farthest window member on the
// left beats the first outsider on the right) and a "right" row (mirror),
// both with slack -1; the slack is repaid by adding 1/n to every gap.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "knnreal/error.hpp"
#include "knnreal/knn_oracle.hpp"
#include "knnreal/line_realizer.hpp"
#include "knnreal/rational.hpp"

namespace knnreal {

enum class RowKind { Left, Right, Generic };

/// Sparse row sum_j coeff_j * x_j <= bound. Terms sorted by index, no zeros.
struct LpRow {
  std::vector<std::pair<std::uint32_t, int>> terms;
  Rational bound = -1;
  RowKind kind = RowKind::Generic;
  std::uint32_t position = 0;  // ordering position of the owning vertex
};

/// A x <= b subject to x >= 0.
struct LpSystem {
  std::size_t variables = 0;
  std::vector<LpRow> rows;

  /// Adds a row, merging repeated indices and dropping zero coefficients.
  void add_row(std::vector<std::pair<std::uint32_t, int>> terms, Rational bound,
               RowKind kind = RowKind::Generic, std::uint32_t position = 0) {
    std::sort(terms.begin(), terms.end());
    LpRow row;
    for (const auto& [j, c] : terms) {
      if (j >= variables)
        throw Error(ErrorCode::DimensionMismatch, "row refers to variable " + std::to_string(j));
      if (!row.terms.empty() && row.terms.back().first == j)
        row.terms.back().second += c;
      else
        row.terms.emplace_back(j, c);
      if (row.terms.back().second == 0) row.terms.pop_back();
    }
    row.bound = std::move(bound);
    row.kind = kind;
    row.position = position;
    rows.push_back(std::move(row));
  }
};

/// Emits the left and right gap constraints of every vertex, suppressing a
/// row when its outside neighbor would fall off the end of the ordering.
/// Windows are 0-based block starts as returned by check_condition1.
inline LpSystem build_lp(const VertexOrdering& vo, const std::vector<std::uint32_t>& windows,
                         std::size_t k) {
  const std::size_t n = vo.size();
  if (windows.size() != n)
    throw Error(ErrorCode::WindowsInvalid, "one window per vertex required");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = windows[i];
    if (p > i || i > p + k || p + k >= n || (i > 0 && p < windows[i - 1]))
      throw Error(ErrorCode::WindowsInvalid, "window " + std::to_string(p) +
                                                 " invalid at position " + std::to_string(i));
  }
  LpSystem sys;
  sys.variables = n == 0 ? 0 : n - 1;
  std::vector<std::pair<std::uint32_t, int>> terms;
  auto range = [&](std::size_t lo, std::size_t hi, int c) {  // inclusive, may be empty
    for (std::size_t j = lo; j <= hi && j < sys.variables; ++j)
      terms.emplace_back(static_cast<std::uint32_t>(j), c);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = windows[i];
    if (p + k + 1 < n) {
      terms.clear();
      if (i > p) range(p, i - 1, +1);
      range(i, p + k, -1);
      sys.add_row(terms, -1, RowKind::Left, static_cast<std::uint32_t>(i));
    }
    if (p >= 1) {
      terms.clear();
      if (p + k >= i + 1) range(i, p + k - 1, +1);
      range(p - 1, i - 1, -1);
      sys.add_row(terms, -1, RowKind::Right, static_cast<std::uint32_t>(i));
    }
  }
  return sys;
}

/// Exact re-substitution: x >= 0 and every row holds.
inline bool satisfies(const LpSystem& sys, const std::vector<Rational>& x) {
  if (x.size() != sys.variables) return false;
  for (const auto& v : x)
    if (sgn(v) < 0) return false;
  for (const auto& row : sys.rows) {
    Rational lhs = 0;
    for (const auto& [j, c] : row.terms) lhs += c * x[j];
    if (lhs > row.bound) return false;
  }
  return true;
}

/// Independent check of an infeasibility certificate.
inline bool is_farkas_certificate(const LpSystem& sys, const std::vector<Rational>& y) {
  if (y.size() != sys.rows.size()) return false;
  std::vector<Rational> aty(sys.variables, 0);
  Rational by = 0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    if (sgn(y[r]) < 0) return false;
    for (const auto& [j, c] : sys.rows[r].terms) aty[j] += c * y[r];
    by += sys.rows[r].bound * y[r];
  }
  for (const auto& a : aty)
    if (sgn(a) < 0) return false;
  return sgn(by) < 0;
}

/// With every bound negative, the feasible set is closed under scaling by
/// factors >= 1. If A x < 0 on every row, scale x just enough.
inline bool rescale_into(const LpSystem& sys, std::vector<Rational>& x) {
  Rational lambda = 0;
  for (const auto& row : sys.rows) {
    if (sgn(row.bound) >= 0) return false;
    Rational lhs = 0;
    for (const auto& [j, c] : row.terms) lhs += c * x[j];
    if (sgn(lhs) >= 0) return false;
    Rational need = row.bound / lhs;
    if (need > lambda) lambda = need;
  }
  for (auto& v : x) v *= lambda;
  return satisfies(sys, x);
}

struct LpSolution {
  bool feasible = false;
  std::vector<Rational> values;       // x, when feasible
  std::vector<Rational> certificate;  // y >= 0 with A^T y >= 0, b^T y < 0
  std::size_t pivots = 0;
  bool exact_pivoting = false;  // false when a floating-point basis sufficed
};

struct LpOptions {
  /// Try a double-precision simplex first and certify its point exactly.
  bool float_first = true;
};

namespace detail {

template <class S>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double eps = 1e-9;
  static int sign(double v) { return v > eps ? 1 : (v < -eps ? -1 : 0); }
  static void submul(double& a, double b, double c) { a -= b * c; }
  static double from(const Rational& r) { return r.get_d(); }
};

template <>
struct Arith<Rational> {
  static int sign(const Rational& v) { return sgn(v); }
  static void submul(Rational& a, const Rational& b, const Rational& c) {
    thread_local Rational t;
    mpq_mul(t.get_mpq_t(), b.get_mpq_t(), c.get_mpq_t());
    mpq_sub(a.get_mpq_t(), a.get_mpq_t(), t.get_mpq_t());
  }
  static const Rational& from(const Rational& r) { return r; }
};

template <class S>
struct Phase1 {
  enum class Outcome { Feasible, Infeasible, GaveUp } outcome = Outcome::GaveUp;
  std::vector<S> x;
  std::vector<S> y;
  std::size_t pivots = 0;
};

/// Primal phase 1 on the dictionary  s = b - A x + t,  maximizing -t.
///
/// Rows are stored as  basic + sum_c D[r][c] * nonbasic_c = rhs, with the
/// objective kept as one more row. Entering columns follow Dantzig's rule
/// until a degenerate pivot, then Bland's rule until the objective moves
/// again, which rules out cycling.
template <class S>
Phase1<S> phase1(const LpSystem& sys, std::size_t max_pivots) {
  using A = Arith<S>;
  const std::size_t m = sys.variables;
  const std::size_t rows = sys.rows.size();
  const std::size_t cols = m + 1;  // structural variables, then the artificial t
  const std::size_t art = m;
  const std::size_t obj = rows;
  // Variable ids: 0..m-1 structural, m artificial, m+1.. slack.
  std::vector<std::uint32_t> basic(rows + 1), nonbasic(cols);
  std::vector<S> tab((rows + 1) * cols, S(0));
  std::vector<S> rhs(rows + 1, S(0));
  auto at = [&](std::size_t r, std::size_t c) -> S& { return tab[r * cols + c]; };
  for (std::size_t r = 0; r < rows; ++r) {
    basic[r] = static_cast<std::uint32_t>(m + 1 + r);
    for (const auto& [j, c] : sys.rows[r].terms) at(r, j) = S(c);
    at(r, art) = S(-1);
    rhs[r] = A::from(sys.rows[r].bound);
  }
  for (std::size_t c = 0; c < cols; ++c) nonbasic[c] = static_cast<std::uint32_t>(c);
  at(obj, art) = S(1);  // w + t = 0

  Phase1<S> out;
  std::vector<std::size_t> nz;
  S inv, f;
  auto pivot = [&](std::size_t pr, std::size_t pc) {
    ++out.pivots;
    inv = S(1) / at(pr, pc);
    nz.clear();
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == pc || A::sign(at(pr, c)) == 0) continue;
      at(pr, c) *= inv;
      nz.push_back(c);
    }
    rhs[pr] *= inv;
    at(pr, pc) = inv;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr || A::sign(at(r, pc)) == 0) continue;
      f = at(r, pc);
      for (std::size_t c : nz) A::submul(at(r, c), f, at(pr, c));
      A::submul(rhs[r], f, rhs[pr]);
      at(r, pc) = -f * inv;
    }
    std::swap(basic[pr], nonbasic[pc]);
  };

  auto extract_x = [&] {
    out.outcome = Phase1<S>::Outcome::Feasible;
    out.x.assign(m, S(0));
    for (std::size_t r = 0; r < rows; ++r)
      if (basic[r] < m) out.x[basic[r]] = rhs[r];
    return out;
  };

  std::size_t worst = rows;
  for (std::size_t r = 0; r < rows; ++r)
    if (A::sign(rhs[r]) < 0 && (worst == rows || rhs[r] < rhs[worst])) worst = r;
  if (worst == rows) return extract_x();
  pivot(worst, art);  // every row is now primal feasible

  bool bland = false;
  while (true) {
    std::size_t art_row = rows;
    for (std::size_t r = 0; r < rows; ++r)
      if (basic[r] == art) art_row = r;
    if (art_row == rows || A::sign(rhs[art_row]) == 0) return extract_x();
    if (out.pivots >= max_pivots) return out;

    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (A::sign(at(obj, c)) >= 0) continue;
      if (enter == cols) enter = c;
      else if (bland ? nonbasic[c] < nonbasic[enter] : at(obj, c) < at(obj, enter)) enter = c;
    }
    if (enter == cols) {
      // Optimal with t > 0. Slack reduced costs are the Farkas multipliers.
      out.outcome = Phase1<S>::Outcome::Infeasible;
      out.y.assign(rows, S(0));
      for (std::size_t c = 0; c < cols; ++c)
        if (nonbasic[c] > m) out.y[nonbasic[c] - m - 1] = at(obj, c);
      return out;
    }

    std::size_t leave = rows;
    S best = S(0);
    for (std::size_t r = 0; r < rows; ++r) {
      if (A::sign(at(r, enter)) <= 0) continue;
      S ratio = rhs[r] / at(r, enter);
      bool take = leave == rows || ratio < best;
      if (!take && ratio == best) {
        // Prefer driving t out; otherwise smallest basic id.
        take = basic[leave] != art && (basic[r] == art || basic[r] < basic[leave]);
      }
      if (take) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) return out;  // unbounded phase 1 cannot happen in exact arithmetic
    bland = A::sign(rhs[leave]) == 0;
    pivot(leave, enter);
  }
}

}  // namespace detail


/// Decides A x <= b, x >= 0.
///
/// When every bound is negative the feasible set is a cone shifted away
/// from the origin, so tightening each bound by a factor in (1, 3/2] keeps
/// feasibility unchanged in both directions and breaks the massive
/// degeneracy of uniform bounds. A certificate for the tightened system is
/// also one for the original, because b^T y < 0 for every nonzero y >= 0.
///
/// A floating-point phase 1 runs first. Its point is converted to rationals
/// exactly and accepted only if it satisfies every row exactly, possibly
/// after clamping tiny negatives and uniform rescaling. Otherwise exact
/// rational pivoting decides.
inline LpSolution solve_feasibility(const LpSystem& sys, LpOptions opt = {}) {
  const bool all_negative = std::all_of(sys.rows.begin(), sys.rows.end(),
                                        [](const LpRow& r) { return sgn(r.bound) < 0; });
  LpSystem tight;
  const LpSystem* work = &sys;
  if (all_negative && !sys.rows.empty()) {
    tight = sys;
    std::uint64_t state = 0x9e3779b97f4a7c15ull;  // fixed stream: results are reproducible
    for (auto& row : tight.rows) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      row.bound *= Rational(static_cast<long>(1024 + 1 + ((state >> 33) % 512)), 1024);
    }
    work = &tight;
  }

  LpSolution sol;
  const std::size_t cap = 50 * (sys.rows.size() + sys.variables + 10);
  if (opt.float_first) {
    const auto approx = detail::phase1<double>(*work, cap);
    sol.pivots = approx.pivots;
    if (approx.outcome == detail::Phase1<double>::Outcome::Feasible) {
      std::vector<Rational> x(approx.x.size());
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = approx.x[j] > 0 ? to_rational(approx.x[j]) : 0;
      if (satisfies(sys, x) || rescale_into(sys, x)) {
        sol.feasible = true;
        sol.values = std::move(x);
        return sol;
      }
    }
  }
  auto exact = detail::phase1<Rational>(*work, static_cast<std::size_t>(-1));
  sol.pivots += exact.pivots;
  sol.exact_pivoting = true;
  using O = detail::Phase1<Rational>::Outcome;
  if (exact.outcome == O::Feasible) {
    sol.feasible = true;
    sol.values = std::move(exact.x);
  } else if (exact.outcome == O::Infeasible) {
    sol.certificate = std::move(exact.y);
  } else {
    throw InvariantViolation("exact phase 1 stopped without a verdict");
  }
  return sol;
}

struct LineRealization {
  VertexOrdering ordering;
  std::vector<Rational> coordinates;  // coordinates[i] is the position of ordering[i]

  /// Vertex v placed at point v.
  Realization realization() const {
    std::vector<Rational> c(coordinates.size());
    for (std::size_t i = 0; i < ordering.size(); ++i) c[ordering[i]] = coordinates[i];
    return identity_realization(PointSet(1, std::move(c)), Provenance::ExactLine);
  }
};

/// Prefix sums of the gaps, each raised by 1/n so the slack -1 system yields
/// strict inequalities.
inline std::vector<Rational> extract_coordinates(const std::vector<Rational>& gaps, std::size_t n) {
  if (n == 0) return {};
  if (gaps.size() + 1 != n)
    throw Error(ErrorCode::DimensionMismatch, "need n-1 gaps");
  const Rational bump(1, static_cast<unsigned long>(n));
  std::vector<Rational> x(n);
  x[0] = 0;
  for (std::size_t i = 1; i < n; ++i) x[i] = x[i - 1] + gaps[i - 1] + bump;
  return x;
}

/// As above, then certifies the result against g with the strict oracle.
inline LineRealization extract_coordinates(const DirectedGraph& g, const VertexOrdering& vo,
                                           const std::vector<Rational>& gaps) {
  LineRealization lr{vo, extract_coordinates(gaps, vo.size())};
  if (!verify_realization(g, lr.realization()))
    throw Error(ErrorCode::PostVerifyFailed, "extracted coordinates do not realize the graph");
  return lr;
}

struct Realize1D {
  Decision1D decision;
  std::optional<LineRealization> line;
  std::size_t lp_rows = 0;
  std::size_t lp_pivots = 0;
};

/// Decide, then solve the gap system for exact coordinates.
inline Realize1D realize_1d(const DirectedGraph& g) {
  Realize1D out;
  out.decision = decide_1d(g);
  if (!out.decision.realizable) return out;
  const auto sys = build_lp(out.decision.ordering, out.decision.windows, g.k());
  const auto sol = solve_feasibility(sys);
  out.lp_rows = sys.rows.size();
  out.lp_pivots = sol.pivots;
  if (!sol.feasible) {
    std::ostringstream msg;
    msg << "gap system infeasible for an ordering that passed the window check (n=" << g.n()
        << ", k=" << g.k() << ", rows=" << sys.rows.size() << ")";
    throw InvariantViolation(msg.str());
  }
  if (!satisfies(sys, sol.values))
    throw InvariantViolation("simplex returned a point violating the gap system");
  out.line = extract_coordinates(g, out.decision.ordering, sol.values);
  return out;
}

/// One row per line: signed 1-based variable indices, then "<= bound".
/// A coefficient c contributes |c| copies of its signed index.
inline void write_lp(std::ostream& os, const LpSystem& sys) {
  os << "variables " << sys.variables << '\n';
  for (const auto& row : sys.rows) {
    for (const auto& [j, c] : row.terms)
      for (int t = 0; t < std::abs(c); ++t) os << (c > 0 ? '+' : '-') << (j + 1) << ' ';
    os << "<= " << row.bound.get_str() << '\n';
  }
}

inline LpSystem read_lp(std::istream& is) {
  LpSystem sys;
  std::string line, tok;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    if (!(ls >> tok)) continue;
    if (!header) {
      if (tok != "variables" || !(ls >> sys.variables))
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected 'variables <m>'");
      header = true;
      continue;
    }
    std::vector<std::pair<std::uint32_t, int>> terms;
    do {
      if (tok == "<=") break;
      if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-'))
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": bad term '" + tok + "'");
      const auto j = std::stoul(tok.substr(1));
      if (j == 0 || j > sys.variables)
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": index out of range");
      terms.emplace_back(static_cast<std::uint32_t>(j - 1), tok[0] == '+' ? 1 : -1);
    } while (ls >> tok);
    if (tok != "<=" || !(ls >> tok))
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": missing bound");
    sys.add_row(std::move(terms), parse_rational(tok));
  }
  return sys;
}

}  // namespace knnreal
