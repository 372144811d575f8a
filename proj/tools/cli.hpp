#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "knnreal/knnreal.hpp"

namespace knnreal::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kUnknown = 2,
  kUsage = 64,
  kDataError = 65,
  kInternal = 70,
};

struct Style {
  bool color = false;

  std::string paint(std::string_view text, bool good) const {
    if (!color) return std::string(text);
    return std::string(good ? "\033[32m" : "\033[31m") + std::string(text) + "\033[0m";
  }
};

/// Styled output only on a terminal, and never when NO_COLOR is set.
inline Style default_style(bool is_tty) {
  const char* no_color = std::getenv("NO_COLOR");
  return Style{is_tty && (no_color == nullptr || *no_color == '\0')};
}

namespace detail {

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

inline DirectedGraph load_graph(const std::string& path) {
  Input in(path);
  try {
    return read_graph(in.stream());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

inline Realization load_realization(const std::string& path) {
  Input in(path);
  try {
    return read_realization(in.stream());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
  fn(f);
}

inline std::string decimal(const Rational& q, int digits = 6) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << q.get_d();
  return ss.str();
}

inline std::string pair_list(const std::vector<VertexPair>& pairs) {
  std::string s;
  for (const auto& p : pairs) {
    if (!s.empty()) s += ' ';
    s += '{' + std::to_string(p.first + 1) + ',' + std::to_string(p.second + 1) + '}';
  }
  return s;
}

inline Distribution parse_distribution(const std::string& name) {
  if (name == "uniform-box") return Distribution::UniformBox;
  if (name == "gaussian") return Distribution::Gaussian;
  if (name == "line-distinct-gaps") return Distribution::LineDistinctGaps;
  throw Error(ErrorCode::Usage, "unknown distribution '" + name + "'");
}

inline bool is_data_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::Usage:
    case ErrorCode::ResourceLimit:
    case ErrorCode::Stuck:
    case ErrorCode::WindowsInvalid:
    case ErrorCode::PostVerifyFailed:
    case ErrorCode::UnsolvedComponent:
    case ErrorCode::ImpossibleComponent:
      return false;
    default:
      return true;
  }
}

inline std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

struct Options {
  std::uint64_t seed = 0;
  std::string eps = "0.15";
  std::size_t dim = 2;
  std::size_t size_cap = 0;
  std::uint64_t budget = SolveOptions{}.supergraph_budget;
  bool use_float = false;
  std::string out;

  // subcommand specific
  std::string graph_path;
  std::string realization_path;
  std::string points_path;
  std::string kind = "points";
  std::string dist = "uniform-box";
  std::size_t n = 10;
  std::size_t k = 2;
  std::size_t threads = 0;
  std::size_t max_vertices = LambdaOptions{}.max_vertices;
  std::size_t bench_k = 4;
  unsigned min_log = 10;
  unsigned max_log = 17;
};

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline int cmd_gen(const Options& o, std::ostream& out, RunReport& rep) {
  const auto dist = parse_distribution(o.dist);
  rep.set("kind", o.kind);
  rep.set("n", o.n);
  rep.set("seed", o.seed);
  if (o.kind == "points") {
    auto p = gen_points(o.n, o.dim, o.seed, dist);
    emit(o.out, out, [&](std::ostream& os) { write_points(os, p); });
  } else if (o.kind == "knn-graph") {
    auto p = to_exact(gen_points(o.n, o.dim, o.seed, dist));
    auto g = knn_graph(p, o.k);
    emit(o.out, out, [&](std::ostream& os) { write_graph(os, g); });
  } else if (o.kind == "random-graph") {
    auto rng = substream(o.seed, "random-graph");
    auto g = random_regular_digraph(o.n, o.k, rng);
    emit(o.out, out, [&](std::ostream& os) { write_graph(os, g); });
  } else {
    throw Error(ErrorCode::Usage, "unknown --kind '" + o.kind + "'");
  }
  rep.set("status", "ok");
  return kOk;
}

inline int cmd_build_knn(const Options& o, std::ostream& out, RunReport& rep) {
  Input in(o.points_path);
  const PointSet p = read_points(in.stream());
  const DirectedGraph g = o.use_float ? knn_graph(to_float(p), o.k) : knn_graph(p, o.k);
  emit(o.out, out, [&](std::ostream& os) { write_graph(os, g); });
  rep.set("status", "ok");
  rep.set("n", g.n());
  rep.set("k", g.k());
  return kOk;
}

inline void report_decision(const Decision1D& d, RunReport& rep) {
  rep.set("status", d.realizable ? "realizable" : "not-realizable");
  rep.set("classes", d.partition.size());
  if (d.realizable) {
    rep.set("ordering", join_ids(d.ordering));
    std::vector<std::uint32_t> w;
    for (auto p : d.windows) w.push_back(d.ordering[p]);
    rep.set("window_start", join_ids(w));
  } else {
    rep.set("violation", to_string(d.violation));
    rep.set("witness", d.witness + 1);
  }
}

inline int cmd_decide_1d(const Options& o, std::ostream&, RunReport& rep) {
  const auto g = load_graph(o.graph_path);
  OpCounter ops;
  const auto d = decide_1d(g, &ops);
  report_decision(d, rep);
  rep.set("ops", ops.ops);
  return d.realizable ? kOk : kNegative;
}

inline int cmd_realize_1d(const Options& o, std::ostream&, RunReport& rep) {
  const auto g = load_graph(o.graph_path);
  const auto r = realize_1d(g);
  report_decision(r.decision, rep);
  if (!r.line) return kNegative;
  const auto real = r.line->realization();
  rep.set("verified", verify_realization(g, real) ? "true" : "false");
  rep.set("lp_rows", r.lp_rows);
  rep.set("lp_pivots", r.lp_pivots);
  std::string pos;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (v) pos += ' ';
    pos += format_rational(real.position(v)[0]);
  }
  rep.set("coordinates", pos);
  if (!o.out.empty()) emit(o.out, std::cout, [&](std::ostream& os) { write_realization(os, real); });
  return kOk;
}

inline int cmd_lambda_check(const Options& o, std::ostream&, RunReport& rep) {
  const auto g = load_graph(o.graph_path);
  LambdaResult res;
  try {
    res = lambda_acyclic(g, {o.max_vertices});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ResourceLimit) throw;
    rep.set("status", "unknown");
    rep.set("reason", e.what());
    return kUnknown;
  }
  if (res.realizable) {
    rep.set("status", "realizable");
    rep.set("pairs", res.order.size());
    return kOk;
  }
  rep.set("status", "not-realizable");
  rep.set("cycle", pair_list(res.cycle));
  rep.set("cycle_length", res.cycle.size());
  rep.set("certificate_verified", verify_lambda_cycle(g, res.cycle) ? "true" : "false");
  return kNegative;
}

inline int cmd_embed(const Options& o, std::ostream&, RunReport& rep) {
  const auto g = load_graph(o.graph_path);
  const Rational eps = parse_rational(o.eps);
  EmbedOptions eo;
  eo.size_cap = o.size_cap;
  eo.seed = o.seed;
  eo.threads = static_cast<unsigned>(o.threads);
  eo.solve.supergraph_budget = o.budget;
  const auto t0 = Clock::now();
  const auto res = embed(g, o.dim, eps, eo);
  const double elapsed = ms_since(t0);

  rep.set("status", to_string(res.status));
  rep.set("seed", o.seed);
  rep.set("dim", o.dim);
  rep.set("eps", format_rational(eps));
  rep.set("size_cap", res.size_cap);
  rep.set("budget", o.budget);
  rep.set("score", format_rational(res.score.fraction));
  rep.set("score_decimal", decimal(res.score.fraction));
  rep.set("preserved_edges", res.score.preserved_edges);
  rep.set("total_edges", res.score.total_edges);
  rep.set("removed_count", res.cut.removed_edges.size());
  rep.set("removed_fraction", decimal(res.cut.removed_fraction));
  std::string removed;
  for (const auto& [u, v] : res.cut.removed_edges) {
    if (!removed.empty()) removed += ' ';
    removed += std::to_string(u + 1) + "->" + std::to_string(v + 1);
  }
  rep.set("removed_edges", removed);
  rep.set("components", res.components.size());
  std::string statuses;
  for (const auto& c : res.components) {
    if (!statuses.empty()) statuses += ' ';
    statuses += to_string(c.status);
  }
  rep.set("component_statuses", statuses);
  for (const auto& c : res.components)
    if (c.status == ComponentStatus::CertifiedImpossible && !c.certificates.empty()) {
      rep.set("certificate", pair_list(c.certificates.front()));
      break;
    }
  rep.set("translation", format_rational(res.translation));
  rep.set("elapsed_ms", decimal(Rational(elapsed), 1));
  if (!o.out.empty()) emit(o.out, std::cout, [&](std::ostream& os) { write_realization(os, res.realization); });

  switch (res.status) {
    case EmbedStatus::Success: return kOk;
    case EmbedStatus::CertifiedImpossible: return kNegative;
    case EmbedStatus::Unknown: return kUnknown;
  }
  return kUnknown;
}

inline int cmd_score(const Options& o, std::ostream&, RunReport& rep) {
  const auto g = load_graph(o.graph_path);
  const auto r = load_realization(o.realization_path);
  ApproxScore s;
  if (o.use_float) {
    FloatRealization fr{to_float(r.points), r.assignment, r.provenance};
    s = sigma_score(g, fr);
  } else {
    s = sigma_score(g, r);
  }
  rep.set("status", "ok");
  rep.set("arithmetic", o.use_float ? "float" : "exact");
  rep.set("score", format_rational(s.fraction));
  rep.set("score_decimal", decimal(s.fraction));
  rep.set("preserved_edges", s.preserved_edges);
  rep.set("total_edges", s.total_edges);
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream&, RunReport& rep) {
  const auto g = load_graph(o.graph_path);
  const auto r = load_realization(o.realization_path);
  bool ok = false;
  if (o.use_float) {
    FloatRealization fr{to_float(r.points), r.assignment, r.provenance};
    ok = verify_realization(g, fr);
  } else {
    ok = verify_realization(g, r);
  }
  rep.set("status", ok ? "pass" : "fail");
  rep.set("arithmetic", o.use_float ? "float" : "exact");
  return ok ? kOk : kNegative;
}

inline constexpr const char* kBenchHeader = "n,k,seed,ops,wall_ms,ops_ratio,wall_ratio";

/// Appends rows to a CSV; the header is written once and checked on reuse.
inline int cmd_bench(const Options& o, std::ostream& out, RunReport& rep) {
  if (o.min_log > o.max_log || o.max_log > 24) throw Error(ErrorCode::Usage, "bad --min-log/--max-log");
  std::ostringstream rows;
  std::uint64_t prev_ops = 0;
  double prev_ms = 0;
  for (unsigned e = o.min_log; e <= o.max_log; ++e) {
    const std::size_t n = std::size_t{1} << e;
    const auto g = line_knn_graph(n, o.bench_k, substream(o.seed, "bench", e)());
    OpCounter ops;
    const auto t0 = Clock::now();
    const auto d = decide_1d(g, &ops);
    const double ms = ms_since(t0);
    if (!d.realizable) throw InvariantViolation("bench instance not realizable");
    rows << n << ',' << o.bench_k << ',' << o.seed << ',' << ops.ops << ',' << ms << ',';
    if (prev_ops) rows << static_cast<double>(ops.ops) / static_cast<double>(prev_ops) << ','
                       << (prev_ms > 0 ? ms / prev_ms : 0.0);
    else rows << ',';
    rows << '\n';
    prev_ops = ops.ops;
    prev_ms = ms;
  }
  if (o.out.empty() || o.out == "-") {
    out << kBenchHeader << '\n' << rows.str();
  } else {
    bool need_header = true;
    if (std::filesystem::exists(o.out) && std::filesystem::file_size(o.out) > 0) {
      std::ifstream existing(o.out);
      std::string first;
      std::getline(existing, first);
      if (first != kBenchHeader) throw Error(ErrorCode::Parse, o.out + ": CSV header differs, refusing to append");
      need_header = false;
    }
    std::ofstream f(o.out, std::ios::app);
    if (!f) throw Error(ErrorCode::Parse, "cannot write '" + o.out + "'");
    if (need_header) f << kBenchHeader << '\n';
    f << rows.str();
  }
  rep.set("status", "ok");
  rep.set("k", o.bench_k);
  rep.set("seed", o.seed);
  return kOk;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name. Data products go to
/// --out (or `out`); the key=value report goes to `out`; diagnostics and the
/// one-line summary go to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, Style style = {}) {
  using namespace detail;
  Options o;
  CLI::App app{"k-nearest-neighbor graph realization toolkit", "knnreal"};
  app.require_subcommand(1);

  auto arith = [&](CLI::App* c) {
    c->add_flag("--float,!--exact", o.use_float, "floating-point comparisons (default exact)");
  };

  auto* gen = app.add_subcommand("gen", "generate points or graphs");
  gen->add_option("--kind", o.kind, "points | knn-graph | random-graph")->capture_default_str();
  gen->add_option("--dist", o.dist, "uniform-box | gaussian | line-distinct-gaps")->capture_default_str();
  gen->add_option("--n", o.n)->capture_default_str();
  gen->add_option("--k", o.k)->capture_default_str();
  gen->add_option("--dim", o.dim)->capture_default_str();
  gen->add_option("--seed", o.seed)->capture_default_str();
  gen->add_option("--out", o.out);

  auto* build = app.add_subcommand("build-knn", "points file to kNN graph file");
  build->add_option("points", o.points_path)->required();
  build->add_option("--k", o.k)->required();
  build->add_option("--out", o.out);
  arith(build);

  auto* decide = app.add_subcommand("decide-1d", "decide realizability on the line");
  decide->add_option("graph", o.graph_path)->required();

  auto* realize = app.add_subcommand("realize-1d", "exact line realization");
  realize->add_option("graph", o.graph_path)->required();
  realize->add_option("--out", o.out, "realization file");

  auto* lambda = app.add_subcommand("lambda-check", "pair-order acyclicity with cycle certificate");
  lambda->add_option("graph", o.graph_path)->required();
  lambda->add_option("--max-vertices", o.max_vertices)->capture_default_str();

  auto* emb = app.add_subcommand("embed", "approximate realization in d dimensions");
  emb->add_option("graph", o.graph_path)->required();
  emb->add_option("--dim", o.dim)->capture_default_str();
  emb->add_option("--eps", o.eps, "removed-edge budget, decimal or p/q")->capture_default_str();
  emb->add_option("--seed", o.seed)->capture_default_str();
  emb->add_option("--size-cap", o.size_cap, "component size cap (0: default)")->capture_default_str();
  emb->add_option("--budget", o.budget, "supergraph enumeration budget per component")->capture_default_str();
  emb->add_option("--threads", o.threads, "0: hardware concurrency")->capture_default_str();
  emb->add_option("--out", o.out, "realization file");

  auto* score = app.add_subcommand("score", "edge-preservation score");
  score->add_option("graph", o.graph_path)->required();
  score->add_option("realization", o.realization_path)->required();
  arith(score);

  auto* verify = app.add_subcommand("verify", "strict realization check");
  verify->add_option("graph", o.graph_path)->required();
  verify->add_option("realization", o.realization_path)->required();
  arith(verify);

  auto* bench = app.add_subcommand("bench", "line decision scaling, CSV");
  bench->add_option("--k", o.bench_k)->capture_default_str();
  bench->add_option("--min-log", o.min_log)->capture_default_str();
  bench->add_option("--max-log", o.max_log)->capture_default_str();
  bench->add_option("--seed", o.seed)->capture_default_str();
  bench->add_option("--out", o.out, "CSV file, appended");

  const std::vector<std::string> original = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  const auto* sub = app.get_subcommands().front();
  RunReport rep;
  rep.set("command", sub->get_name());
  int code = kInternal;
  const auto t0 = Clock::now();
  try {
    const std::string& name = sub->get_name();
    if (name == "gen") code = cmd_gen(o, out, rep);
    else if (name == "build-knn") code = cmd_build_knn(o, out, rep);
    else if (name == "decide-1d") code = cmd_decide_1d(o, out, rep);
    else if (name == "realize-1d") code = cmd_realize_1d(o, out, rep);
    else if (name == "lambda-check") code = cmd_lambda_check(o, out, rep);
    else if (name == "embed") code = cmd_embed(o, out, rep);
    else if (name == "score") code = cmd_score(o, out, rep);
    else if (name == "verify") code = cmd_verify(o, out, rep);
    else if (name == "bench") code = cmd_bench(o, out, rep);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::Usage) return kUsage;
    if (is_data_error(e.code())) return kDataError;
    if (e.code() == ErrorCode::ResourceLimit) return kUnknown;
    return kInternal;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }

  // gen, build-knn and bench print their data to stdout when --out is
  // absent; the report then moves to stderr so stdout stays a valid file.
  const std::string& name = sub->get_name();
  const bool data_on_stdout = (name == "gen" || name == "build-knn" || name == "bench") && o.out.empty();
  rep.set("args", join_args(original));
  rep.set("wall_ms", decimal(Rational(ms_since(t0)), 1));
  rep.write(data_on_stdout ? err : out);
  const std::string* status = rep.get("status");
  err << sub->get_name() << ": " << style.paint(status ? *status : "?", code == kOk) << '\n';
  return code;
}

}  // namespace knnreal::cli
