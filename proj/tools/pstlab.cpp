// pstlab: command-line front end for the exact transfer deciders, corpus
// surveys, tree sweeps, fidelity curves and graph generation.
//
// Exit codes: 0 success, 1 failed assertion or internal error, 2 bad input.

#include "pstlab/certify.hpp"
#include "pstlab/generate.hpp"
#include "pstlab/graph.hpp"
#include "pstlab/pst.hpp"
#include "pstlab/report_io.hpp"
#include "pstlab/verify.hpp"
#include "pstlab/workers.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace pstlab;

constexpr int kExitAssertion = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string g6, family, file;

  void add_options(CLI::App* cmd) {
    auto* a = cmd->add_option("--g6", g6, "graph6 string");
    auto* b = cmd->add_option("--family", family, "named family, e.g. cycle:4, hypercube:3, one_sum:3,2,3");
    auto* c = cmd->add_option("--file", file, "file with one graph6 string per line");
    a->excludes(b)->excludes(c);
    b->excludes(c);
  }

  std::vector<Graph> graphs() const {
    const int given = !g6.empty() + !family.empty() + !file.empty();
    if (given != 1) throw InputError("exactly one of --g6, --family, --file is required");
    if (!g6.empty()) return {parse_graph6(g6)};
    if (!family.empty()) return {construct(family)};
    return stream_from_file(file).collect();
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

MatrixKind walk_kind(const std::string& s) {
  const MatrixKind k = parse_matrix_kind(s);
  if (k == MatrixKind::SignlessLaplacian) throw InputError("transfer is decided for laplacian and adjacency only");
  return k;
}

std::vector<std::pair<int, int>> select_pairs(const std::string& spec, int n) {
  std::vector<std::pair<int, int>> out;
  if (spec == "all") {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) out.emplace_back(u, v);
    return out;
  }
  int u = -1, v = -1;
  char comma = 0;
  std::istringstream is(spec);
  if (!(is >> u >> comma >> v) || comma != ',' || !is.eof()) throw InputError("--pairs expects 'all' or 'u,v'");
  if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw InputError("--pairs: vertices must be distinct and in range");
  out.emplace_back(u, v);
  return out;
}

/// "2.5", "pi", "pi/2", "3*pi/4", "pi/sqrt(2)".
double parse_time(std::string s) {
  std::erase(s, ' ');
  const auto p = s.find("pi");
  if (p == std::string::npos) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError("cannot parse time '" + s + "'");
    }
    if (used != s.size()) throw InputError("cannot parse time '" + s + "'");
    return x;
  }
  double value = std::numbers::pi;
  if (p > 0) {
    if (s[p - 1] != '*') throw InputError("cannot parse time '" + s + "'");
    value *= parse_time(s.substr(0, p - 1));
  }
  std::string rest = s.substr(p + 2);
  if (rest.empty()) return value;
  if (rest[0] != '/') throw InputError("cannot parse time '" + s + "'");
  rest = rest.substr(1);
  if (rest.rfind("sqrt(", 0) == 0 && rest.back() == ')') return value / std::sqrt(parse_time(rest.substr(5, rest.size() - 6)));
  return value / parse_time(rest);
}

std::string human_line(const PSTReport& r) {
  std::ostringstream os;
  os << r.graph6 << ' ' << to_string(r.kind) << " (" << r.u << ',' << r.v << "): " << to_string(r.verdict);
  if (r.verdict == Verdict::Yes) os << "  t=" << r.time->str() << "  phase=" << r.phase->str() << "  g=" << r.g;
  if (r.verdict == Verdict::No) os << "  [" << to_string(r.certificate.kind) << "] " << r.certificate.detail;
  if (r.verdict == Verdict::Undecided) os << "  [" << r.undecided_reason << ']';
  return os.str();
}

int cmd_analyze(const Source& src, const std::string& matrix, const std::string& pairs, bool show_support,
                const std::string& format, const std::string& out_path) {
  const MatrixKind kind = walk_kind(matrix);
  if (format != "json" && format != "jsonl" && format != "human") throw InputError("--format must be json, jsonl or human");
  const auto graphs = src.graphs();
  Output out(out_path);
  Json all = Json::array();
  for (const Graph& g : graphs) {
    if (g.order() < 2) throw InputError("graph needs at least two vertices");
    if (!is_connected(g)) throw InputError("graph " + write_graph6(g) + " is disconnected");
    PstAnalyzer an(g, kind);
    Json doc = {{"graph6", write_graph6(g)}, {"kind", to_string(kind)}, {"n", g.order()}};
    Json reports = Json::array();
    for (const auto& [u, v] : select_pairs(pairs, g.order())) {
      const PSTReport r = an.decide(u, v);
      if (format == "jsonl") out.stream() << report_json(r).dump() << '\n';
      else if (format == "human") out.stream() << human_line(r) << '\n';
      reports.push_back(report_json(r));
    }
    doc["reports"] = std::move(reports);
    if (show_support) {
      Json sup = Json::array();
      for (int u = 0; u < g.order(); ++u) {
        sup.push_back(profile_json(an.profile(u)));
        if (format == "human") {
          out.stream() << "  support of " << u << ':';
          for (const auto& id : an.profile(u).support) out.stream() << ' ' << id.str();
          out.stream() << '\n';
        }
      }
      doc["support"] = std::move(sup);
      if (format == "jsonl") out.stream() << Json{{"graph6", doc["graph6"]}, {"support", doc["support"]}}.dump() << '\n';
    }
    all.push_back(std::move(doc));
  }
  if (format == "json") out.stream() << (all.size() == 1 ? all.front() : all).dump(2) << '\n';
  return 0;
}

unsigned resolve_workers(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (flag < 0) throw InputError("--workers must be at least 1");
  try {
    return default_workers();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

int cmd_survey(int n, const std::string& file, bool assert_paper, int workers_flag, const std::string& checks,
               const std::string& records_path, const std::string& format, const std::string& out_path) {
  if ((n > 0) == !file.empty()) throw InputError("exactly one of --n and --file is required");
  if (n > kMaxGeneratedGraphOrder) throw InputError("--n must be at most 8; use --file for larger corpora");
  if (format != "json" && format != "csv") throw InputError("--format must be json or csv");
  unsigned mask = 0;
  if (checks == "all") mask = kSurveyAll;
  else if (checks == "laplacian") mask = kSurveyLaplacian;
  else if (checks == "adjacency") mask = kSurveyAdjacency;
  else if (checks != "counts") throw InputError("--checks must be all, laplacian, adjacency or counts");
  const unsigned workers = resolve_workers(workers_flag);
  GraphStream corpus = n > 0 ? gen_connected_graphs(n) : stream_from_file(file);
  const SurveyResult res = run_survey(std::move(corpus), mask, workers);

  if (!records_path.empty()) {
    std::ofstream rec(records_path);
    if (!rec) throw InputError("cannot open records file " + records_path);
    for (const auto& r : res.records) rec << survey_record_json(r).dump() << '\n';
  }
  std::string reading = "none";
  const auto paper = n > 0 ? paper_assertions(res.aggregate, n, &reading) : std::vector<PaperAssertion>{};
  Output out(out_path);
  if (format == "csv") {
    out.stream() << aggregate_csv(res.aggregate);
  } else {
    Json doc = aggregate_json(res.aggregate);
    doc["workers"] = workers;
    doc["checks"] = checks;
    if (!paper.empty()) doc["paper"] = paper_json(paper, reading);
    out.stream() << doc.dump(2) << '\n';
  }
  if (res.aggregate.violations > 0) {
    std::cerr << "survey: " << res.aggregate.violations << " theorem check violation(s)\n";
    for (const auto& v : res.aggregate.violation_samples) std::cerr << "  " << v << '\n';
    return kExitAssertion;
  }
  if (assert_paper) {
    if (paper.empty()) throw InputError("--assert-paper needs --n 7 or --n 8");
    bool ok = true;
    for (const auto& c : paper)
      if (!c.pass()) {
        ok = false;
        std::cerr << "paper count mismatch: " << c.name << " expected " << c.expected << ", got " << c.actual << '\n';
      }
    if (!ok) return kExitAssertion;
  }
  return 0;
}

int cmd_trees(int max_n, int min_n, const std::string& matrix, const std::string& format, const std::string& out_path) {
  const MatrixKind kind = walk_kind(matrix);
  if (max_n < 1 || max_n > 12) throw InputError("--max-n must be between 1 and 12");
  if (format != "json" && format != "human") throw InputError("--format must be json or human");
  if (min_n <= 0) min_n = kind == MatrixKind::Laplacian ? 3 : 2;
  const TreeSweepResult res = tree_sweep(min_n, max_n, kind, true);
  Output out(out_path);
  Json yes = Json::array();
  for (const auto& r : res.yes) yes.push_back(report_json(r));
  Json by_order = Json::object();
  for (const auto& [k, c] : res.trees_by_order) by_order[std::to_string(k)] = c;
  if (format == "json") {
    out.stream() << Json{{"matrix", to_string(kind)}, {"min_n", min_n},         {"max_n", max_n},
                         {"trees", res.trees},        {"trees_by_order", by_order}, {"pairs", res.pairs},
                         {"yes_pairs", res.yes.size()}, {"no_pairs", res.no_pairs}, {"undecided_pairs", res.undecided},
                         {"yes", yes}}
                        .dump(2)
                 << '\n';
  } else {
    out.stream() << res.trees << " trees on " << min_n << ".." << max_n << " vertices, " << res.pairs << " pairs, "
                 << res.yes.size() << " yes, " << res.no_pairs << " no, " << res.undecided << " undecided\n";
    for (const auto& r : res.yes) out.stream() << human_line(r) << '\n';
  }
  if (kind == MatrixKind::Laplacian)
    for (const auto& r : res.yes)
      if (parse_graph6(r.graph6).order() >= 3) {
        std::cerr << "Laplacian transfer found in a tree on more than two vertices: " << r.graph6 << '\n';
        return kExitAssertion;
      }
  return 0;
}

int cmd_simulate(const Source& src, const std::string& matrix, int u, int v, const std::string& t_max, int steps,
                 const std::string& out_path) {
  const auto graphs = src.graphs();
  if (graphs.size() != 1) throw InputError("simulate needs exactly one graph");
  const Graph& g = graphs.front();
  const MatrixKind kind = parse_matrix_kind(matrix);
  if (u < 0 || v < 0 || u >= g.order() || v >= g.order()) throw InputError("--u/--v out of range");
  if (steps < 2) throw InputError("--steps must be at least 2");
  const double tmax = parse_time(t_max);
  if (!(tmax >= 0)) throw InputError("--t-max must be non-negative");
  const FidelityOracle oracle(g, kind);
  Output out(out_path);
  out.stream() << "t,fidelity\n" << std::setprecision(17);
  for (int i = 0; i < steps; ++i) {
    const double t = tmax * i / (steps - 1);
    out.stream() << t << ',' << oracle.fidelity(u, v, t) << '\n';
  }
  return 0;
}

int cmd_generate(const std::string& what, int n, const std::string& out_path) {
  GraphStream s = [&] {
    if (what == "trees") {
      if (n < 1 || n > kMaxTreeOrder) throw InputError("trees: --n must be between 1 and 16");
      return gen_free_trees(n);
    }
    if (what == "graphs") {
      if (n < 1 || n > kMaxGeneratedGraphOrder) throw InputError("graphs: --n must be between 1 and 8");
      return gen_connected_graphs(n);
    }
    throw InputError("generate: expected 'trees' or 'graphs'");
  }();
  Output out(out_path);
  while (auto g = s.next()) out.stream() << write_graph6(*g) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pstlab: exact perfect state transfer analysis"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("-o,--output", out_path, "write primary output to this file");

  Source analyze_src;
  std::string matrix = "laplacian", pairs = "all", format = "json";
  bool show_support = false;
  auto* analyze = app.add_subcommand("analyze", "decide transfer for vertex pairs of one graph or a corpus");
  analyze_src.add_options(analyze);
  analyze->add_option("--matrix", matrix, "laplacian | adjacency");
  analyze->add_option("--pairs", pairs, "all | u,v");
  analyze->add_flag("--show-support", show_support, "include eigenvalue supports and projections");
  analyze->add_option("--format", format, "json | jsonl | human");

  int survey_n = 0, workers = 0;
  std::string survey_file, checks = "all", records, survey_format = "json";
  bool assert_paper = false;
  auto* survey = app.add_subcommand("survey", "corpus survey with theorem checks and aggregate counts");
  survey->add_option("--n", survey_n, "all connected graphs on n <= 8 vertices");
  survey->add_option("--file", survey_file, "graph6 corpus file");
  survey->add_flag("--assert-paper", assert_paper, "fail unless the published counts are reproduced");
  survey->add_option("--workers", workers, "worker threads (default: PSTLAB_WORKERS or hardware concurrency)");
  survey->add_option("--checks", checks, "all | laplacian | adjacency | counts");
  survey->add_option("--records", records, "write one JSON record per graph to this file");
  survey->add_option("--format", survey_format, "json | csv");

  int max_n = 10, min_n = 0;
  std::string tree_matrix = "laplacian", tree_format = "json";
  auto* trees = app.add_subcommand("trees", "transfer sweep over all free trees");
  trees->add_option("--max-n", max_n, "largest tree order (<= 12)");
  trees->add_option("--min-n", min_n, "smallest tree order (default 3 for laplacian, 2 for adjacency)");
  trees->add_option("--matrix", tree_matrix, "laplacian | adjacency");
  trees->add_option("--format", tree_format, "json | human");

  Source sim_src;
  std::string sim_matrix = "laplacian", t_max = "pi";
  int sim_u = 0, sim_v = 1, steps = 101;
  auto* simulate = app.add_subcommand("simulate", "numeric fidelity curve |exp(itM)_{v,u}|^2 as CSV");
  sim_src.add_options(simulate);
  simulate->add_option("--matrix", sim_matrix, "laplacian | adjacency | signless");
  simulate->add_option("--u", sim_u, "source vertex");
  simulate->add_option("--v", sim_v, "target vertex");
  simulate->add_option("--t-max", t_max, "end time, e.g. 3.5, pi, pi/2, pi/sqrt(2)");
  simulate->add_option("--steps", steps, "grid points including both ends (>= 2)");

  std::string gen_what;
  int gen_n = 0;
  auto* generate = app.add_subcommand("generate", "print graph6 lines for trees or connected graphs");
  generate->add_option("what", gen_what, "trees | graphs")->required();
  generate->add_option("--n", gen_n, "order")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_src, matrix, pairs, show_support, format, out_path);
    if (*survey) return cmd_survey(survey_n, survey_file, assert_paper, workers, checks, records, survey_format, out_path);
    if (*trees) return cmd_trees(max_n, min_n, tree_matrix, tree_format, out_path);
    if (*simulate) return cmd_simulate(sim_src, sim_matrix, sim_u, sim_v, t_max, steps, out_path);
    if (*generate) return cmd_generate(gen_what, gen_n, out_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Graph6Error& e) {
    std::cerr << "graph6 error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CorpusError& e) {
    std::cerr << "corpus error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DisconnectedGraphError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitAssertion;
  }
  return 0;
}
