// pretzelc: pretzel knot slice/fiberedness analysis from the command line.
//
// Exit codes: 0 verdict produced, 2 input error, 3 search hit its node limit.

#include <pretzel/pretzel.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace {

using namespace pretzel;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInconclusive = 3;
constexpr std::size_t kUnlimitedRank = 12;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> env_node_limit() {
  const char* v = std::getenv("PRETZELC_NODE_LIMIT");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw InputError("PRETZELC_NODE_LIMIT must be a positive integer");
  return n;
}

std::optional<std::uint64_t> resolve_limit(std::optional<std::uint64_t> flag) {
  if (flag) {
    if (*flag == 0) throw InputError("--node-limit must be positive");
    return flag;
  }
  return env_node_limit();
}

void require_limit_for_rank(std::size_t rank, const std::optional<std::uint64_t>& limit,
                            const std::string& what = "") {
  if (rank > kUnlimitedRank && !limit)
    throw InputError("graph rank " + std::to_string(rank) + (what.empty() ? "" : " for " + what) + " exceeds " +
                     std::to_string(kUnlimitedRank) + "; pass --node-limit or set PRETZELC_NODE_LIMIT");
}

// Rank of the graph the Donaldson search would run on, or 0 when the
// determinant or signature already decides.
std::size_t searched_rank(const ParamList& p) {
  const ParamList n = normalize(p);
  if (!is_perfect_square(determinant(n)) || signature(n) != 0) return 0;
  return negative_definite_graph(n).vertex_count();
}

ParamList parse_knot(const std::string& text) {
  ParamList p = parse_params(text);
  if (!is_knot(classify_type(normalize(p)))) throw NotAKnotError(p);
  return p;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void print_matrix(std::ostream& os, const std::vector<std::vector<int>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ' ';
      os.width(3);
      os << row[c];
    }
    os << '\n';
  }
}

void print_human(std::ostream& os, const Verdict& v, const AnalysisRecord& r) {
  auto line = [&](const char* label, const std::string& value) {
    os << label;
    for (std::size_t i = std::string(label).size(); i < 14; ++i) os << ' ';
    os << value << '\n';
  };
  line("input", r.input);
  line("normalized", "P(" + v.normalized.to_string() + ")");
  line("kind", r.kind);
  line("fibered", r.fibered + " (" + r.subcase + ")");
  if (v.obstructions) {
    line("determinant", r.determinant + (r.det_square ? " (square)" : " (not a square)"));
    line("signature", std::to_string(*r.signature));
    std::string don = r.donaldson;
    if (v.obstructions->donaldson) don += " (" + std::to_string(r.nodes) + " nodes)";
    line("donaldson", don);
  }
  if (auto f = v.family()) {
    line("family", f->describe() + " = P(" + f->instantiate().to_string() + ")");
    for (std::size_t i = 1; i < v.families.size(); ++i) line("also", v.families[i].describe());
  } else {
    line("family", "none");
  }
  line("exceptional", yes_no(r.exceptional));
  line("ribbon moves", r.detectably_ribbon ? "reduce to a ribbon base" : "do not reduce to a ribbon base");
  line("status", r.status);
  if (r.ms) line("time", std::to_string(*r.ms) + " ms");
}

int cmd_analyze(const std::string& text, bool json, std::optional<std::uint64_t> limit_flag, bool timing) {
  const ParamList p = parse_knot(text);
  AnalyzeOptions opts;
  opts.search.node_limit = resolve_limit(limit_flag);
  require_limit_for_rank(searched_rank(p), opts.search.node_limit);
  opts.solver = search_canonical;
  const auto t0 = std::chrono::steady_clock::now();
  const Verdict v = analyze(p, opts);
  const AnalysisRecord r = make_record(text, v, timing ? std::optional<double>(elapsed_ms(t0)) : std::nullopt);
  if (json)
    std::cout << to_json(r).dump(2) << '\n';
  else
    print_human(std::cout, v, r);
  return v.status == SliceStatus::Inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_embed(const std::string& text, bool exhaustive, std::optional<std::uint64_t> limit_flag, bool json) {
  const ParamList p = parse_knot(text);
  const StarGraph g = negative_definite_graph(normalize(p));
  SearchConfig cfg;
  cfg.exhaustive = exhaustive;
  cfg.node_limit = resolve_limit(limit_flag);
  require_limit_for_rank(g.vertex_count(), cfg.node_limit);
  const SearchResult r = search_canonical(g, cfg);
  if (json) {
    nlohmann::ordered_json j;
    j["graph"] = g.canonical_key();
    j["outcome"] = to_string(r.outcome);
    j["nodes"] = r.nodes;
    if (r.witness)
      j["witness"] = r.witness->rows;
    else
      j["witness"] = nullptr;
    std::cout << j.dump(2) << '\n';
  } else if (r.outcome == SearchOutcome::Embeddable) {
    std::cout << "EMBEDDING " << r.witness->rows.size() << "x" << r.witness->dimension() << " (" << r.nodes
              << " nodes searched)\n";
    print_matrix(std::cout, r.witness->rows);
  } else if (r.outcome == SearchOutcome::NotEmbeddable) {
    std::cout << "NO EMBEDDING (" << r.nodes << " nodes searched)\n";
  } else {
    std::cout << "INCONCLUSIVE (node limit reached after " << r.nodes << " nodes)\n";
  }
  return r.outcome == SearchOutcome::Inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_graph(const std::string& text, bool dot) {
  const ParamList p = parse_knot(text);
  const StarGraph g = negative_definite_graph(normalize(p));
  const WuClass wu = wu_class(g);
  if (dot) {
    std::cout << to_dot(g, wu.members);
    return kExitOk;
  }
  const auto w = g.weights();
  std::cout << "center " << g.center_weight << (wu.contains(0) ? " [wu]" : "") << '\n';
  for (std::size_t j = 0; j < g.legs.size(); ++j) {
    std::cout << "leg " << j + 1 << ':';
    for (std::size_t i = 0; i < g.legs[j].size(); ++i)
      std::cout << ' ' << g.legs[j][i] << (wu.contains(g.leg_start(j) + i) ? "[wu]" : "");
    std::cout << '\n';
  }
  std::cout << "mirrored " << yes_no(g.mirrored) << '\n';
  return kExitOk;
}

int cmd_enumerate(int max_strands, int max_param, const std::string& out_path, const std::string& format,
                  unsigned jobs, const std::string& cache_dir, std::optional<std::uint64_t> limit_flag,
                  bool timing) {
  if (max_strands < 3) throw InputError("--max-strands must be at least 3");
  if (max_param < 2) throw InputError("--max-param must be at least 2");
  if (format != "csv" && format != "jsonl") throw InputError("--format must be csv or jsonl");
  AnalyzeOptions opts;
  opts.search.node_limit = resolve_limit(limit_flag);
  if (!opts.search.node_limit)
    for (const MutationClass& c : enumerate_classes(max_strands, max_param))
      require_limit_for_rank(searched_rank(ParamList(c.multiset)), opts.search.node_limit, c.key());

  std::unique_ptr<std::ofstream> file;
  if (!out_path.empty()) {
    file = std::make_unique<std::ofstream>(out_path, std::ios::trunc);
    if (!*file) throw InputError("cannot write " + out_path);
  }
  std::ostream& out = file ? *file : std::cout;

  std::unique_ptr<DonaldsonCache> cache;
  if (!cache_dir.empty()) {
    try {
      cache = std::make_unique<DonaldsonCache>(cache_dir);
    } catch (const std::exception& e) {
      throw InputError(std::string("cannot use cache directory: ") + e.what());
    }
    opts.solver = [&cache](const StarGraph& g, const SearchConfig& cfg) { return cache->solve(g, cfg); };
  } else {
    opts.solver = search_canonical;
  }

  const auto classes = enumerate_classes(max_strands, max_param);
  std::vector<AnalysisRecord> records(classes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < classes.size(); i = next.fetch_add(1)) {
      const auto t0 = std::chrono::steady_clock::now();
      const ClassReport c = analyze_class(classes[i], opts);
      records[i] = make_record(c, timing ? std::optional<double>(elapsed_ms(t0)) : std::nullopt);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (cache) cache->flush();

  if (format == "csv") out << csv_header() << '\n';
  std::map<std::string, std::size_t> counts;
  bool inconclusive = false;
  for (const auto& r : records) {
    out << (format == "csv" ? to_csv(r) : to_jsonl(r)) << '\n';
    ++counts[r.status];
    inconclusive = inconclusive || r.status == "Inconclusive";
  }
  out.flush();
  if (!out) throw InputError("write failed: " + (out_path.empty() ? std::string("stdout") : out_path));

  std::cerr << "summary: classes=" << records.size();
  for (const auto& [status, n] : counts) std::cerr << ' ' << status << '=' << n;
  if (cache) std::cerr << " cache_hits=" << cache->hits() << " cache_misses=" << cache->misses();
  std::cerr << '\n';
  return inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibered ribbon pretzel knot analysis"};
  app.require_subcommand(1);

  std::string params;
  bool json = false, timing = false, exhaustive = false, dot = false;
  std::optional<std::uint64_t> node_limit;

  auto* analyze_cmd = app.add_subcommand("analyze", "Obstructions, fiberedness and family of one knot");
  analyze_cmd->add_option("params", params, "Comma-separated parameters, e.g. \"1,1,1,1,-3,-3,-3\" or \"[1^4],-3,-3,-3\"")
      ->required();
  analyze_cmd->add_flag("--json", json, "Emit an analysis record as JSON");
  analyze_cmd->add_option("--node-limit", node_limit, "Cap on embedding search nodes");
  analyze_cmd->add_flag("--timing", timing, "Include wall time");

  auto* embed_cmd = app.add_subcommand("embed", "Lattice embedding witness or exhaustion certificate");
  embed_cmd->add_option("params", params, "Comma-separated parameters")->required();
  embed_cmd->add_flag("--exhaustive", exhaustive, "Oracle mode: no symmetry breaking, no Wu rule");
  embed_cmd->add_option("--node-limit", node_limit, "Cap on search nodes");
  embed_cmd->add_flag("--json", json, "Emit JSON");

  auto* graph_cmd = app.add_subcommand("graph", "Negative definite plumbing graph with the Wu set");
  graph_cmd->add_option("params", params, "Comma-separated parameters")->required();
  graph_cmd->add_flag("--dot", dot, "Emit Graphviz DOT");

  int max_strands = 0, max_param = 0;
  unsigned jobs = 1;
  std::string out_path, format = "csv", cache_dir;
  auto* enum_cmd = app.add_subcommand("enumerate", "Report on every mutation class within bounds");
  enum_cmd->add_option("--max-strands", max_strands, "Largest number of parameters (>= 3)")->required();
  enum_cmd->add_option("--max-param", max_param, "Largest |p_i| (>= 2)")->required();
  enum_cmd->add_option("--out", out_path, "Report file (default stdout)");
  enum_cmd->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  enum_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  enum_cmd->add_option("--cache", cache_dir, "Directory holding the Donaldson result cache");
  enum_cmd->add_option("--node-limit", node_limit, "Cap on search nodes per graph");
  enum_cmd->add_flag("--timing", timing, "Fill the ms column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(params, json, node_limit, timing);
    if (*embed_cmd) return cmd_embed(params, exhaustive, node_limit, json);
    if (*graph_cmd) return cmd_graph(params, dot);
    if (*enum_cmd)
      return cmd_enumerate(max_strands, max_param, out_path, format, jobs, cache_dir, node_limit, timing);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NotAKnotError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
