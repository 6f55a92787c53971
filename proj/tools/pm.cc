// pm: pattern mining on a single machine.
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <patmine/patmine.hh>

using namespace patmine;

namespace
{
  struct CommonArgs
  {
    std::string graph;
    std::string labels;
    unsigned threads = 0;
    bool no_symmetry_breaking = false;
  };

  void add_common(CLI::App *cmd, CommonArgs &args)
  {
    cmd->add_option("graph", args.graph, "edge list or snapshot")->required();
    cmd->add_option("--labels", args.labels, "vertex label file");
    cmd->add_option("--threads", args.threads, "worker threads (default: PM_THREADS or hardware)");
    cmd->add_flag("--no-symmetry-breaking", args.no_symmetry_breaking,
                  "match with an empty partial order (every automorphic match is reported)");
  }

  unsigned resolve_threads(unsigned flag_value)
  {
    if (flag_value > 0) return flag_value;
    if (const char *env = std::getenv("PM_THREADS"))
    {
      long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  MatchOptions make_options(const CommonArgs &args)
  {
    MatchOptions opts;
    opts.threads = resolve_threads(args.threads);
    opts.symmetry_breaking = !args.no_symmetry_breaking;
    return opts;
  }

  void print_header(const CommonArgs &args, unsigned threads)
  {
    std::cout << "# graph " << args.graph << "\n";
    std::cout << "# threads " << threads << "\n";
  }

  // "0.4" -> 4/10; exact decimal parsing so bound comparisons stay rational
  std::pair<uint64_t, uint64_t> parse_bound(const std::string &s)
  {
    size_t dot = s.find('.');
    std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ConfigError("empty bound");
    for (char c : whole + frac)
    {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ConfigError("bound must be a decimal in [0,1]");
    }
    uint64_t den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    uint64_t num = (whole.empty() ? 0 : std::stoull(whole)) * den + (frac.empty() ? 0 : std::stoull(frac));
    if (num > den) throw ConfigError("bound must be within [0, 1]");
    return {num, den};
  }

  // stable display names for the 3-motifs; larger motifs print their code
  std::string motif_name(uint32_t k, const std::string &code)
  {
    if (k == 3)
    {
      if (code == generate_clique(3).canonical_code()) return "triangle";
      if (code == generate_star(3).canonical_code()) return "path3";
    }
    return code;
  }
} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"pattern-aware graph mining"};
  app.require_subcommand(1);

  CommonArgs args;

  auto *convert = app.add_subcommand("convert", "write a binary snapshot of the reordered graph");
  std::string output;
  add_common(convert, args);
  convert->add_option("--output", output, "snapshot path")->required();

  auto *motifs = app.add_subcommand("motifs", "count vertex-induced motifs of size k");
  uint32_t motif_k = 3;
  add_common(motifs, args);
  motifs->add_option("-k,--size", motif_k, "motif size (3..5)");

  auto *cliques = app.add_subcommand("cliques", "count k-cliques");
  uint32_t clique_k = 3;
  add_common(cliques, args);
  cliques->add_option("-k,--size", clique_k, "clique size");

  auto *fsm_cmd = app.add_subcommand("fsm", "frequent subgraph mining by MNI support");
  uint64_t tau = 1;
  uint32_t max_edges = 3;
  add_common(fsm_cmd, args);
  fsm_cmd->add_option("--tau", tau, "support threshold");
  fsm_cmd->add_option("--max-edges", max_edges, "largest pattern edge count");

  auto *match_cmd = app.add_subcommand("match", "count matches of the patterns in a file");
  std::string pattern_file;
  std::string mode_str = "edge";
  add_common(match_cmd, args);
  match_cmd->add_option("--patterns", pattern_file, "pattern file")->required();
  match_cmd->add_option("--mode", mode_str, "edge | vertex")->check(CLI::IsMember({"edge", "vertex"}));

  auto *exists_cmd = app.add_subcommand("exists", "does a k-clique exist?");
  uint32_t exists_k = 3;
  add_common(exists_cmd, args);
  exists_cmd->add_option("-k,--size", exists_k, "clique size");

  auto *cc_cmd = app.add_subcommand("cc", "is the global clustering coefficient at least the bound?");
  std::string bound_str = "0.5";
  add_common(cc_cmd, args);
  cc_cmd->add_option("--bound", bound_str, "decimal bound in [0,1]");

  auto *plan_cmd = app.add_subcommand("plan", "print exploration plans for the patterns in a file");
  std::string plan_patterns;
  plan_cmd->add_option("--patterns", plan_patterns, "pattern file")->required();
  plan_cmd->add_flag("--no-symmetry-breaking", args.no_symmetry_breaking,
                     "plan with an empty partial order");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto started = std::chrono::steady_clock::now();
  try
  {
    if (plan_cmd->parsed())
    {
      auto patterns = load_patterns(plan_patterns);
      for (size_t i = 0; i < patterns.size(); ++i)
      {
        std::cout << "# pattern " << (i + 1) << "\n";
        PlanOptions popts;
        popts.symmetry_breaking = !args.no_symmetry_breaking;
        std::cout << generate_plan(patterns[i], popts).explain();
      }
      return 0;
    }

    MatchOptions opts = make_options(args);
    DataGraph g = DataGraph::load(args.graph, args.labels);
    print_header(args, opts.threads);

    if (convert->parsed())
    {
      g.save_snapshot(output);
      std::cout << "# output " << output << "\n";
      std::cout << "vertices " << g.vertex_count() << "\n";
      std::cout << "edges " << g.edge_count() << "\n";
    }
    else if (motifs->parsed())
    {
      for (const auto &[code, n] : motif_count(motif_k, g, opts))
        std::cout << motif_name(motif_k, code) << ' ' << n << "\n";
    }
    else if (cliques->parsed())
    {
      std::cout << "clique" << clique_k << ' ' << clique_count(clique_k, g, opts) << "\n";
    }
    else if (fsm_cmd->parsed())
    {
      for (const auto &[code, support] : fsm(g, max_edges, tau, opts))
        std::cout << code << '\t' << support << "\n";
    }
    else if (match_cmd->parsed())
    {
      auto patterns = load_patterns(pattern_file);
      MatchMode mode = mode_str == "vertex" ? MatchMode::vertex_induced : MatchMode::edge_induced;
      auto counts = pattern_match(patterns, g, mode, opts);
      for (size_t i = 0; i < counts.size(); ++i)
        std::cout << 'p' << (i + 1) << ' ' << counts[i] << "\n";
    }
    else if (exists_cmd->parsed())
    {
      std::cout << "exists" << exists_k << ' '
                << (exists_clique(exists_k, g, opts) ? "true" : "false") << "\n";
    }
    else if (cc_cmd->parsed())
    {
      auto [num, den] = parse_bound(bound_str);
      std::cout << "ccbound " << (cc_bound(g, num, den, opts) ? "true" : "false") << "\n";
    }
  }
  catch (const UnsupportedSizeError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const ConfigError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cerr << "# elapsed-ms " << elapsed.count() << "\n";
  return 0;
}
