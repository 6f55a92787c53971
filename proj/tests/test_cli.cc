#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hh"

namespace
{
  namespace fs = std::filesystem;

  struct CliResult
  {
    int exit_code;
    std::string out;
    std::string err;
  };

  std::string slurp(const fs::path &p)
  {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  CliResult run_cli(const std::string &args)
  {
    static int counter = 0;
    fs::path out = fs::temp_directory_path() / ("pm_cli_out_" + std::to_string(counter) + ".txt");
    fs::path err = fs::temp_directory_path() / ("pm_cli_err_" + std::to_string(counter) + ".txt");
    counter += 1;
    std::string cmd = std::string(PM_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    CliResult res{WEXITSTATUS(status), slurp(out), slurp(err)};
    fs::remove(out);
    fs::remove(err);
    return res;
  }

  fs::path write_file(const std::string &name, const std::string &content)
  {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p);
    f << content;
    return p;
  }

  std::string k4_edges()
  {
    return "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
  }

  std::string cycle4_edges() { return "1 2\n2 3\n3 4\n4 1\n"; }
}

TEST_CASE("cli basics")
{
  auto k4 = write_file("pm_cli_k4.txt", k4_edges());

  SECTION("cliques")
  {
    auto res = run_cli("cliques -k 3 --threads 1 " + k4.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out.find("clique3 4\n") != std::string::npos);
    REQUIRE(res.out.find("# threads 1\n") != std::string::npos);
    REQUIRE(res.err.find("# elapsed-ms") != std::string::npos);
  }

  SECTION("motifs on the 4-cycle")
  {
    auto c4 = write_file("pm_cli_c4.txt", cycle4_edges());
    auto res = run_cli("motifs -k 3 --threads 1 " + c4.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out.find("triangle 0\n") != std::string::npos);
    REQUIRE(res.out.find("path3 4\n") != std::string::npos);
  }

  SECTION("exists")
  {
    auto res = run_cli("exists -k 4 --threads 1 " + k4.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out.find("exists4 true\n") != std::string::npos);
  }

  SECTION("cc")
  {
    auto res = run_cli("cc --bound 1.0 --threads 1 " + k4.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out.find("ccbound true\n") != std::string::npos);
  }

  SECTION("usage errors exit 2")
  {
    REQUIRE(run_cli("cliques --bogus-flag " + k4.string()).exit_code == 2);
    REQUIRE(run_cli("motifs -k 9 --threads 1 " + k4.string()).exit_code == 2);
  }

  SECTION("PM_THREADS is the fallback for --threads")
  {
    fs::path out = fs::temp_directory_path() / "pm_cli_env.txt";
    std::string cmd = "PM_THREADS=3 " + std::string(PM_CLI_PATH) + " cliques -k 3 " +
                      k4.string() + " > " + out.string() + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    REQUIRE(slurp(out).find("# threads 3\n") != std::string::npos);
    fs::remove(out);
  }

  SECTION("data errors exit 3")
  {
    REQUIRE(run_cli("cliques -k 3 /nonexistent/graph.txt").exit_code == 3);
    auto bad = write_file("pm_cli_bad.txt", "1 zzz\n");
    REQUIRE(run_cli("cliques -k 3 " + bad.string()).exit_code == 3);
  }
}

TEST_CASE("cli determinism and ablation")
{
  auto graph = write_file("pm_cli_rand.txt", [&]
  {
    std::ostringstream ss;
    for (auto [u, v] : testutil::gnp_edges(20, 0.3, 31)) ss << u << ' ' << v << "\n";
    return ss.str();
  }());

  SECTION("single-threaded reports are byte identical")
  {
    auto a = run_cli("motifs -k 3 --threads 1 " + graph.string());
    auto b = run_cli("motifs -k 3 --threads 1 " + graph.string());
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
  }

  SECTION("result rows are identical across thread counts")
  {
    auto a = run_cli("motifs -k 4 --threads 1 " + graph.string());
    auto b = run_cli("motifs -k 4 --threads 8 " + graph.string());
    std::string rows_a = a.out.substr(a.out.find("\n# threads"));
    std::string rows_b = b.out.substr(b.out.find("\n# threads"));
    REQUIRE(rows_a.substr(rows_a.find('\n', 1)) == rows_b.substr(rows_b.find('\n', 1)));
  }

  SECTION("symmetry-breaking ablation multiplies 4-star counts by 6")
  {
    auto star = write_file("pm_cli_star.txt", "1 2\n1 3\n1 4\n");
    auto on = run_cli("match --patterns " + star.string() + " --threads 2 " + graph.string());
    auto off = run_cli("match --patterns " + star.string() +
                       " --threads 2 --no-symmetry-breaking " + graph.string());
    REQUIRE(on.exit_code == 0);
    REQUIRE(off.exit_code == 0);
    auto value = [](const std::string &out)
    {
      size_t p = out.find("p1 ");
      return std::stoull(out.substr(p + 3));
    };
    REQUIRE(value(off.out) == 6 * value(on.out));
    REQUIRE(value(on.out) > 0);
  }
}

TEST_CASE("cli convert and snapshot use")
{
  auto k4 = write_file("pm_cli_conv_k4.txt", k4_edges());
  auto snap = std::filesystem::temp_directory_path() / "pm_cli_k4.pmg";

  auto conv = run_cli("convert --output " + snap.string() + " --threads 1 " + k4.string());
  REQUIRE(conv.exit_code == 0);
  REQUIRE(conv.out.find("vertices 4\n") != std::string::npos);
  REQUIRE(conv.out.find("edges 6\n") != std::string::npos);

  auto from_snap = run_cli("cliques -k 3 --threads 1 " + snap.string());
  REQUIRE(from_snap.exit_code == 0);
  REQUIRE(from_snap.out.find("clique3 4\n") != std::string::npos);
  std::filesystem::remove(snap);
}

TEST_CASE("cli plan explain golden output")
{
  auto patterns = write_file("pm_cli_diamond.txt", "1 2\n2 3\n3 4\n4 1\n2 4\n");
  auto res = run_cli("plan --patterns " + patterns.string());
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.out ==
          "# pattern 1\n"
          "pattern: 4:1-2,1-4,2-3,2-4,3-4::\n"
          "core: 2 4\n"
          "partial-order: 1<3 2<4\n"
          "matching-order: core=2:1-2:: seqs=(2 4)\n"
          "non-core: 1 true=(2 4) anti=()\n"
          "non-core: 3 true=(2 4) anti=()\n");
}

TEST_CASE("cli fsm")
{
  auto edges = write_file("pm_cli_fsm_e.txt", "1 2\n1 3\n2 3\n");
  auto labels = write_file("pm_cli_fsm_l.txt", "1 9\n2 9\n3 9\n");
  auto res = run_cli("fsm --tau 3 --max-edges 1 --threads 1 --labels " + labels.string() + " " +
                     edges.string());
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.out.find("\t3\n") != std::string::npos);

  auto unlabelled = run_cli("fsm --tau 1 --threads 1 " + edges.string());
  REQUIRE(unlabelled.exit_code == 2);
}
