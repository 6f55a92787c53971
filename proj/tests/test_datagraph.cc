#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <patmine/data_graph.hh>

#include "test_util.hh"

using namespace patmine;

namespace
{
  struct TempFile
  {
    std::filesystem::path path;
    TempFile(const std::string &name, const std::string &content)
      : path(std::filesystem::temp_directory_path() / name)
    {
      std::ofstream out(path);
      out << content;
    }
    ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
  };
}

TEST_CASE("ingestion cleans the edge list")
{
  SECTION("self loops dropped, duplicates collapsed")
  {
    DataGraph g({{1, 2}, {2, 1}, {3, 3}});
    REQUIRE(g.vertex_count() == 2);
    REQUIRE(g.edge_count() == 1);
  }

  SECTION("complete graph")
  {
    DataGraph g = testutil::complete_graph(4);
    REQUIRE(g.vertex_count() == 4);
    REQUIRE(g.edge_count() == 6);
    for (DataVertex v = 0; v < 4; ++v) REQUIRE(g.degree(v) == 3);
  }

  SECTION("file loading with comments and labels")
  {
    TempFile edges("pm_test_edges.txt", "# a wedge\n1 2\n1 3\n");
    TempFile labels("pm_test_labels.txt", "1 7\n2 8\n3 8\n");
    DataGraph g = DataGraph::load_edge_list(edges.path.string(), labels.path.string());
    REQUIRE(g.vertex_count() == 3);
    REQUIRE(g.labelled());
    REQUIRE(g.label(*g.internal_id(1)) == 7);

    TempFile bad("pm_test_bad.txt", "1 2\n2 x\n");
    REQUIRE_THROWS_AS(DataGraph::load_edge_list(bad.path.string()), IngestionError);
    TempFile bad_label("pm_test_badlabel.txt", "9 1\n");
    REQUIRE_THROWS_AS(DataGraph::load_edge_list(edges.path.string(), bad_label.path.string()),
                      IngestionError);
  }
}

TEST_CASE("degree reorder")
{
  SECTION("star centre receives the largest internal id")
  {
    DataGraph g = testutil::star_graph(3);
    DataVertex centre = *g.internal_id(0);
    REQUIRE(centre == g.vertex_count() - 1);
  }

  SECTION("regular graph keeps original order")
  {
    DataGraph g = testutil::cycle_graph(5);
    for (uint64_t orig = 1; orig <= 5; ++orig)
    {
      REQUIRE(g.original_id(*g.internal_id(orig)) == orig);
      REQUIRE(*g.internal_id(orig) == orig - 1);
    }
  }

  SECTION("degree order invariant on random graphs")
  {
    for (uint32_t seed = 0; seed < 5; ++seed)
    {
      DataGraph g = testutil::gnp_graph(10, 0.4, seed);
      uint64_t degree_sum = 0;
      for (DataVertex v = 0; v < g.vertex_count(); ++v)
      {
        degree_sum += g.degree(v);
        if (v + 1 < g.vertex_count()) REQUIRE(g.degree(v) <= g.degree(v + 1));
        auto a = g.adj(v);
        REQUIRE(std::is_sorted(a.begin(), a.end()));
        for (DataVertex w : a) REQUIRE(g.adjacent(w, v)); // symmetry
      }
      REQUIRE(degree_sum == 2 * g.edge_count());
    }
  }
}

TEST_CASE("ordered set operations")
{
  std::vector<DataVertex> a = {1, 3, 5}, b = {3, 5, 7};
  REQUIRE(ordered_set_op(SetOp::intersect, {a, b}) == std::vector<DataVertex>{3, 5});

  std::vector<DataVertex> c = {1, 3, 5}, d = {3};
  REQUIRE(ordered_set_op(SetOp::difference, {c, d}) == std::vector<DataVertex>{1, 5});

  std::vector<DataVertex> e = {2, 4, 6, 8}, f = {4, 6, 8};
  Bounds above4;
  above4.lower = 4;
  REQUIRE(ordered_set_op(SetOp::intersect, {e, f}, above4) == std::vector<DataVertex>{6, 8});

  SECTION("agrees with naive set semantics on random instances")
  {
    std::mt19937 rng(99);
    std::uniform_int_distribution<uint32_t> val(0, 40), len(0, 25);
    for (int trial = 0; trial < 10000; ++trial)
    {
      auto make = [&]()
      {
        std::set<DataVertex> s;
        uint32_t k = len(rng);
        for (uint32_t i = 0; i < k; ++i) s.insert(val(rng));
        return std::vector<DataVertex>(s.begin(), s.end());
      };
      auto x = make(), y = make(), z = make();
      bool difference = trial % 2 == 0;
      Bounds bounds;
      if (trial % 3 == 0) bounds.lower = val(rng);
      if (trial % 5 == 0) bounds.upper = val(rng);

      auto got = ordered_set_op(difference ? SetOp::difference : SetOp::intersect, {x, y, z}, bounds);

      std::vector<DataVertex> want;
      for (DataVertex v : x)
      {
        bool in_y = std::count(y.begin(), y.end(), v), in_z = std::count(z.begin(), z.end(), v);
        bool keep = difference ? (!in_y && !in_z) : (in_y && in_z);
        if (keep && (!bounds.lower || v > *bounds.lower) && (!bounds.upper || v < *bounds.upper))
          want.push_back(v);
      }
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("binary snapshot round trip")
{
  DataGraph g = testutil::gnp_labelled_graph(12, 0.5, 3, 77);
  auto path = std::filesystem::temp_directory_path() / "pm_test_snapshot.pmg";
  g.save_snapshot(path.string());

  REQUIRE(DataGraph::is_snapshot(path.string()));
  DataGraph h = DataGraph::load_snapshot(path.string());
  REQUIRE(h.vertex_count() == g.vertex_count());
  REQUIRE(h.edge_count() == g.edge_count());
  for (DataVertex v = 0; v < g.vertex_count(); ++v)
  {
    REQUIRE(h.original_id(v) == g.original_id(v));
    REQUIRE(h.label(v) == g.label(v));
    auto a = g.adj(v), b = h.adj(v);
    REQUIRE(std::vector<DataVertex>(a.begin(), a.end()) == std::vector<DataVertex>(b.begin(), b.end()));
  }

  SECTION("snapshot bytes are stable")
  {
    auto path2 = std::filesystem::temp_directory_path() / "pm_test_snapshot2.pmg";
    h.save_snapshot(path2.string());
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    REQUIRE(s1 == s2);
    std::filesystem::remove(path2);
  }

  std::error_code ec;
  std::filesystem::remove(path, ec);
}
