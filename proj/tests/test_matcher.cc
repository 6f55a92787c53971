#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <mutex>
#include <set>

#include <patmine/matcher.hh>
#include <patmine/pattern_gen.hh>

#include "test_util.hh"

using namespace patmine;
using testutil::matches_oracle;
using testutil::run_matcher;

TEST_CASE("basic counts")
{
  REQUIRE(count(generate_clique(3), testutil::complete_graph(3), MatchMode::edge_induced) == 1);
  REQUIRE(count(generate_clique(3), testutil::complete_graph(4), MatchMode::edge_induced) == 4);

  SECTION("3-path on a triangle: edge- vs vertex-induced")
  {
    DataGraph tri = testutil::complete_graph(3);
    REQUIRE(count(generate_star(3), tri, MatchMode::edge_induced) == 3);
    REQUIRE(count(generate_star(3), tri, MatchMode::vertex_induced) == 0);
  }

  SECTION("vertex-induced 4-star on a 5-leaf star")
  {
    DataGraph s5 = testutil::star_graph(5);
    REQUIRE(count(generate_star(4), s5, MatchMode::vertex_induced) == 10); // C(5,3)
  }

  SECTION("clique counts are binomials")
  {
    REQUIRE(count(generate_clique(3), testutil::complete_graph(6), MatchMode::edge_induced) == 20);
    REQUIRE(count(generate_clique(4), testutil::complete_graph(6), MatchMode::edge_induced) == 15);
  }
}

TEST_CASE("match task partitioning")
{
  // the triangle plan on K3: only the task whose start vertex is the
  // highest-id one produces the canonical match
  DataGraph g = testutil::complete_graph(3);
  auto plan = generate_plan(generate_clique(3));
  uint64_t total = 0;
  for (DataVertex v = 0; v < g.vertex_count(); ++v)
  {
    Control ctl;
    uint64_t here = 0;
    match_task(v, plan, g, [&](const Match &, Control &) { here += 1; }, ctl);
    total += here;
  }
  REQUIRE(total == 1);
}

TEST_CASE("anti-vertex matching")
{
  // triangle {1,4,6}: corners 4,6 and 1,6 have no outside common neighbour,
  // but 1,4 share vertex 2, so exactly one of its three corner choices is
  // suppressed
  DataGraph g({{1, 4}, {4, 6}, {1, 6}, {2, 1}, {2, 4}, {3, 2}, {5, 3}});
  Pattern pe = testutil::pattern_e();
  REQUIRE(matches_oracle(pe, g, MatchMode::edge_induced));

  std::set<DataVertex> triangle = {*g.internal_id(1), *g.internal_id(4), *g.internal_id(6)};
  uint64_t on_triangle = 0;
  for (const auto &m : run_matcher(pe, g, MatchMode::edge_induced))
  {
    std::set<DataVertex> image;
    for (DataVertex v : m)
    {
      if (v != kUnmatched) image.insert(v);
    }
    if (image == triangle) on_triangle += 1;
  }
  REQUIRE(on_triangle == 2);
}

TEST_CASE("matcher equals oracle on random graphs")
{
  std::vector<Pattern> plain;
  for (uint32_t k = 2; k <= 4; ++k)
  {
    auto ps = generate_all_vertex_induced(k);
    plain.insert(plain.end(), ps.begin(), ps.end());
  }
  auto anti = testutil::constraint_patterns();

  for (uint32_t seed = 0; seed < 8; ++seed)
  {
    DataGraph g = testutil::gnp_graph(10, 0.3 + 0.05 * seed, seed);
    for (const Pattern &p : plain)
    {
      REQUIRE(matches_oracle(p, g, MatchMode::edge_induced));
      REQUIRE(matches_oracle(p, g, MatchMode::vertex_induced));
    }
    for (const Pattern &p : anti)
    {
      REQUIRE(matches_oracle(p, g, MatchMode::edge_induced));
    }
  }
}

TEST_CASE("labelled matching")
{
  DataGraph g = testutil::gnp_labelled_graph(10, 0.5, 2, 5);
  Pattern p{{1, 2}, {2, 3}};
  p.set_label(1, 0).set_label(2, 1).set_label(3, 0);

  std::mutex m;
  std::set<std::vector<DataVertex>> seen;
  match_all(p, g, MatchMode::edge_induced, [&](const Match &match, Control &)
  {
    REQUIRE(match.label(1) == 0);
    REQUIRE(match.label(2) == 1);
    REQUIRE(match.label(3) == 0);
    std::lock_guard lock(m);
    seen.insert(match.mapping);
  });
  REQUIRE(seen == oracle::canonical_matches(p, g, MatchMode::edge_induced));
}

TEST_CASE("symmetry breaking ablation multiplies counts by the automorphism count")
{
  for (uint32_t seed = 0; seed < 4; ++seed)
  {
    DataGraph g = testutil::gnp_graph(11, 0.45, 100 + seed);
    for (const Pattern &p : generate_all_vertex_induced(4))
    {
      uint64_t on = count(p, g, MatchMode::edge_induced);
      MatchOptions off;
      off.symmetry_breaking = false;
      uint64_t raw = count(p, g, MatchMode::edge_induced, off);
      REQUIRE(raw == automorphisms(p).size() * on);
    }
  }
}

TEST_CASE("traversal direction does not change the match set")
{
  DataGraph g = testutil::gnp_graph(11, 0.4, 321);
  for (const Pattern &p : generate_all_vertex_induced(4))
  {
    MatchOptions low;
    low.traversal = Traversal::low_to_high;
    auto a = oracle::canonicalize(p, run_matcher(p, g, MatchMode::edge_induced));
    auto b = oracle::canonicalize(p, run_matcher(p, g, MatchMode::edge_induced, low));
    REQUIRE(a == b);
  }
}

TEST_CASE("match set is identical across thread counts")
{
  DataGraph g = testutil::gnp_graph(12, 0.5, 42);
  Pattern p = generate_all_vertex_induced(4)[3];
  std::set<std::vector<DataVertex>> sets[3];
  unsigned threads[3] = {1, 2, 8};
  for (int i = 0; i < 3; ++i)
  {
    MatchOptions opts;
    opts.threads = threads[i];
    auto raw = run_matcher(p, g, MatchMode::edge_induced, opts);
    sets[i] = std::set<std::vector<DataVertex>>(raw.begin(), raw.end());
  }
  REQUIRE(sets[0] == sets[1]);
  REQUIRE(sets[0] == sets[2]);
}

TEST_CASE("early termination")
{
  SECTION("no stop: identical result")
  {
    DataGraph g = testutil::complete_graph(6);
    REQUIRE(count(generate_clique(3), g, MatchMode::edge_induced) == 20);
  }

  SECTION("stop on first match is promptly observed")
  {
    DataGraph g = testutil::complete_graph(20);
    std::atomic<uint64_t> calls{0};
    MatchOptions opts;
    opts.threads = 4;
    match_all(Pattern{{1, 2}}, g, MatchMode::edge_induced, [&](const Match &, Control &ctl)
    {
      calls.fetch_add(1);
      ctl.stop_exploration();
    }, opts);
    REQUIRE(calls.load() >= 1);
    REQUIRE(calls.load() <= 4 * kStopPollInterval);
  }

  SECTION("stopped clique search visits far fewer matches than exist")
  {
    DataGraph g = testutil::complete_graph(100);
    std::atomic<uint64_t> seen{0};
    MatchOptions opts;
    opts.threads = 2;
    MatchStats stats = match_all(generate_clique(3), g, MatchMode::edge_induced,
                                 [&](const Match &, Control &ctl)
    {
      seen.fetch_add(1);
      ctl.stop_exploration();
    }, opts);
    REQUIRE(seen.load() >= 1);
    REQUIRE(stats.matches < 161700 / 4); // far below C(100,3), the unstopped total
  }
}

TEST_CASE("matcher exposes no canonicality or isomorphism work")
{
  DataGraph g = testutil::gnp_graph(12, 0.5, 7);
  MatchStats stats = match_all(generate_clique(3), g, MatchMode::edge_induced,
                               [](const Match &, Control &) {});
  REQUIRE(stats.canonicality_checks == 0);
  REQUIRE(stats.isomorphism_checks == 0);
  REQUIRE(stats.matches > 0);
  REQUIRE(stats.extension_steps > 0);
}
