#ifndef PATMINE_TEST_UTIL_HH
#define PATMINE_TEST_UTIL_HH

#include <mutex>
#include <random>
#include <vector>

#include <patmine/patmine.hh>

#include "oracle.hh"

namespace testutil
{
  using namespace patmine;

  inline std::vector<std::pair<uint64_t, uint64_t>> complete_edges(uint32_t n)
  {
    std::vector<std::pair<uint64_t, uint64_t>> edges;
    for (uint64_t u = 1; u <= n; ++u)
      for (uint64_t v = u + 1; v <= n; ++v) edges.emplace_back(u, v);
    return edges;
  }

  inline DataGraph complete_graph(uint32_t n) { return DataGraph(complete_edges(n)); }

  inline DataGraph cycle_graph(uint32_t n)
  {
    std::vector<std::pair<uint64_t, uint64_t>> edges;
    for (uint64_t u = 1; u <= n; ++u) edges.emplace_back(u, u % n + 1);
    return DataGraph(edges);
  }

  inline DataGraph star_graph(uint32_t leaves)
  {
    std::vector<std::pair<uint64_t, uint64_t>> edges;
    for (uint64_t v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return DataGraph(edges);
  }

  inline std::vector<std::pair<uint64_t, uint64_t>> gnp_edges(uint32_t n, double p, uint32_t seed)
  {
    std::mt19937 rng(seed);
    std::bernoulli_distribution flip(p);
    std::vector<std::pair<uint64_t, uint64_t>> edges;
    for (uint64_t u = 1; u <= n; ++u)
    {
      for (uint64_t v = u + 1; v <= n; ++v)
      {
        if (flip(rng)) edges.emplace_back(u, v);
      }
    }
    // keep every vertex present so graphs have exactly n vertices
    for (uint64_t u = 1; u + 1 <= n; ++u) edges.emplace_back(u, u + 1);
    return edges;
  }

  inline DataGraph gnp_graph(uint32_t n, double p, uint32_t seed)
  {
    return DataGraph(gnp_edges(n, p, seed));
  }

  inline DataGraph gnp_labelled_graph(uint32_t n, double p, uint32_t labels, uint32_t seed)
  {
    std::mt19937 rng(seed * 7919 + 13);
    std::uniform_int_distribution<uint32_t> pick(0, labels - 1);
    std::vector<std::pair<uint64_t, Label>> ls;
    for (uint64_t v = 1; v <= n; ++v) ls.emplace_back(v, pick(rng));
    return DataGraph(gnp_edges(n, p, seed), ls);
  }

  inline std::vector<oracle::Mapping> run_matcher(const Pattern &p, const DataGraph &g,
                                                  MatchMode mode, const MatchOptions &opts = {})
  {
    std::mutex m;
    std::vector<oracle::Mapping> out;
    match_all(p, g, mode, [&](const Match &match, Control &)
    {
      std::lock_guard lock(m);
      out.push_back(match.mapping);
    }, opts);
    return out;
  }

  // matcher and oracle agree: same canonical match set, one report per match
  inline bool matches_oracle(const Pattern &p, const DataGraph &g, MatchMode mode,
                             const MatchOptions &opts = {})
  {
    auto raw = run_matcher(p, g, mode, opts);
    auto expected = oracle::canonical_matches(p, g, mode);
    return raw.size() == expected.size() && oracle::canonicalize(p, raw) == expected;
  }

  // The constraint patterns used throughout: anti-edges and anti-vertices on
  // small bases.
  inline Pattern pattern_a() // square with one diagonal anti-edge
  {
    Pattern p{{1, 2}, {2, 3}, {3, 4}, {4, 1}};
    p.add_anti_edge(2, 4);
    return p;
  }

  inline Pattern pattern_b() // square with both diagonals anti-adjacent
  {
    Pattern p{{1, 2}, {2, 3}, {3, 4}, {4, 1}};
    p.add_anti_edge(1, 3);
    p.add_anti_edge(2, 4);
    return p;
  }

  inline Pattern pattern_c() // edge whose endpoints share no neighbour
  {
    Pattern p{{1, 2}};
    p.add_anti_edge(1, 3);
    p.add_anti_edge(2, 3);
    return p;
  }

  inline Pattern pattern_d() // path whose middle vertex has no other neighbours
  {
    Pattern p{{1, 2}, {2, 3}};
    p.add_anti_edge(2, 4);
    return p;
  }

  inline Pattern pattern_e() // triangle + anti-vertex across one corner pair
  {
    Pattern p{{1, 2}, {2, 3}, {1, 3}};
    p.add_anti_edge(1, 4);
    p.add_anti_edge(3, 4);
    return p;
  }

  inline Pattern pattern_f() // path combining the previous two constraints
  {
    Pattern p{{1, 2}, {2, 3}};
    p.add_anti_edge(1, 4);
    p.add_anti_edge(2, 4);
    p.add_anti_edge(2, 5);
    return p;
  }

  inline std::vector<Pattern> constraint_patterns()
  {
    return {pattern_a(), pattern_b(), pattern_c(), pattern_d(), pattern_e(), pattern_f()};
  }
} // namespace testutil

#endif
