#ifndef PATMINE_APPS_HH
#define PATMINE_APPS_HH

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aggregation.hh"
#include "data_graph.hh"
#include "matcher.hh"
#include "pattern.hh"
#include "pattern_gen.hh"
#include "plan.hh"

namespace patmine
{
  namespace detail
  {
    // Thread-side accumulation for labelled-pattern discovery. Matches are
    // binned by the canonical code of their discovered labelling; domains
    // are populated once per automorphic variant so they equal the true MNI
    // domains even though only canonical matches are enumerated.
    struct LabelBins
    {
      std::map<std::string, DomainMap> domains;
      std::map<std::string, Pattern> patterns;
      std::map<std::string, std::vector<std::vector<PatternVertex>>> auts;
      uint64_t pending = 0;
    };

    inline std::map<std::string, DomainMap> merge_bins(std::map<std::string, DomainMap> a,
                                                       const std::map<std::string, DomainMap> &b)
    {
      for (const auto &[code, dm] : b)
      {
        auto [it, fresh] = a.emplace(code, dm);
        if (!fresh) it->second.merge(dm);
      }
      return a;
    }

    inline unsigned resolve_threads(const MatchOptions &opts)
    {
      return opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    }
  } // namespace detail

  struct SupportTable
  {
    std::map<std::string, uint64_t> supports;  // canonical code -> MNI support
    std::map<std::string, Pattern> patterns;   // canonical code -> canonical pattern
  };

  /**
   * Matches `query` edge-induced with label discovery: every match is binned
   * under the canonical form of the pattern labelled as matched, and each
   * bin's MNI domains are accumulated. Queries may be unlabelled, partially
   * labelled (wildcard vertices) or fully labelled.
   */
  inline SupportTable discover_supports(const DataGraph &g, const Pattern &query,
                                        const MatchOptions &opts = {})
  {
    static std::atomic<uint64_t> run_counter{1};
    const uint64_t run_id = run_counter.fetch_add(1);
    const unsigned threads = detail::resolve_threads(opts);
    const uint32_t n = query.num_vertices();

    std::mutex registry_m;
    std::vector<std::unique_ptr<detail::LabelBins>> registry;

    Aggregator<std::map<std::string, DomainMap>, decltype(&detail::merge_bins)>
        agg(threads, {}, &detail::merge_bins);

    auto local_bins = [&]() -> std::pair<detail::LabelBins &, size_t>
    {
      thread_local uint64_t seen_run = 0;
      thread_local detail::LabelBins *mine = nullptr;
      thread_local size_t slot = 0;
      if (seen_run != run_id)
      {
        auto bins = std::make_unique<detail::LabelBins>();
        mine = bins.get();
        std::lock_guard lock(registry_m);
        slot = registry.size();
        registry.push_back(std::move(bins));
        seen_run = run_id;
      }
      return {*mine, slot};
    };

    MatchOptions mopts = opts;
    mopts.threads = threads;
    match_all(query, g, MatchMode::edge_induced, [&](const Match &m, Control &)
    {
      auto [bins, slot] = local_bins();

      Pattern labelled(query);
      for (PatternVertex u = 1; u <= n; ++u)
      {
        if (query.is_regular(u)) labelled.set_label(u, m.label(u));
      }
      auto cf = labelled.canonical_form();

      auto it = bins.domains.find(cf.code);
      if (it == bins.domains.end())
      {
        Pattern canon = labelled.permuted(cf.perm);
        it = bins.domains.emplace(cf.code, DomainMap(canon, g.vertex_count())).first;
        bins.auts.emplace(cf.code, automorphisms(canon));
        bins.patterns.emplace(cf.code, std::move(canon));
      }

      // canonical view of the match, then one insert per automorphic variant
      std::vector<DataVertex> mc(n, kUnmatched);
      for (PatternVertex u = 1; u <= n; ++u)
      {
        mc[cf.perm[u - 1] - 1] = m.mapping[u - 1];
      }
      DomainMap &dm = it->second;
      for (const auto &sigma : bins.auts[cf.code])
      {
        for (PatternVertex w = 1; w <= n; ++w)
        {
          DataVertex v = mc[sigma[w - 1] - 1];
          if (v != kUnmatched) dm.insert(w, v);
        }
      }

      if (++bins.pending >= 4096)
      {
        agg.publish(slot, bins.domains);
        bins.pending = 0;
      }
    }, mopts);

    // final cumulative publish per worker, then drain: exact totals
    for (size_t i = 0; i < registry.size(); ++i) agg.publish(i, registry[i]->domains);
    agg.finish();

    SupportTable table;
    for (const auto &[code, dm] : agg.snapshot()) table.supports[code] = dm.support();
    for (auto &bins : registry)
    {
      for (auto &[code, p] : bins->patterns) table.patterns.emplace(code, std::move(p));
    }
    return table;
  }

  inline std::map<std::string, uint64_t> motif_count(uint32_t k, const DataGraph &g,
                                                     const MatchOptions &opts = {})
  {
    if (k < 3 || k > 5) throw UnsupportedSizeError("motif counting supports sizes 3..5");
    std::map<std::string, uint64_t> counts;
    for (const Pattern &p : generate_all_vertex_induced(k))
    {
      counts[p.canonical_code()] = count(p, g, MatchMode::vertex_induced, opts);
    }
    return counts;
  }

  inline uint64_t clique_count(uint32_t k, const DataGraph &g, const MatchOptions &opts = {})
  {
    if (k < 3) throw UnsupportedSizeError("clique counting needs k >= 3");
    return count(generate_clique(k), g, MatchMode::edge_induced, opts);
  }

  /**
   * Frequent subgraph mining: discover frequent labelled single edges, then
   * repeatedly extend the frequent patterns by one edge (re-using wildcard
   * vertices for label discovery) and keep those whose MNI support reaches
   * tau. Edge-induced throughout.
   */
  inline std::map<std::string, uint64_t> fsm(const DataGraph &g, uint32_t max_edges, uint64_t tau,
                                             const MatchOptions &opts = {})
  {
    if (!g.labelled()) throw ConfigError("frequent subgraph mining needs a labelled graph");
    if (max_edges < 1 || max_edges > kMaxGeneratedEdges)
      throw UnsupportedSizeError("max edge count must be in 1.." + std::to_string(kMaxGeneratedEdges));
    if (tau < 1) throw ConfigError("support threshold must be at least 1");

    std::map<std::string, uint64_t> result;
    std::vector<Pattern> frontier = {Pattern{{1, 2}}};

    for (uint32_t k = 1; k <= max_edges && !frontier.empty(); ++k)
    {
      std::map<std::string, uint64_t> supports;
      std::map<std::string, Pattern> patterns;
      for (const Pattern &q : frontier)
      {
        SupportTable table = discover_supports(g, q, opts);
        for (const auto &[code, s] : table.supports)
        {
          // the same labelled pattern can be discovered through different
          // queries; its support is a property of the pattern alone
          supports[code] = std::max(supports[code], s);
        }
        for (auto &[code, p] : table.patterns) patterns.emplace(code, std::move(p));
      }

      auto frequent = frequency_check(supports, tau);
      std::vector<Pattern> survivors;
      for (const auto &[code, s] : frequent)
      {
        result.emplace(code, s);
        survivors.push_back(patterns.at(code));
      }
      frontier = (k < max_edges) ? extend(survivors, ExtendMode::by_edge) : std::vector<Pattern>{};
    }
    return result;
  }

  // Per-pattern counts in input order; validation failures name the pattern.
  inline std::vector<uint64_t> pattern_match(const std::vector<Pattern> &patterns, const DataGraph &g,
                                             MatchMode mode, const MatchOptions &opts = {})
  {
    std::vector<uint64_t> counts;
    counts.reserve(patterns.size());
    for (size_t i = 0; i < patterns.size(); ++i)
    {
      try
      {
        counts.push_back(count(patterns[i], g, mode, opts));
      }
      catch (const ValidationError &e)
      {
        throw ValidationError("pattern " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    return counts;
  }

  inline bool exists_clique(uint32_t k, const DataGraph &g, const MatchOptions &opts = {},
                            MatchStats *stats_out = nullptr)
  {
    if (k < 2) throw UnsupportedSizeError("clique existence needs k >= 2");
    if (k > g.vertex_count()) return false;
    std::atomic<bool> found{false};
    MatchStats stats = match_all(generate_clique(k), g, MatchMode::edge_induced,
                                 [&](const Match &, Control &ctl)
    {
      found.store(true, std::memory_order_relaxed);
      ctl.stop_exploration();
    }, opts);
    if (stats_out) *stats_out = stats;
    return found.load();
  }

  /**
   * Decides whether the global clustering coefficient reaches bound_num /
   * bound_den, exactly. Wedges are counted first via the 3-star pattern,
   * then triangle counting stops early once 3t >= bound * wedges.
   */
  inline bool cc_bound(const DataGraph &g, uint64_t bound_num, uint64_t bound_den,
                       const MatchOptions &opts = {})
  {
    if (bound_den == 0) throw ConfigError("bound denominator must be nonzero");
    if (bound_num > bound_den) throw ConfigError("bound must be within [0, 1]");

    const uint64_t wedges = count(generate_star(3), g, MatchMode::edge_induced, opts);
    if (wedges == 0) return bound_num == 0; // no triplets: coefficient is vacuously 0

    // GCC >= num/den  <=>  3 * triangles * den >= num * wedges, in integers
    using u128 = unsigned __int128;
    const u128 target = u128(bound_num) * wedges;
    std::atomic<uint64_t> triangles{0};
    Control ctl;
    match_all(generate_clique(3), g, MatchMode::edge_induced, [&](const Match &, Control &c)
    {
      uint64_t t = triangles.fetch_add(1, std::memory_order_relaxed) + 1;
      if (u128(3) * t * bound_den >= target) c.stop_exploration();
    }, opts, &ctl);

    if (ctl.stopped()) return true;
    return u128(3) * triangles.load() * bound_den >= target;
  }
} // namespace patmine

#endif
