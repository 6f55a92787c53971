#ifndef PATMINE_MATCHER_HH
#define PATMINE_MATCHER_HH

#include <atomic>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "data_graph.hh"
#include "pattern.hh"
#include "pattern_gen.hh"
#include "plan.hh"

namespace patmine
{
  inline constexpr DataVertex kUnmatched = std::numeric_limits<DataVertex>::max();

  // Workers poll the stop flag every this many candidate extensions, which
  // bounds both polling overhead and termination latency.
  inline constexpr uint64_t kStopPollInterval = 1024;

  enum class MatchMode
  {
    edge_induced,
    vertex_induced,
  };

  struct MatchStats
  {
    uint64_t matches = 0;
    uint64_t extension_steps = 0;
    uint64_t set_operations = 0;
    // The guided exploration never inspects a match for uniqueness or
    // structure, so these stay zero; they exist for comparison against
    // exhaustive baselines.
    uint64_t canonicality_checks = 0;
    uint64_t isomorphism_checks = 0;
  };

  namespace detail
  {
    struct SharedCounters
    {
      std::atomic<uint64_t> matches{0};
      std::atomic<uint64_t> extensions{0};
      std::atomic<uint64_t> set_ops{0};
    };

    struct ControlAccess;
  } // namespace detail

  /**
   * Run control shared by all matching threads. stop_exploration() may be
   * called from a callback; workers notice within kStopPollInterval
   * candidate extensions and abandon their remaining work. Idempotent.
   */
  class Control
  {
  public:
    void stop_exploration() { stop_.store(true, std::memory_order_relaxed); }
    bool stopped() const { return stop_.load(std::memory_order_relaxed); }

    // total candidate extensions across workers so far
    uint64_t extension_steps() const
    {
      return counters_ ? counters_->extensions.load(std::memory_order_relaxed) : 0;
    }

  private:
    friend struct detail::ControlAccess;
    std::atomic<bool> stop_{false};
    const detail::SharedCounters *counters_ = nullptr;
  };

  namespace detail
  {
    struct ControlAccess
    {
      static void bind(Control &c, const SharedCounters *counters) { c.counters_ = counters; }
    };
  } // namespace detail

  /**
   * A completed match. `mapping` is indexed by pattern vertex (1-based) and
   * holds internal data-vertex ids; anti-vertices stay kUnmatched. Original
   * ids and labels are resolved through the graph.
   */
  struct Match
  {
    const std::vector<DataVertex> &mapping;
    const DataGraph &graph;

    DataVertex internal(PatternVertex u) const { return mapping[u - 1]; }
    uint64_t original(PatternVertex u) const { return graph.original_id(mapping[u - 1]); }
    Label label(PatternVertex u) const { return graph.label(mapping[u - 1]); }
  };

  struct MatchOptions
  {
    unsigned threads = 0; // 0: hardware concurrency
    bool symmetry_breaking = true;
    Traversal traversal = Traversal::high_to_low;
  };

  namespace detail
  {
    inline bool label_ok(Label pattern_label, Label data_label)
    {
      return pattern_label == kWildcardLabel || pattern_label == data_label;
    }

    struct Workspace
    {
      std::vector<DataVertex> mapping;  // pattern vertex -> data vertex
      std::vector<DataVertex> pos_val;  // matching-order position -> data vertex
      std::vector<std::vector<DataVertex>> core_cands;
      std::vector<std::vector<DataVertex>> nc_cands;
      std::vector<DataVertex> tmp;
      std::vector<DataVertex> av_cands;
      std::vector<DataVertex> av_excluded;
      uint64_t poll_clock = 0;
      bool stop = false;

      Workspace(const ExplorationPlan &plan)
      {
        uint32_t n = plan.pattern.num_vertices();
        mapping.assign(n, kUnmatched);
        size_t max_core = 1;
        for (const auto &mo : plan.matching_orders) max_core = std::max(max_core, mo.steps.size());
        pos_val.assign(max_core + 1, kUnmatched);
        core_cands.resize(max_core);
        nc_cands.resize(plan.non_core.size());
      }
    };

    template <typename F>
    struct TaskRunner
    {
      const ExplorationPlan &plan;
      const DataGraph &g;
      F &callback;
      Control &ctl;
      Workspace &ws;
      SharedCounters &counters;

      // counts one candidate extension and polls the stop flag periodically
      bool tick()
      {
        counters.extensions.fetch_add(1, std::memory_order_relaxed);
        if ((++ws.poll_clock & (kStopPollInterval - 1)) == 0 && ctl.stopped()) ws.stop = true;
        return !ws.stop;
      }

      void run(DataVertex start)
      {
        for (const auto &mo : plan.matching_orders)
        {
          if (ws.stop) return;
          const CoreStep &first = mo.steps.front();
          if (!label_ok(first.label, g.label(start))) continue;
          ws.pos_val[first.position] = start;
          descend_core(mo, 1);
        }
      }

      void descend_core(const MatchingOrder &mo, size_t level)
      {
        if (level == mo.steps.size())
        {
          convert_and_complete(mo);
          return;
        }
        const CoreStep &step = mo.steps[level];

        Bounds bounds;
        if (step.lower_pos != 0) bounds.lower = ws.pos_val[step.lower_pos];
        if (step.upper_pos != 0) bounds.upper = ws.pos_val[step.upper_pos];
        std::span<const DataVertex> base = bounds.clamp(g.adj(ws.pos_val[step.true_prev.front()]));

        std::span<const DataVertex> cands = base;
        auto &buf = ws.core_cands[level];
        if (step.true_prev.size() > 1 || !step.anti_prev.empty())
        {
          buf.assign(base.begin(), base.end());
          for (size_t i = 1; i < step.true_prev.size(); ++i)
          {
            ws.tmp.swap(buf);
            intersect_into(buf, ws.tmp, g.adj(ws.pos_val[step.true_prev[i]]));
          }
          for (PatternVertex q : step.anti_prev)
          {
            ws.tmp.swap(buf);
            difference_into(buf, ws.tmp, g.adj(ws.pos_val[q]));
          }
          counters.set_ops.fetch_add(step.true_prev.size() - 1 + step.anti_prev.size(),
                                     std::memory_order_relaxed);
          cands = buf;
        }

        for (DataVertex c : cands)
        {
          if (!tick()) return;
          if (!label_ok(step.label, g.label(c))) continue;
          ws.pos_val[step.position] = c;
          descend_core(mo, level + 1);
          if (ws.stop) return;
        }
      }

      void convert_and_complete(const MatchingOrder &mo)
      {
        const size_t k = mo.steps.size();
        for (const auto &seq : mo.sequences)
        {
          if (ws.stop) return;
          for (size_t i = 0; i < k; ++i) ws.mapping[seq[i] - 1] = ws.pos_val[i + 1];
          complete_non_core(0);
          for (size_t i = 0; i < k; ++i) ws.mapping[seq[i] - 1] = kUnmatched;
        }
      }

      void complete_non_core(size_t idx)
      {
        if (idx == plan.non_core.size())
        {
          if (!check_anti_vertices()) return;
          counters.matches.fetch_add(1, std::memory_order_relaxed);
          callback(Match{ws.mapping, g}, ctl);
          return;
        }
        const NonCoreVertex &nc = plan.non_core[idx];

        Bounds bounds;
        for (PatternVertex u : nc.lower_vs)
        {
          DataVertex val = ws.mapping[u - 1];
          if (!bounds.lower || val > *bounds.lower) bounds.lower = val;
        }
        for (PatternVertex u : nc.upper_vs)
        {
          DataVertex val = ws.mapping[u - 1];
          if (!bounds.upper || val < *bounds.upper) bounds.upper = val;
        }
        std::span<const DataVertex> base = bounds.clamp(g.adj(ws.mapping[nc.true_nbrs.front() - 1]));

        std::span<const DataVertex> cands = base;
        auto &buf = ws.nc_cands[idx];
        if (nc.true_nbrs.size() > 1 || !nc.anti_nbrs.empty())
        {
          buf.assign(base.begin(), base.end());
          for (size_t i = 1; i < nc.true_nbrs.size(); ++i)
          {
            ws.tmp.swap(buf);
            intersect_into(buf, ws.tmp, g.adj(ws.mapping[nc.true_nbrs[i] - 1]));
          }
          for (PatternVertex q : nc.anti_nbrs)
          {
            ws.tmp.swap(buf);
            difference_into(buf, ws.tmp, g.adj(ws.mapping[q - 1]));
          }
          counters.set_ops.fetch_add(nc.true_nbrs.size() - 1 + nc.anti_nbrs.size(),
                                     std::memory_order_relaxed);
          cands = buf;
        }

        for (DataVertex c : cands)
        {
          if (!tick()) return;
          if (!label_ok(nc.label, g.label(c))) continue;
          bool used = false;
          for (DataVertex m : ws.mapping)
          {
            if (m == c)
            {
              used = true;
              break;
            }
          }
          if (used) continue;
          ws.mapping[nc.v - 1] = c;
          complete_non_core(idx + 1);
          if (ws.stop) break;
        }
        ws.mapping[nc.v - 1] = kUnmatched;
      }

      bool check_anti_vertices()
      {
        for (const AntiVertexCheck &check : plan.anti_vertex_checks)
        {
          // common neighbourhood of the matched anti-neighbours
          std::span<const DataVertex> common = g.adj(ws.mapping[check.nbrs.front() - 1]);
          if (check.nbrs.size() > 1)
          {
            auto &buf = ws.av_cands;
            buf.assign(common.begin(), common.end());
            for (size_t i = 1; i < check.nbrs.size(); ++i)
            {
              ws.tmp.swap(buf);
              intersect_into(buf, ws.tmp, g.adj(ws.mapping[check.nbrs[i] - 1]));
            }
            counters.set_ops.fetch_add(check.nbrs.size() - 1, std::memory_order_relaxed);
            common = buf;
          }
          if (common.empty()) continue;

          ws.av_excluded.clear();
          for (PatternVertex w : check.excluded) ws.av_excluded.push_back(ws.mapping[w - 1]);
          for (DataVertex x : common)
          {
            if (!label_ok(check.label, g.label(x))) continue;
            bool excluded = false;
            for (DataVertex e : ws.av_excluded)
            {
              if (e == x)
              {
                excluded = true;
                break;
              }
            }
            if (!excluded) return false; // a forbidden common neighbour exists
          }
        }
        return true;
      }
    };
  } // namespace detail

  /**
   * Matches one task: all canonical matches whose start position is bound to
   * `start_vertex`. Tasks partition the space, so running every vertex as a
   * task yields each match exactly once.
   */
  template <typename F>
  void match_task(DataVertex start_vertex, const ExplorationPlan &plan, const DataGraph &g,
                  F &&callback, Control &ctl)
  {
    detail::SharedCounters counters;
    detail::Workspace ws(plan);
    detail::TaskRunner<F> runner{plan, g, callback, ctl, ws, counters};
    runner.run(start_vertex);
  }

  template <typename F>
  MatchStats match_plan(const ExplorationPlan &plan, const DataGraph &g, F &&callback,
                        const MatchOptions &opts = {}, Control *external = nullptr)
  {
    detail::SharedCounters counters;
    Control local;
    Control &ctl = external ? *external : local;
    detail::ControlAccess::bind(ctl, &counters);

    const uint32_t n = g.vertex_count();
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    if (n > 0 && threads > n) threads = n;

    std::atomic<uint32_t> cursor{0};
    auto worker = [&]()
    {
      detail::Workspace ws(plan);
      detail::TaskRunner<F> runner{plan, g, callback, ctl, ws, counters};
      while (!ws.stop)
      {
        uint32_t i = cursor.fetch_add(1, std::memory_order_relaxed);
        if (i >= n || ctl.stopped()) break;
        // tasks in descending degree order: internal ids ascend by degree
        runner.run(n - 1 - i);
      }
    };

    if (n > 0)
    {
      if (threads == 1)
      {
        worker();
      }
      else
      {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
      }
    }

    MatchStats stats;
    stats.matches = counters.matches.load();
    stats.extension_steps = counters.extensions.load();
    stats.set_operations = counters.set_ops.load();
    detail::ControlAccess::bind(ctl, nullptr);
    return stats;
  }

  template <typename F>
  MatchStats match_all(const Pattern &p, const DataGraph &g, MatchMode mode, F &&callback,
                       const MatchOptions &opts = {}, Control *external = nullptr)
  {
    Pattern target = (mode == MatchMode::vertex_induced) ? to_vertex_induced_equivalent(p) : p;
    ExplorationPlan plan = generate_plan(target, {opts.symmetry_breaking, opts.traversal});
    return match_plan(plan, g, std::forward<F>(callback), opts, external);
  }

  inline uint64_t count(const Pattern &p, const DataGraph &g, MatchMode mode,
                        const MatchOptions &opts = {})
  {
    return match_all(p, g, mode, [](const Match &, Control &) {}, opts).matches;
  }
} // namespace patmine

#endif
