#ifndef PATMINE_PLAN_HH
#define PATMINE_PLAN_HH

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pattern.hh"

namespace patmine
{
  /**
   * Ordering constraints on the data vertices of a match: (a, b) means the
   * data vertex matched to a precedes the one matched to b. Stored as a
   * transitive reduction; the closure is computed on demand.
   */
  struct PartialOrder
  {
    std::vector<std::pair<PatternVertex, PatternVertex>> constraints;

    bool empty() const { return constraints.empty(); }

    // n x n reachability matrix, 1-based vertices
    std::vector<std::vector<bool>> closure(uint32_t n) const
    {
      std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(n + 1, false));
      for (const auto &[a, b] : constraints) reach[a][b] = true;
      for (uint32_t k = 1; k <= n; ++k)
        for (uint32_t i = 1; i <= n; ++i)
          if (reach[i][k])
            for (uint32_t j = 1; j <= n; ++j)
              if (reach[k][j]) reach[i][j] = true;
      return reach;
    }

    std::vector<std::pair<PatternVertex, PatternVertex>> closure_pairs(uint32_t n) const
    {
      auto reach = closure(n);
      std::vector<std::pair<PatternVertex, PatternVertex>> pairs;
      for (uint32_t a = 1; a <= n; ++a)
        for (uint32_t b = 1; b <= n; ++b)
          if (reach[a][b]) pairs.emplace_back(a, b);
      return pairs;
    }
  };

  /**
   * All bijections of the pattern onto itself preserving true edges,
   * anti-edges (as a distinct kind) and labels. Anti-vertices can only map
   * to anti-vertices since true degrees must agree. Each entry maps
   * aut[u-1] = image of u.
   */
  inline std::vector<std::vector<PatternVertex>> automorphisms(const Pattern &p)
  {
    const uint32_t n = p.num_vertices();
    std::vector<std::vector<PatternVertex>> result;
    if (n == 0) return result;
    std::vector<PatternVertex> image(n, 0);
    std::vector<bool> used(n + 1, false);

    auto compatible = [&](PatternVertex u, PatternVertex w)
    {
      if (p.neighbours(u).size() != p.neighbours(w).size()) return false;
      if (p.anti_neighbours(u).size() != p.anti_neighbours(w).size()) return false;
      if (p.label(u) != p.label(w)) return false;
      for (PatternVertex x = 1; x < u; ++x)
      {
        if (p.are_connected(u, x) != p.are_connected(w, image[x - 1])) return false;
        if (p.are_anti_adjacent(u, x) != p.are_anti_adjacent(w, image[x - 1])) return false;
      }
      return true;
    };

    auto search = [&](auto &&self, PatternVertex u) -> void
    {
      if (u > n)
      {
        result.push_back(image);
        return;
      }
      for (PatternVertex w = 1; w <= n; ++w)
      {
        if (used[w] || !compatible(u, w)) continue;
        image[u - 1] = w;
        used[w] = true;
        self(self, u + 1);
        used[w] = false;
      }
    };
    search(search, 1);
    return result;
  }

  namespace detail
  {
    inline bool is_unlabelled_clique(const Pattern &p)
    {
      if (p.labelled() || p.num_anti_edges() != 0) return false;
      uint32_t n = p.num_vertices();
      return n >= 2 && p.num_true_edges() == n * (n - 1) / 2;
    }

    // centre + leaves only; 0 if not a star
    inline PatternVertex star_centre(const Pattern &p)
    {
      if (p.labelled() || p.num_anti_edges() != 0) return 0;
      uint32_t n = p.num_vertices();
      if (n < 3 || p.num_true_edges() != n - 1) return 0;
      for (PatternVertex u = 1; u <= n; ++u)
      {
        if (p.neighbours(u).size() == n - 1) return u;
      }
      return 0;
    }

    // orbit partition of the vertex set under a set of permutations
    inline std::vector<std::vector<PatternVertex>>
    orbits(uint32_t n, const std::vector<const std::vector<PatternVertex> *> &perms)
    {
      std::vector<uint32_t> parent(n + 1);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](uint32_t x)
      {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (const auto *perm : perms)
      {
        for (PatternVertex u = 1; u <= n; ++u)
        {
          uint32_t a = find(u), b = find((*perm)[u - 1]);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
      std::vector<std::vector<PatternVertex>> classes(n + 1);
      for (PatternVertex u = 1; u <= n; ++u) classes[find(u)].push_back(u);
      std::vector<std::vector<PatternVertex>> res;
      for (auto &c : classes)
      {
        if (!c.empty()) res.push_back(std::move(c));
      }
      return res;
    }

    inline std::vector<std::pair<PatternVertex, PatternVertex>>
    transitive_reduction(uint32_t n, std::vector<std::pair<PatternVertex, PatternVertex>> pairs)
    {
      PartialOrder tmp{pairs};
      auto reach = tmp.closure(n);
      std::vector<std::pair<PatternVertex, PatternVertex>> kept;
      for (const auto &[a, b] : pairs)
      {
        bool redundant = false;
        for (uint32_t c = 1; c <= n && !redundant; ++c)
        {
          if (c != a && c != b && reach[a][c] && reach[c][b]) redundant = true;
        }
        if (!redundant) kept.emplace_back(a, b);
      }
      std::sort(kept.begin(), kept.end());
      kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
      return kept;
    }
  } // namespace detail

  /**
   * Symmetry breaking: iteratively orders vertices within automorphism
   * orbits until only trivial automorphisms remain. Each round takes the
   * largest orbit (ties to the one with the smallest vertex), orders its
   * smallest vertex before the rest, and restricts to the stabilizer, so
   * every set of automorphic matches has exactly one member satisfying the
   * constraints. Unlabelled cliques get the full chain directly.
   */
  inline PartialOrder break_symmetries(const Pattern &p)
  {
    const uint32_t n = p.num_vertices();
    std::vector<std::pair<PatternVertex, PatternVertex>> constraints;

    if (detail::is_unlabelled_clique(p))
    {
      for (PatternVertex u = 1; u < n; ++u) constraints.emplace_back(u, u + 1);
      return {constraints};
    }
    // stars are the other factorial-symmetry family: chain the leaves
    // directly instead of enumerating the automorphism group
    if (PatternVertex centre = detail::star_centre(p); centre != 0)
    {
      PatternVertex prev = 0;
      for (PatternVertex u = 1; u <= n; ++u)
      {
        if (u == centre) continue;
        if (prev != 0) constraints.emplace_back(prev, u);
        prev = u;
      }
      return {constraints};
    }

    auto auts = automorphisms(p);
    std::vector<const std::vector<PatternVertex> *> active;
    for (const auto &a : auts) active.push_back(&a);

    while (active.size() > 1)
    {
      auto orbit_list = detail::orbits(n, active);
      // only regular vertices can be ordered; anti-vertex orbits never mix
      // with regular ones since true degrees differ
      const std::vector<PatternVertex> *chosen = nullptr;
      for (const auto &orbit : orbit_list)
      {
        if (orbit.size() < 2 || !p.is_regular(orbit.front())) continue;
        if (!chosen || orbit.size() > chosen->size() ||
            (orbit.size() == chosen->size() && orbit.front() < chosen->front()))
        {
          chosen = &orbit;
        }
      }
      if (!chosen) break; // leftover automorphisms only permute anti-vertices

      PatternVertex a = chosen->front();
      for (PatternVertex u : *chosen)
      {
        if (u != a) constraints.emplace_back(a, u);
      }
      std::vector<const std::vector<PatternVertex> *> next;
      for (const auto *perm : active)
      {
        if ((*perm)[a - 1] == a) next.push_back(perm);
      }
      active.swap(next);
    }

    return {detail::transitive_reduction(n, std::move(constraints))};
  }

  /**
   * Minimum connected vertex cover over the regular vertices: every true
   * edge and every anti-edge has an endpoint in the cover (for anti-edges of
   * an anti-vertex that must be the regular endpoint), and the induced
   * true-edge subgraph is connected. Exhaustive by increasing cardinality,
   * lexicographically smallest among minima; a singleton counts as
   * connected.
   */
  inline std::vector<PatternVertex> min_connected_vertex_cover(const Pattern &p)
  {
    const auto regular = p.regular_vertices();
    const auto true_edges = p.true_edges();
    const auto anti_edges = p.anti_edges();

    std::vector<PatternVertex> required;
    for (const auto &[u, v] : anti_edges)
    {
      if (p.is_anti_vertex(u)) required.push_back(v);
      else if (p.is_anti_vertex(v)) required.push_back(u);
    }
    std::sort(required.begin(), required.end());
    required.erase(std::unique(required.begin(), required.end()), required.end());

    auto valid = [&](const std::vector<PatternVertex> &cover)
    {
      std::vector<bool> in(p.num_vertices() + 1, false);
      for (PatternVertex v : cover) in[v] = true;
      for (PatternVertex v : required)
      {
        if (!in[v]) return false;
      }
      for (const auto &[u, v] : true_edges)
      {
        if (!in[u] && !in[v]) return false;
      }
      for (const auto &[u, v] : anti_edges)
      {
        if (p.is_anti_vertex(u) || p.is_anti_vertex(v)) continue; // handled via required
        if (!in[u] && !in[v]) return false;
      }
      // connectivity of the induced true-edge subgraph
      std::vector<PatternVertex> stack = {cover.front()};
      std::vector<bool> seen(p.num_vertices() + 1, false);
      seen[cover.front()] = true;
      size_t reached = 0;
      while (!stack.empty())
      {
        PatternVertex u = stack.back();
        stack.pop_back();
        reached += 1;
        for (PatternVertex w : p.neighbours(u))
        {
          if (in[w] && !seen[w])
          {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
      return reached == cover.size();
    };

    const uint32_t r = static_cast<uint32_t>(regular.size());
    for (uint32_t size = 1; size <= r; ++size)
    {
      // combinations of `regular` in lexicographic order
      std::vector<uint32_t> idx(size);
      std::iota(idx.begin(), idx.end(), 0);
      while (true)
      {
        std::vector<PatternVertex> cover(size);
        for (uint32_t i = 0; i < size; ++i) cover[i] = regular[idx[i]];
        if (valid(cover)) return cover;

        int32_t i = static_cast<int32_t>(size) - 1;
        while (i >= 0 && idx[i] == r - size + i) --i;
        if (i < 0) break;
        idx[i] += 1;
        for (uint32_t j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    throw ValidationError("pattern has no connected vertex cover"); // unreachable for valid patterns
  }

  enum class Traversal
  {
    high_to_low, // start from the highest matching-order position
    low_to_high,
  };

  // One traversal step of a matching order; `position` is a remapped core
  // vertex id (its rank in the total order).
  struct CoreStep
  {
    PatternVertex position;
    std::vector<PatternVertex> true_prev; // earlier steps joined by true edges
    std::vector<PatternVertex> anti_prev; // earlier steps joined by anti-edges
    PatternVertex lower_pos = 0;          // tightest earlier position below, 0 if none
    PatternVertex upper_pos = 0;          // tightest earlier position above, 0 if none
    Label label = kWildcardLabel;
  };

  /**
   * An ordered view of the core: vertex ids remapped to their position in a
   * vertex sequence, matched by strictly increasing data vertex. Sequences
   * producing identical remapped graphs are folded together: the remapped
   * graph is matched once and each fold member converts a remapped match
   * back to a distinct core match.
   */
  struct MatchingOrder
  {
    Pattern remapped_core;
    std::vector<std::vector<PatternVertex>> sequences; // position -> original vertex
    std::vector<CoreStep> steps;                       // traversal over positions
  };

  struct NonCoreVertex
  {
    PatternVertex v;
    Label label = kWildcardLabel;
    std::vector<PatternVertex> true_nbrs;  // all in the core
    std::vector<PatternVertex> anti_nbrs;  // regular anti-neighbours (in the core)
    std::vector<PatternVertex> lower_vs;   // matched-before vertices ordered below v
    std::vector<PatternVertex> upper_vs;   // matched-before vertices ordered above v
  };

  // Emptiness constraint checked after all regular vertices are matched:
  // the common neighbourhood of the anti-vertex's matched neighbours,
  // excluding data vertices already matched to their pattern neighbours,
  // must be empty.
  struct AntiVertexCheck
  {
    PatternVertex anti_vertex;
    Label label = kWildcardLabel;
    std::vector<PatternVertex> nbrs;     // regular vertices anti-adjacent to it
    std::vector<PatternVertex> excluded; // union of true-neighbour sets of nbrs
  };

  struct PlanOptions
  {
    bool symmetry_breaking = true;
    Traversal traversal = Traversal::high_to_low;
  };

  struct ExplorationPlan
  {
    Pattern pattern;
    std::vector<PatternVertex> core_vertices; // sorted original ids
    Pattern core;                             // induced sub-pattern, remapped to 1..k in sorted order
    PartialOrder partial_order;
    std::vector<MatchingOrder> matching_orders;
    std::vector<NonCoreVertex> non_core; // in matching order (ascending id)
    std::vector<AntiVertexCheck> anti_vertex_checks;

    std::string explain() const
    {
      std::ostringstream os;
      os << "pattern: " << pattern.serialize() << "\n";
      os << "core:";
      for (PatternVertex v : core_vertices) os << ' ' << v;
      os << "\n";
      os << "partial-order:";
      for (const auto &[a, b] : partial_order.constraints) os << ' ' << a << '<' << b;
      os << "\n";
      for (const auto &mo : matching_orders)
      {
        os << "matching-order: core=" << mo.remapped_core.serialize() << " seqs=";
        for (size_t i = 0; i < mo.sequences.size(); ++i)
        {
          os << (i ? "," : "") << '(';
          for (size_t j = 0; j < mo.sequences[i].size(); ++j)
            os << (j ? " " : "") << mo.sequences[i][j];
          os << ')';
        }
        os << "\n";
      }
      for (const auto &nc : non_core)
      {
        os << "non-core: " << nc.v << " true=(";
        for (size_t i = 0; i < nc.true_nbrs.size(); ++i) os << (i ? " " : "") << nc.true_nbrs[i];
        os << ") anti=(";
        for (size_t i = 0; i < nc.anti_nbrs.size(); ++i) os << (i ? " " : "") << nc.anti_nbrs[i];
        os << ")\n";
      }
      for (const auto &avc : anti_vertex_checks)
      {
        os << "anti-vertex: " << avc.anti_vertex << " nbrs=(";
        for (size_t i = 0; i < avc.nbrs.size(); ++i) os << (i ? " " : "") << avc.nbrs[i];
        os << ")\n";
      }
      return os.str();
    }
  };

  namespace detail
  {
    inline std::vector<CoreStep> traversal_steps(const Pattern &remapped, Traversal dir)
    {
      const uint32_t k = remapped.num_vertices();
      std::vector<CoreStep> steps;
      std::vector<bool> visited(k + 1, false);
      std::vector<PatternVertex> order;

      PatternVertex start = (dir == Traversal::high_to_low) ? k : 1;
      auto dfs = [&](auto &&self, PatternVertex u) -> void
      {
        visited[u] = true;
        order.push_back(u);
        auto nbrs = remapped.neighbours(u);
        if (dir == Traversal::high_to_low) std::sort(nbrs.begin(), nbrs.end(), std::greater<>());
        for (PatternVertex w : nbrs)
        {
          if (!visited[w]) self(self, w);
        }
      };
      dfs(dfs, start);

      for (size_t i = 0; i < order.size(); ++i)
      {
        CoreStep step;
        step.position = order[i];
        step.label = remapped.label(order[i]);
        for (size_t j = 0; j < i; ++j)
        {
          PatternVertex q = order[j];
          if (remapped.are_connected(order[i], q)) step.true_prev.push_back(q);
          if (remapped.are_anti_adjacent(order[i], q)) step.anti_prev.push_back(q);
          if (q < order[i] && q > step.lower_pos) step.lower_pos = q;
          if (q > order[i] && (step.upper_pos == 0 || q < step.upper_pos)) step.upper_pos = q;
        }
        steps.push_back(std::move(step));
      }
      return steps;
    }
  } // namespace detail

  /**
   * Enumerates all vertex sequences of the cover that satisfy the partial
   * order (by backtracking over linear extensions), remaps each to position
   * ids, and folds sequences with identical remapped graphs into one
   * matching order.
   */
  inline std::vector<MatchingOrder> compute_matching_orders(const Pattern &p,
                                                            const std::vector<PatternVertex> &cover,
                                                            const PartialOrder &po,
                                                            Traversal dir = Traversal::high_to_low)
  {
    const uint32_t n = p.num_vertices();
    const uint32_t k = static_cast<uint32_t>(cover.size());
    auto reach = po.closure(n);

    std::vector<MatchingOrder> orders;
    std::map<std::vector<uint32_t>, size_t> by_key;

    std::vector<PatternVertex> seq;
    std::vector<bool> placed(n + 1, false);
    std::vector<PatternVertex> pos_of(n + 1, 0);
    auto emit = [&]()
    {
      for (uint32_t i = 0; i < k; ++i) pos_of[seq[i]] = i + 1;

      // exact numeric key of the remapped graph; the Pattern itself is only
      // materialized for new keys
      std::vector<uint32_t> key;
      key.reserve(2 * k + p.num_true_edges() + p.num_anti_edges());
      for (uint32_t i = 0; i < k; ++i)
      {
        for (PatternVertex w : p.neighbours(seq[i]))
        {
          if (pos_of[w] > i + 1) key.push_back(((i + 1) << 16) | pos_of[w]);
        }
      }
      std::sort(key.begin(), key.end());
      key.push_back(std::numeric_limits<uint32_t>::max());
      size_t anti_start = key.size();
      for (uint32_t i = 0; i < k; ++i)
      {
        for (PatternVertex w : p.anti_neighbours(seq[i]))
        {
          if (pos_of[w] > i + 1) key.push_back(((i + 1) << 16) | pos_of[w]);
        }
      }
      std::sort(key.begin() + anti_start, key.end());
      if (p.labelled())
      {
        for (uint32_t i = 0; i < k; ++i) key.push_back(p.label(seq[i]));
      }

      auto [it, fresh] = by_key.emplace(std::move(key), orders.size());
      if (fresh)
      {
        Pattern remapped(k);
        for (uint32_t i = 0; i < k; ++i)
        {
          for (PatternVertex w : p.neighbours(seq[i]))
          {
            if (pos_of[w] > i + 1) remapped.add_edge(i + 1, pos_of[w]);
          }
          for (PatternVertex w : p.anti_neighbours(seq[i]))
          {
            if (pos_of[w] > i + 1) remapped.add_anti_edge(i + 1, pos_of[w]);
          }
        }
        if (p.labelled())
        {
          for (uint32_t i = 0; i < k; ++i) remapped.set_label(i + 1, p.label(seq[i]));
        }
        MatchingOrder mo;
        mo.steps = detail::traversal_steps(remapped, dir);
        mo.remapped_core = std::move(remapped);
        mo.sequences.push_back(seq);
        orders.push_back(std::move(mo));
      }
      else
      {
        orders[it->second].sequences.push_back(seq);
      }
      for (uint32_t i = 0; i < k; ++i) pos_of[seq[i]] = 0;
    };

    auto extendable = [&](PatternVertex v)
    {
      for (PatternVertex u : cover)
      {
        if (!placed[u] && u != v && reach[u][v]) return false; // unplaced predecessor
      }
      return true;
    };

    auto rec = [&](auto &&self) -> void
    {
      if (seq.size() == k)
      {
        emit();
        return;
      }
      for (PatternVertex v : cover)
      {
        if (placed[v] || !extendable(v)) continue;
        placed[v] = true;
        seq.push_back(v);
        self(self);
        seq.pop_back();
        placed[v] = false;
      }
    };
    rec(rec);
    return orders;
  }

  inline ExplorationPlan generate_plan(const Pattern &p, const PlanOptions &opts = {})
  {
    p.validate();

    ExplorationPlan plan;
    plan.pattern = p;
    plan.partial_order = opts.symmetry_breaking ? break_symmetries(p) : PartialOrder{};
    plan.core_vertices = min_connected_vertex_cover(p);

    const uint32_t n = p.num_vertices();
    const uint32_t k = static_cast<uint32_t>(plan.core_vertices.size());
    std::vector<bool> in_core(n + 1, false);
    for (PatternVertex v : plan.core_vertices) in_core[v] = true;

    // induced core, remapped to 1..k in sorted cover order
    {
      Pattern core(k);
      std::vector<PatternVertex> pos(n + 1, 0);
      for (uint32_t i = 0; i < k; ++i) pos[plan.core_vertices[i]] = i + 1;
      for (uint32_t i = 0; i < k; ++i)
      {
        PatternVertex u = plan.core_vertices[i];
        for (PatternVertex w : p.neighbours(u))
        {
          if (pos[w] > i + 1) core.add_edge(i + 1, pos[w]);
        }
        for (PatternVertex w : p.anti_neighbours(u))
        {
          if (pos[w] > i + 1) core.add_anti_edge(i + 1, pos[w]);
        }
        if (p.labelled()) core.set_label(i + 1, p.label(u));
      }
      plan.core = std::move(core);
    }

    plan.matching_orders = compute_matching_orders(p, plan.core_vertices, plan.partial_order, opts.traversal);

    auto reach = plan.partial_order.closure(n);
    std::vector<bool> matched_before(n + 1, false);
    for (PatternVertex v : plan.core_vertices) matched_before[v] = true;

    for (PatternVertex v = 1; v <= n; ++v)
    {
      if (in_core[v] || !p.is_regular(v)) continue;
      NonCoreVertex nc;
      nc.v = v;
      nc.label = p.label(v);
      for (PatternVertex w : p.neighbours(v)) nc.true_nbrs.push_back(w);
      for (PatternVertex w : p.anti_neighbours(v))
      {
        if (p.is_regular(w)) nc.anti_nbrs.push_back(w);
      }
      for (PatternVertex u = 1; u <= n; ++u)
      {
        if (u == v || !matched_before[u]) continue;
        if (reach[u][v]) nc.lower_vs.push_back(u);
        if (reach[v][u]) nc.upper_vs.push_back(u);
      }
      matched_before[v] = true;
      plan.non_core.push_back(std::move(nc));
    }

    for (PatternVertex av : p.anti_vertices())
    {
      AntiVertexCheck check;
      check.anti_vertex = av;
      check.label = p.label(av);
      check.nbrs = p.anti_neighbours(av);
      for (PatternVertex u : check.nbrs)
      {
        for (PatternVertex w : p.neighbours(u)) check.excluded.push_back(w);
      }
      std::sort(check.excluded.begin(), check.excluded.end());
      check.excluded.erase(std::unique(check.excluded.begin(), check.excluded.end()), check.excluded.end());
      plan.anti_vertex_checks.push_back(std::move(check));
    }

    return plan;
  }
} // namespace patmine

#endif
