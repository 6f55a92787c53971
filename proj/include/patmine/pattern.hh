#ifndef PATMINE_PATTERN_HH
#define PATMINE_PATTERN_HH

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hh"

namespace patmine
{
  using PatternVertex = uint32_t; // 1-based, contiguous
  using Label = uint32_t;

  inline constexpr Label kWildcardLabel = std::numeric_limits<Label>::max();

  /**
   * A small query graph: true edges, anti-edges (required disconnections) and
   * optional vertex labels. A vertex incident only to anti-edges is an
   * anti-vertex; everything else with at least one true edge is regular.
   *
   * Immutable once handed to the planner; the builder-style mutators are for
   * single-threaded construction.
   */
  class Pattern
  {
  public:
    Pattern() = default;

    explicit Pattern(uint32_t num_vertices)
      : true_adj_(num_vertices), anti_adj_(num_vertices)
    {
    }

    Pattern(std::initializer_list<std::pair<uint32_t, uint32_t>> edges)
    {
      for (const auto &[u, v] : edges)
      {
        grow_to(std::max(u, v));
      }
      for (const auto &[u, v] : edges)
      {
        add_edge(u, v);
      }
    }

    uint32_t num_vertices() const { return static_cast<uint32_t>(true_adj_.size()); }

    uint32_t num_true_edges() const
    {
      size_t c = 0;
      for (const auto &nbrs : true_adj_) c += nbrs.size();
      return static_cast<uint32_t>(c / 2);
    }

    uint32_t num_anti_edges() const
    {
      size_t c = 0;
      for (const auto &nbrs : anti_adj_) c += nbrs.size();
      return static_cast<uint32_t>(c / 2);
    }

    const std::vector<PatternVertex> &neighbours(PatternVertex u) const
    {
      check_vertex(u);
      return true_adj_[u - 1];
    }

    const std::vector<PatternVertex> &anti_neighbours(PatternVertex u) const
    {
      check_vertex(u);
      return anti_adj_[u - 1];
    }

    bool are_connected(PatternVertex u, PatternVertex v) const
    {
      check_vertex(u);
      check_vertex(v);
      return std::binary_search(true_adj_[u - 1].begin(), true_adj_[u - 1].end(), v);
    }

    bool are_anti_adjacent(PatternVertex u, PatternVertex v) const
    {
      check_vertex(u);
      check_vertex(v);
      return std::binary_search(anti_adj_[u - 1].begin(), anti_adj_[u - 1].end(), v);
    }

    Label label(PatternVertex u) const
    {
      check_vertex(u);
      return labels_.empty() ? kWildcardLabel : labels_[u - 1];
    }

    bool labelled() const { return !labels_.empty(); }

    const std::vector<Label> &labels() const { return labels_; }

    bool is_anti_vertex(PatternVertex u) const
    {
      check_vertex(u);
      return true_adj_[u - 1].empty() && !anti_adj_[u - 1].empty();
    }

    bool is_regular(PatternVertex u) const
    {
      check_vertex(u);
      return !true_adj_[u - 1].empty();
    }

    std::vector<PatternVertex> regular_vertices() const
    {
      std::vector<PatternVertex> vs;
      for (PatternVertex u = 1; u <= num_vertices(); ++u)
      {
        if (is_regular(u)) vs.push_back(u);
      }
      return vs;
    }

    std::vector<PatternVertex> anti_vertices() const
    {
      std::vector<PatternVertex> vs;
      for (PatternVertex u = 1; u <= num_vertices(); ++u)
      {
        if (is_anti_vertex(u)) vs.push_back(u);
      }
      return vs;
    }

    std::vector<std::pair<PatternVertex, PatternVertex>> true_edges() const
    {
      return edge_list(true_adj_);
    }

    std::vector<std::pair<PatternVertex, PatternVertex>> anti_edges() const
    {
      return edge_list(anti_adj_);
    }

    // Mutators. A referenced vertex must exist or be num_vertices()+1, which
    // appends a fresh vertex.
    Pattern &add_edge(PatternVertex u, PatternVertex v)
    {
      check_edit(u, v);
      if (are_connected(u, v))
        throw ConstraintConflictError("duplicate true edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      if (are_anti_adjacent(u, v))
        throw ConstraintConflictError("true edge (" + std::to_string(u) + "," + std::to_string(v) + ") conflicts with anti-edge");
      insert_sorted(true_adj_[u - 1], v);
      insert_sorted(true_adj_[v - 1], u);
      return *this;
    }

    Pattern &add_anti_edge(PatternVertex u, PatternVertex v)
    {
      check_edit(u, v);
      if (are_anti_adjacent(u, v))
        throw ConstraintConflictError("duplicate anti-edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      if (are_connected(u, v))
        throw ConstraintConflictError("anti-edge (" + std::to_string(u) + "," + std::to_string(v) + ") conflicts with true edge");
      insert_sorted(anti_adj_[u - 1], v);
      insert_sorted(anti_adj_[v - 1], u);
      return *this;
    }

    // Removes whichever kind of edge joins u and v. Vertices are never
    // deleted, so the pattern may be left with isolated vertices or a
    // disconnected regular subgraph; that is caught at plan time.
    Pattern &remove_edge(PatternVertex u, PatternVertex v)
    {
      check_vertex(u);
      check_vertex(v);
      if (are_connected(u, v))
      {
        std::erase(true_adj_[u - 1], v);
        std::erase(true_adj_[v - 1], u);
      }
      else if (are_anti_adjacent(u, v))
      {
        std::erase(anti_adj_[u - 1], v);
        std::erase(anti_adj_[v - 1], u);
      }
      else
      {
        throw ConstraintConflictError("no edge (" + std::to_string(u) + "," + std::to_string(v) + ") to remove");
      }
      return *this;
    }

    Pattern &set_label(PatternVertex u, Label l)
    {
      if (u == 0 || u > num_vertices() + 1)
        throw ConstraintConflictError("label references unknown vertex " + std::to_string(u));
      grow_to(u);
      if (labels_.empty()) labels_.assign(num_vertices(), kWildcardLabel);
      labels_[u - 1] = l;
      return *this;
    }

    bool regular_subgraph_connected() const
    {
      auto regular = regular_vertices();
      if (regular.empty()) return false;
      std::vector<bool> seen(num_vertices() + 1, false);
      std::queue<PatternVertex> q;
      q.push(regular.front());
      seen[regular.front()] = true;
      size_t reached = 0;
      while (!q.empty())
      {
        PatternVertex u = q.front();
        q.pop();
        reached += 1;
        for (PatternVertex v : true_adj_[u - 1])
        {
          if (!seen[v])
          {
            seen[v] = true;
            q.push(v);
          }
        }
      }
      return reached == regular.size();
    }

    /**
     * Structural validity beyond per-edit checks: at least one true edge, no
     * isolated vertices, connected regular subgraph, and no anti-edge joining
     * two anti-vertices (such a pattern can never be matched).
     */
    void validate() const
    {
      if (num_true_edges() == 0)
        throw ValidationError("pattern has no true edges");
      for (PatternVertex u = 1; u <= num_vertices(); ++u)
      {
        if (true_adj_[u - 1].empty() && anti_adj_[u - 1].empty())
          throw ValidationError("vertex " + std::to_string(u) + " is isolated");
        if (is_anti_vertex(u))
        {
          for (PatternVertex v : anti_adj_[u - 1])
          {
            if (is_anti_vertex(v))
              throw ValidationError("anti-vertices " + std::to_string(u) + " and " + std::to_string(v) +
                                    " are anti-adjacent; no match can exist");
          }
        }
      }
      if (!regular_subgraph_connected())
        throw ValidationError("regular subgraph is not connected");
    }

    // perm[old-1] = new id; must be a bijection on 1..n.
    Pattern permuted(const std::vector<PatternVertex> &perm) const
    {
      Pattern out(num_vertices());
      for (const auto &[u, v] : true_edges()) out.add_edge(perm[u - 1], perm[v - 1]);
      for (const auto &[u, v] : anti_edges()) out.add_anti_edge(perm[u - 1], perm[v - 1]);
      if (labelled())
      {
        for (PatternVertex u = 1; u <= num_vertices(); ++u) out.set_label(perm[u - 1], labels_[u - 1]);
      }
      return out;
    }

    /**
     * Exact, position-sensitive serialization: "<n>:<true>:<anti>:<labels>".
     * Equal strings iff equal vertex-by-vertex. Parseable via parse_code().
     */
    std::string serialize() const
    {
      std::ostringstream os;
      os << num_vertices() << ':';
      bool first = true;
      for (const auto &[u, v] : true_edges())
      {
        if (!first) os << ',';
        os << u << '-' << v;
        first = false;
      }
      os << ':';
      first = true;
      for (const auto &[u, v] : anti_edges())
      {
        if (!first) os << ',';
        os << u << '~' << v;
        first = false;
      }
      os << ':';
      if (labelled())
      {
        for (PatternVertex u = 1; u <= num_vertices(); ++u)
        {
          if (u > 1) os << ',';
          if (labels_[u - 1] == kWildcardLabel) os << '*';
          else os << labels_[u - 1];
        }
      }
      return os.str();
    }

    std::string to_string() const
    {
      std::string res;
      for (const auto &[u, v] : true_edges())
      {
        res += "[" + vertex_str(u) + "-" + vertex_str(v) + "]";
      }
      for (const auto &[u, v] : anti_edges())
      {
        res += "(" + vertex_str(u) + "~" + vertex_str(v) + ")";
      }
      return res;
    }

    struct CanonicalForm
    {
      std::string code;
      std::vector<PatternVertex> perm; // perm[old-1] = canonical id
    };

    /**
     * Canonical form by minimizing the serialization over vertex
     * permutations: two patterns get the same code iff they are isomorphic
     * respecting edge kinds and labels. Permutations are restricted to
     * isomorphism-invariant vertex classes, which prunes the search without
     * changing the result.
     */
    CanonicalForm canonical_form() const
    {
      const uint32_t n = num_vertices();
      if (n == 0) return {serialize(), {}};

      // class key: label, degrees, sorted neighbour degree profiles
      std::vector<std::vector<uint32_t>> keys(n);
      for (uint32_t i = 0; i < n; ++i)
      {
        auto &key = keys[i];
        key.push_back(label(i + 1));
        key.push_back(static_cast<uint32_t>(true_adj_[i].size()));
        key.push_back(static_cast<uint32_t>(anti_adj_[i].size()));
        std::vector<uint32_t> profile;
        for (PatternVertex v : true_adj_[i])
          profile.push_back((static_cast<uint32_t>(true_adj_[v - 1].size()) << 8) | (label(v) & 0xff));
        std::sort(profile.begin(), profile.end());
        key.insert(key.end(), profile.begin(), profile.end());
        key.push_back(std::numeric_limits<uint32_t>::max());
        profile.clear();
        for (PatternVertex v : anti_adj_[i])
          profile.push_back((static_cast<uint32_t>(true_adj_[v - 1].size()) << 8) | (label(v) & 0xff));
        std::sort(profile.begin(), profile.end());
        key.insert(key.end(), profile.begin(), profile.end());
      }

      // order classes, then assign position blocks
      std::vector<uint32_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b)
      {
        return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
      });

      std::vector<std::pair<uint32_t, uint32_t>> blocks; // [start, end) in `order`
      for (uint32_t i = 0; i < n;)
      {
        uint32_t j = i + 1;
        while (j < n && keys[order[j]] == keys[order[i]]) ++j;
        blocks.emplace_back(i, j);
        i = j;
      }

      std::vector<PatternVertex> perm(n), best_perm;
      std::vector<uint32_t> best;
      auto consider = [&]()
      {
        std::vector<uint32_t> word = serialize_with(perm);
        if (best.empty() || word < best)
        {
          best = std::move(word);
          best_perm = perm;
        }
      };

      // odometer over per-block permutations
      std::vector<std::vector<uint32_t>> block_orders;
      for (const auto &[s, e] : blocks)
        block_orders.emplace_back(order.begin() + s, order.begin() + e);
      for (auto &b : block_orders) std::sort(b.begin(), b.end());

      size_t nblocks = blocks.size();
      std::vector<bool> done(nblocks, false);
      while (true)
      {
        uint32_t pos = 1;
        for (size_t b = 0; b < nblocks; ++b)
        {
          for (uint32_t old : block_orders[b]) perm[old] = pos++;
        }
        consider();

        size_t b = 0;
        while (b < nblocks && !std::next_permutation(block_orders[b].begin(), block_orders[b].end())) ++b;
        if (b == nblocks) break;
      }

      return {code_string(best), best_perm};
    }

    std::string canonical_code() const { return canonical_form().code; }

    bool operator==(const Pattern &other) const
    {
      return true_adj_ == other.true_adj_ && anti_adj_ == other.anti_adj_ && labels_ == other.labels_;
    }

  private:
    std::vector<std::vector<PatternVertex>> true_adj_; // 0-indexed, sorted
    std::vector<std::vector<PatternVertex>> anti_adj_;
    std::vector<Label> labels_; // empty means unlabelled

    void grow_to(uint32_t n)
    {
      if (n > true_adj_.size())
      {
        true_adj_.resize(n);
        anti_adj_.resize(n);
        if (!labels_.empty()) labels_.resize(n, kWildcardLabel);
      }
    }

    void check_vertex(PatternVertex u) const
    {
      if (u == 0 || u > num_vertices())
        throw ConstraintConflictError("unknown pattern vertex " + std::to_string(u));
    }

    void check_edit(PatternVertex u, PatternVertex v)
    {
      if (u == v) throw ConstraintConflictError("self loop on vertex " + std::to_string(u));
      uint32_t n = num_vertices();
      if (u == 0 || v == 0 || u > n + 1 || v > n + 1)
        throw ConstraintConflictError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                      ") references a vertex beyond the next fresh id");
      grow_to(std::max(u, v));
    }

    static void insert_sorted(std::vector<PatternVertex> &list, PatternVertex v)
    {
      list.insert(std::upper_bound(list.begin(), list.end(), v), v);
    }

    std::string vertex_str(PatternVertex u) const
    {
      if (!labelled() || label(u) == kWildcardLabel) return std::to_string(u);
      return std::to_string(u) + "," + std::to_string(label(u));
    }

    static std::vector<std::pair<PatternVertex, PatternVertex>>
    edge_list(const std::vector<std::vector<PatternVertex>> &adj)
    {
      std::vector<std::pair<PatternVertex, PatternVertex>> edges;
      for (uint32_t i = 0; i < adj.size(); ++i)
      {
        for (PatternVertex v : adj[i])
        {
          if (i + 1 < v) edges.emplace_back(i + 1, v);
        }
      }
      std::sort(edges.begin(), edges.end());
      return edges;
    }

    // numeric image of serialize() under perm, for cheap comparisons
    std::vector<uint32_t> serialize_with(const std::vector<PatternVertex> &perm) const
    {
      const uint32_t n = num_vertices();
      std::vector<uint32_t> word;
      word.push_back(n);
      std::vector<uint32_t> edges;
      for (const auto &[u, v] : true_edges())
      {
        uint32_t a = perm[u - 1], b = perm[v - 1];
        if (a > b) std::swap(a, b);
        edges.push_back((a << 16) | b);
      }
      std::sort(edges.begin(), edges.end());
      word.insert(word.end(), edges.begin(), edges.end());
      word.push_back(std::numeric_limits<uint32_t>::max());
      edges.clear();
      for (const auto &[u, v] : anti_edges())
      {
        uint32_t a = perm[u - 1], b = perm[v - 1];
        if (a > b) std::swap(a, b);
        edges.push_back((a << 16) | b);
      }
      std::sort(edges.begin(), edges.end());
      word.insert(word.end(), edges.begin(), edges.end());
      word.push_back(std::numeric_limits<uint32_t>::max());
      if (labelled())
      {
        std::vector<uint32_t> labs(n);
        for (uint32_t u = 1; u <= n; ++u) labs[perm[u - 1] - 1] = labels_[u - 1];
        word.insert(word.end(), labs.begin(), labs.end());
      }
      return word;
    }

    std::string code_string(const std::vector<uint32_t> &word) const
    {
      const uint32_t n = word[0];
      std::ostringstream os;
      os << n << ':';
      size_t i = 1;
      bool first = true;
      for (; word[i] != std::numeric_limits<uint32_t>::max(); ++i)
      {
        if (!first) os << ',';
        os << (word[i] >> 16) << '-' << (word[i] & 0xffff);
        first = false;
      }
      os << ':';
      first = true;
      for (++i; word[i] != std::numeric_limits<uint32_t>::max(); ++i)
      {
        if (!first) os << ',';
        os << (word[i] >> 16) << '~' << (word[i] & 0xffff);
        first = false;
      }
      os << ':';
      if (++i < word.size())
      {
        first = true;
        for (; i < word.size(); ++i)
        {
          if (!first) os << ',';
          if (word[i] == kWildcardLabel) os << '*';
          else os << word[i];
          first = false;
        }
      }
      return os.str();
    }
  };

  // Rebuilds a pattern from serialize()/canonical_code() output.
  inline Pattern parse_code(const std::string &code)
  {
    auto fail = [&]() { return IngestionError("malformed pattern code '" + code + "'"); };
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t i = 0; i <= code.size(); ++i)
    {
      if (i == code.size() || code[i] == ':')
      {
        parts.push_back(code.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.size() != 4) throw fail();

    Pattern p(static_cast<uint32_t>(std::stoul(parts[0])));
    auto each = [](const std::string &s, auto &&f)
    {
      size_t start = 0;
      for (size_t i = 0; i <= s.size(); ++i)
      {
        if (i == s.size() || s[i] == ',')
        {
          if (i > start) f(s.substr(start, i - start));
          start = i + 1;
        }
      }
    };
    each(parts[1], [&](const std::string &e)
    {
      size_t d = e.find('-');
      if (d == std::string::npos) throw fail();
      p.add_edge(std::stoul(e.substr(0, d)), std::stoul(e.substr(d + 1)));
    });
    each(parts[2], [&](const std::string &e)
    {
      size_t d = e.find('~');
      if (d == std::string::npos) throw fail();
      p.add_anti_edge(std::stoul(e.substr(0, d)), std::stoul(e.substr(d + 1)));
    });
    uint32_t u = 1;
    each(parts[3], [&](const std::string &l)
    {
      p.set_label(u, l == "*" ? kWildcardLabel : static_cast<Label>(std::stoul(l)));
      u += 1;
    });
    return p;
  }
} // namespace patmine

#endif
