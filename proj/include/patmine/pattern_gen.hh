#ifndef PATMINE_PATTERN_GEN_HH
#define PATMINE_PATTERN_GEN_HH

#include <map>
#include <string>
#include <vector>

#include "pattern.hh"

namespace patmine
{
  // Generator caps: canonicalization is permutation-based, so keep the
  // factorial work bounded.
  inline constexpr uint32_t kMaxGeneratedVertices = 6;
  inline constexpr uint32_t kMaxGeneratedEdges = 8;

  enum class ExtendMode
  {
    by_edge,   // close a cycle between existing vertices, or attach a fresh vertex
    by_vertex, // attach a fresh vertex with one edge
  };

  namespace detail
  {
    inline void dedupe_insert(std::map<std::string, Pattern> &out, const Pattern &p)
    {
      out.emplace(p.canonical_code(), p);
    }
  } // namespace detail

  /**
   * All unique patterns obtained from the inputs by adding one true edge.
   * by_edge adds edges both between existing regular vertices and to one
   * fresh (wildcard-labelled) vertex; by_vertex only attaches fresh vertices.
   * Anti-vertices are left untouched. Output is deduplicated up to
   * isomorphism, labels respected.
   */
  inline std::vector<Pattern> extend(const std::vector<Pattern> &patterns, ExtendMode mode)
  {
    std::map<std::string, Pattern> out;
    for (const Pattern &p : patterns)
    {
      p.validate();
      auto regular = p.regular_vertices();
      if (mode == ExtendMode::by_edge)
      {
        for (size_t i = 0; i < regular.size(); ++i)
        {
          for (size_t j = i + 1; j < regular.size(); ++j)
          {
            PatternVertex u = regular[i], v = regular[j];
            if (p.are_connected(u, v) || p.are_anti_adjacent(u, v)) continue;
            Pattern q(p);
            q.add_edge(u, v);
            detail::dedupe_insert(out, q);
          }
        }
      }
      for (PatternVertex u : regular)
      {
        Pattern q(p);
        PatternVertex fresh = q.num_vertices() + 1;
        q.add_edge(u, fresh);
        if (q.labelled()) q.set_label(fresh, kWildcardLabel);
        detail::dedupe_insert(out, q);
      }
    }
    std::vector<Pattern> res;
    for (auto &[code, p] : out) res.push_back(std::move(p));
    return res;
  }

  // All connected unlabelled patterns with exactly `size` true edges, unique
  // up to isomorphism. Grown one edge at a time from the single edge.
  inline std::vector<Pattern> generate_all_edge_induced(uint32_t size)
  {
    if (size < 1 || size > kMaxGeneratedEdges)
      throw UnsupportedSizeError("edge-induced generator supports 1.." +
                                 std::to_string(kMaxGeneratedEdges) + " edges");
    std::vector<Pattern> level = {Pattern{{1, 2}}};
    for (uint32_t k = 1; k < size; ++k)
    {
      level = extend(level, ExtendMode::by_edge);
    }
    return level;
  }

  // All connected unlabelled graphs on `size` vertices, unique up to
  // isomorphism. Exhaustive over edge subsets; size is capped.
  inline std::vector<Pattern> generate_all_vertex_induced(uint32_t size)
  {
    if (size < 2 || size > kMaxGeneratedVertices)
      throw UnsupportedSizeError("vertex-induced generator supports 2.." +
                                 std::to_string(kMaxGeneratedVertices) + " vertices");
    std::vector<std::pair<PatternVertex, PatternVertex>> slots;
    for (PatternVertex u = 1; u <= size; ++u)
      for (PatternVertex v = u + 1; v <= size; ++v) slots.emplace_back(u, v);

    std::map<std::string, Pattern> out;
    for (uint64_t mask = 1; mask < (1ull << slots.size()); ++mask)
    {
      Pattern p(size);
      for (size_t i = 0; i < slots.size(); ++i)
      {
        if (mask & (1ull << i)) p.add_edge(slots[i].first, slots[i].second);
      }
      if (p.regular_vertices().size() != size || !p.regular_subgraph_connected()) continue;
      detail::dedupe_insert(out, p);
    }
    std::vector<Pattern> res;
    for (auto &[code, p] : out) res.push_back(std::move(p));
    return res;
  }

  inline Pattern generate_clique(uint32_t size)
  {
    if (size < 2) throw UnsupportedSizeError("clique needs at least 2 vertices");
    Pattern p(size);
    for (PatternVertex u = 1; u <= size; ++u)
      for (PatternVertex v = u + 1; v <= size; ++v) p.add_edge(u, v);
    return p;
  }

  // One centre (vertex 1) and size-1 leaves; star(3) is the wedge.
  inline Pattern generate_star(uint32_t size)
  {
    if (size < 2) throw UnsupportedSizeError("star needs at least 2 vertices");
    Pattern p(size);
    for (PatternVertex v = 2; v <= size; ++v) p.add_edge(1, v);
    return p;
  }

  inline Pattern generate_chain(uint32_t size)
  {
    if (size < 2) throw UnsupportedSizeError("chain needs at least 2 vertices");
    Pattern p(size);
    for (PatternVertex v = 1; v < size; ++v) p.add_edge(v, v + 1);
    return p;
  }

  /**
   * The edge-induced equivalent of vertex-induced matching: every pair of
   * regular vertices that is neither adjacent nor anti-adjacent becomes
   * anti-adjacent. Idempotent; anti-vertices are untouched.
   */
  inline Pattern to_vertex_induced_equivalent(const Pattern &p)
  {
    Pattern out(p);
    auto regular = p.regular_vertices();
    for (size_t i = 0; i < regular.size(); ++i)
    {
      for (size_t j = i + 1; j < regular.size(); ++j)
      {
        PatternVertex u = regular[i], v = regular[j];
        if (!out.are_connected(u, v) && !out.are_anti_adjacent(u, v)) out.add_anti_edge(u, v);
      }
    }
    return out;
  }

  /**
   * Text pattern format, one edge per line:
   *   u v         true edge
   *   u !v        anti-edge
   *   #label u l  vertex label
   * Lines starting with '#' (other than #label) are comments; a blank line
   * separates patterns.
   */
  inline std::vector<Pattern> parse_patterns(std::istream &in)
  {
    enum class Item
    {
      edge,
      anti_edge,
      label
    };
    struct Line
    {
      Item item;
      uint32_t a, b;
      size_t lineno;
    };

    std::vector<Pattern> patterns;
    std::vector<Line> block;
    uint32_t max_vertex = 0;

    auto flush = [&]()
    {
      if (block.empty()) return;
      Pattern p(max_vertex);
      for (const Line &l : block)
      {
        try
        {
          switch (l.item)
          {
            case Item::edge: p.add_edge(l.a, l.b); break;
            case Item::anti_edge: p.add_anti_edge(l.a, l.b); break;
            case Item::label: p.set_label(l.a, l.b); break;
          }
        }
        catch (const std::exception &e)
        {
          throw IngestionError(std::string("bad pattern line: ") + e.what(), l.lineno);
        }
      }
      patterns.push_back(std::move(p));
      block.clear();
      max_vertex = 0;
    };

    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line))
    {
      lineno += 1;
      std::istringstream ss(line);
      std::string tok;
      if (!(ss >> tok))
      {
        flush();
        continue;
      }
      try
      {
        if (tok == "#label")
        {
          unsigned long u, l;
          if (!(ss >> u >> l)) throw IngestionError("expected '#label u l'", lineno);
          block.push_back({Item::label, static_cast<uint32_t>(u), static_cast<uint32_t>(l), lineno});
          max_vertex = std::max<uint32_t>(max_vertex, u);
        }
        else if (tok[0] == '#')
        {
          continue;
        }
        else
        {
          std::string second;
          if (!(ss >> second)) throw IngestionError("expected 'u v' or 'u !v'", lineno);
          unsigned long u = std::stoul(tok);
          bool anti = second[0] == '!';
          unsigned long v = std::stoul(anti ? second.substr(1) : second);
          block.push_back({anti ? Item::anti_edge : Item::edge,
                           static_cast<uint32_t>(u), static_cast<uint32_t>(v), lineno});
          max_vertex = std::max<uint32_t>(max_vertex, std::max(u, v));
        }
      }
      catch (const IngestionError &)
      {
        throw;
      }
      catch (const std::exception &e)
      {
        throw IngestionError(std::string("bad pattern line: ") + e.what(), lineno);
      }
    }
    flush();
    return patterns;
  }

  inline std::vector<Pattern> load_patterns(const std::string &path)
  {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open pattern file '" + path + "'");
    auto patterns = parse_patterns(in);
    if (patterns.empty()) throw IngestionError("no patterns in '" + path + "'");
    return patterns;
  }
} // namespace patmine

#endif
