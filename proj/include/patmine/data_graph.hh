#ifndef PATMINE_DATA_GRAPH_HH
#define PATMINE_DATA_GRAPH_HH

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hh"
#include "pattern.hh"

namespace patmine
{
  using DataVertex = uint32_t; // internal id, 0-based, degree-ordered

  // Exclusive range restriction on internal vertex ids, applied to sorted
  // candidate lists by binary search.
  struct Bounds
  {
    std::optional<DataVertex> lower; // keep > lower
    std::optional<DataVertex> upper; // keep < upper

    std::span<const DataVertex> clamp(std::span<const DataVertex> list) const
    {
      auto first = list.begin(), last = list.end();
      if (lower) first = std::upper_bound(first, last, *lower);
      if (upper) last = std::lower_bound(first, last, *upper);
      return {first, last};
    }
  };

  inline void intersect_into(std::vector<DataVertex> &out,
                             std::span<const DataVertex> a, std::span<const DataVertex> b)
  {
    out.clear();
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  }

  inline void difference_into(std::vector<DataVertex> &out,
                              std::span<const DataVertex> a, std::span<const DataVertex> b)
  {
    out.clear();
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  }

  enum class SetOp
  {
    intersect,
    difference, // left fold: first list minus each of the rest
  };

  inline std::vector<DataVertex> ordered_set_op(SetOp op,
                                                const std::vector<std::span<const DataVertex>> &lists,
                                                Bounds bounds = {})
  {
    if (lists.empty()) return {};
    std::vector<DataVertex> acc(lists[0].begin(), lists[0].end());
    std::vector<DataVertex> tmp;
    for (size_t i = 1; i < lists.size(); ++i)
    {
      tmp.swap(acc);
      if (op == SetOp::intersect) intersect_into(acc, tmp, lists[i]);
      else difference_into(acc, tmp, lists[i]);
    }
    auto range = bounds.clamp(acc);
    return {range.begin(), range.end()};
  }

  /**
   * The input graph: undirected, deduplicated, self-loop free, with sorted
   * adjacency lists. Internal ids are degree-ordered so that u < v implies
   * degree(u) <= degree(v); original ids are kept for reporting. Immutable
   * after construction and safe for concurrent reads.
   */
  class DataGraph
  {
  public:
    DataGraph() = default;

    DataGraph(const std::vector<std::pair<uint64_t, uint64_t>> &edges,
              const std::vector<std::pair<uint64_t, Label>> &labels = {})
    {
      build(edges);
      if (!labels.empty())
      {
        labels_.assign(vertex_count(), 0);
        for (const auto &[orig, l] : labels)
        {
          auto it = id_map_.find(orig);
          if (it == id_map_.end())
            throw IngestionError("label for unknown vertex " + std::to_string(orig));
          labels_[it->second] = l;
        }
      }
    }

    static DataGraph load_edge_list(const std::string &edge_path, const std::string &label_path = "")
    {
      std::ifstream in(edge_path);
      if (!in) throw IngestionError("cannot open edge list '" + edge_path + "'");
      std::vector<std::pair<uint64_t, uint64_t>> edges;
      std::string line;
      size_t lineno = 0;
      while (std::getline(in, line))
      {
        lineno += 1;
        std::istringstream ss(line);
        std::string a, b;
        if (!(ss >> a)) continue;
        if (a[0] == '#') continue;
        if (!(ss >> b)) throw IngestionError("expected two vertex ids", lineno);
        edges.emplace_back(parse_id(a, lineno), parse_id(b, lineno));
      }

      DataGraph g;
      g.build(edges);

      if (!label_path.empty())
      {
        std::ifstream lin(label_path);
        if (!lin) throw IngestionError("cannot open label file '" + label_path + "'");
        g.labels_.assign(g.vertex_count(), 0);
        lineno = 0;
        while (std::getline(lin, line))
        {
          lineno += 1;
          std::istringstream ss(line);
          std::string a, b;
          if (!(ss >> a)) continue;
          if (a[0] == '#') continue;
          if (!(ss >> b)) throw IngestionError("expected 'vertex label'", lineno);
          uint64_t orig = parse_id(a, lineno);
          auto it = g.id_map_.find(orig);
          if (it == g.id_map_.end())
            throw IngestionError("label for unknown vertex " + std::to_string(orig), lineno);
          g.labels_[it->second] = static_cast<Label>(parse_id(b, lineno));
        }
      }
      return g;
    }

    uint32_t vertex_count() const { return static_cast<uint32_t>(offsets_.size()) - 1; }
    uint64_t edge_count() const { return neighbours_.size() / 2; }

    std::span<const DataVertex> adj(DataVertex v) const
    {
      return {neighbours_.data() + offsets_[v], neighbours_.data() + offsets_[v + 1]};
    }

    uint32_t degree(DataVertex v) const
    {
      return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]);
    }

    bool adjacent(DataVertex u, DataVertex v) const
    {
      auto a = adj(u);
      return std::binary_search(a.begin(), a.end(), v);
    }

    bool labelled() const { return !labels_.empty(); }

    Label label(DataVertex v) const
    {
      return labels_.empty() ? kWildcardLabel : labels_[v];
    }

    uint32_t distinct_label_count() const
    {
      std::vector<Label> ls(labels_);
      std::sort(ls.begin(), ls.end());
      ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
      return static_cast<uint32_t>(ls.size());
    }

    uint64_t original_id(DataVertex v) const { return original_[v]; }

    std::optional<DataVertex> internal_id(uint64_t original) const
    {
      auto it = id_map_.find(original);
      if (it == id_map_.end()) return std::nullopt;
      return it->second;
    }

    // ---- binary snapshot ------------------------------------------------
    // Layout (little endian):
    //   magic "PMG1" | u32 version=1 | u32 flags (bit0 labels) | u32 n | u64 m
    //   u64 offsets[n+1] | u32 neighbours[2m] | u64 original[n]
    //   u32 labels[n]            (only when flagged)

    static constexpr std::array<char, 4> kMagic = {'P', 'M', 'G', '1'};

    void save_snapshot(const std::string &path) const
    {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IngestionError("cannot write snapshot '" + path + "'");
      out.write(kMagic.data(), 4);
      write_u32(out, 1);
      write_u32(out, labelled() ? 1 : 0);
      write_u32(out, vertex_count());
      write_u64(out, edge_count());
      for (uint64_t o : offsets_) write_u64(out, o);
      for (uint32_t v : neighbours_) write_u32(out, v);
      for (uint64_t o : original_) write_u64(out, o);
      for (Label l : labels_) write_u32(out, l);
      if (!out) throw IngestionError("failed writing snapshot '" + path + "'");
    }

    static bool is_snapshot(const std::string &path)
    {
      std::ifstream in(path, std::ios::binary);
      std::array<char, 4> magic{};
      in.read(magic.data(), 4);
      return in && magic == kMagic;
    }

    static DataGraph load_snapshot(const std::string &path)
    {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IngestionError("cannot open snapshot '" + path + "'");
      std::array<char, 4> magic{};
      in.read(magic.data(), 4);
      if (!in || magic != kMagic) throw IngestionError("'" + path + "' is not a graph snapshot");
      uint32_t version = read_u32(in);
      if (version != 1) throw IngestionError("unsupported snapshot version " + std::to_string(version));
      uint32_t flags = read_u32(in);
      uint32_t n = read_u32(in);
      uint64_t m = read_u64(in);

      DataGraph g;
      g.offsets_.resize(n + 1);
      for (auto &o : g.offsets_) o = read_u64(in);
      g.neighbours_.resize(2 * m);
      for (auto &v : g.neighbours_) v = read_u32(in);
      g.original_.resize(n);
      for (auto &o : g.original_) o = read_u64(in);
      if (flags & 1)
      {
        g.labels_.resize(n);
        for (auto &l : g.labels_) l = read_u32(in);
      }
      if (!in) throw IngestionError("truncated snapshot '" + path + "'");
      for (uint32_t v = 0; v < n; ++v) g.id_map_.emplace(g.original_[v], v);
      return g;
    }

    // Sniffs the magic so apps work on either representation.
    static DataGraph load(const std::string &path, const std::string &label_path = "")
    {
      if (is_snapshot(path))
      {
        if (!label_path.empty()) throw IngestionError("snapshots already carry labels; drop the label file");
        return load_snapshot(path);
      }
      return load_edge_list(path, label_path);
    }

  private:
    std::vector<uint64_t> offsets_;
    std::vector<DataVertex> neighbours_;
    std::vector<Label> labels_;
    std::vector<uint64_t> original_;
    std::unordered_map<uint64_t, DataVertex> id_map_;

    static uint64_t parse_id(const std::string &tok, size_t lineno)
    {
      try
      {
        size_t pos = 0;
        uint64_t v = std::stoull(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
      }
      catch (const std::exception &)
      {
        throw IngestionError("non-integer token '" + tok + "'", lineno);
      }
    }

    static void write_u32(std::ostream &out, uint32_t v)
    {
      out.write(reinterpret_cast<const char *>(&v), sizeof(v));
    }

    static void write_u64(std::ostream &out, uint64_t v)
    {
      out.write(reinterpret_cast<const char *>(&v), sizeof(v));
    }

    static uint32_t read_u32(std::istream &in)
    {
      uint32_t v = 0;
      in.read(reinterpret_cast<char *>(&v), sizeof(v));
      return v;
    }

    static uint64_t read_u64(std::istream &in)
    {
      uint64_t v = 0;
      in.read(reinterpret_cast<char *>(&v), sizeof(v));
      return v;
    }

    void build(const std::vector<std::pair<uint64_t, uint64_t>> &edges)
    {
      // collect vertices from non-self-loop edges, in first-appearance order
      std::unordered_map<uint64_t, uint32_t> raw_id;
      std::vector<uint64_t> raw_original;
      std::vector<std::pair<uint32_t, uint32_t>> raw_edges;
      auto intern = [&](uint64_t v)
      {
        auto [it, fresh] = raw_id.emplace(v, static_cast<uint32_t>(raw_original.size()));
        if (fresh) raw_original.push_back(v);
        return it->second;
      };
      for (const auto &[a, b] : edges)
      {
        if (a == b) continue;
        uint32_t u = intern(a), v = intern(b);
        raw_edges.emplace_back(std::min(u, v), std::max(u, v));
      }
      std::sort(raw_edges.begin(), raw_edges.end());
      raw_edges.erase(std::unique(raw_edges.begin(), raw_edges.end()), raw_edges.end());

      const uint32_t n = static_cast<uint32_t>(raw_original.size());
      std::vector<uint32_t> deg(n, 0);
      for (const auto &[u, v] : raw_edges)
      {
        deg[u] += 1;
        deg[v] += 1;
      }

      // degree order with original-id tie break
      std::vector<uint32_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b)
      {
        return deg[a] < deg[b] || (deg[a] == deg[b] && raw_original[a] < raw_original[b]);
      });
      std::vector<DataVertex> remap(n);
      for (uint32_t i = 0; i < n; ++i) remap[order[i]] = i;

      original_.resize(n);
      for (uint32_t i = 0; i < n; ++i) original_[remap[i]] = raw_original[i];
      for (uint32_t v = 0; v < n; ++v) id_map_.emplace(original_[v], v);

      std::vector<std::vector<DataVertex>> adj(n);
      for (const auto &[u, v] : raw_edges)
      {
        adj[remap[u]].push_back(remap[v]);
        adj[remap[v]].push_back(remap[u]);
      }
      offsets_.assign(n + 1, 0);
      for (uint32_t v = 0; v < n; ++v)
      {
        std::sort(adj[v].begin(), adj[v].end());
        offsets_[v + 1] = offsets_[v] + adj[v].size();
      }
      neighbours_.reserve(offsets_[n]);
      for (uint32_t v = 0; v < n; ++v)
        neighbours_.insert(neighbours_.end(), adj[v].begin(), adj[v].end());
    }
  };
} // namespace patmine

#endif
