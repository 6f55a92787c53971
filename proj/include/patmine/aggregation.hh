#ifndef PATMINE_AGGREGATION_HH
#define PATMINE_AGGREGATION_HH

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bitmap.hh"
#include "matcher.hh"
#include "pattern.hh"

namespace patmine
{
  /**
   * Per-pattern-vertex domains: bit v of domain u means some reported match
   * mapped u to data vertex v. The minimum popcount over regular vertices is
   * the MNI support. Backed by dense bitmaps by default; CompressedBitmap
   * gives the memory-lean variant with identical popcounts.
   */
  template <class B = DenseBitmap>
  class BasicDomainMap
  {
  public:
    BasicDomainMap() = default;

    BasicDomainMap(uint32_t vertices, uint32_t universe)
      : domains_(vertices, B(universe)), tracked_(vertices, true)
    {
    }

    BasicDomainMap(const Pattern &p, uint32_t universe)
      : domains_(p.num_vertices(), B(universe)), tracked_(p.num_vertices(), true)
    {
      for (PatternVertex u = 1; u <= p.num_vertices(); ++u)
      {
        if (!p.is_regular(u)) tracked_[u - 1] = false;
      }
    }

    uint32_t vertices() const { return static_cast<uint32_t>(domains_.size()); }

    void insert(PatternVertex u, DataVertex v) { domains_[u - 1].set(v); }

    void insert(const Match &m)
    {
      for (PatternVertex u = 1; u <= vertices(); ++u)
      {
        if (tracked_[u - 1]) domains_[u - 1].set(m.internal(u));
      }
    }

    uint64_t popcount(PatternVertex u) const { return domains_[u - 1].popcount(); }

    const B &domain(PatternVertex u) const { return domains_[u - 1]; }

    void merge(const BasicDomainMap &other)
    {
      if (domains_.empty())
      {
        *this = other;
        return;
      }
      for (size_t i = 0; i < domains_.size(); ++i) domains_[i].merge(other.domains_[i]);
    }

    // MNI support: minimum domain size over the pattern's regular vertices
    uint64_t support() const
    {
      uint64_t s = std::numeric_limits<uint64_t>::max();
      bool any = false;
      for (size_t i = 0; i < domains_.size(); ++i)
      {
        if (!tracked_[i]) continue;
        s = std::min(s, domains_[i].popcount());
        any = true;
      }
      return any ? s : 0;
    }

    bool operator==(const BasicDomainMap &other) const
    {
      return domains_ == other.domains_ && tracked_ == other.tracked_;
    }

  private:
    std::vector<B> domains_;
    std::vector<bool> tracked_;
  };

  using DomainMap = BasicDomainMap<DenseBitmap>;
  using CompressedDomainMap = BasicDomainMap<CompressedBitmap>;

  template <class B>
  void domain_insert(BasicDomainMap<B> &dm, const Match &m)
  {
    dm.insert(m);
  }

  template <class B>
  uint64_t mni_support(const BasicDomainMap<B> &dm)
  {
    return dm.support();
  }

  inline std::map<std::string, uint64_t> frequency_check(const std::map<std::string, uint64_t> &supports,
                                                         uint64_t tau)
  {
    std::map<std::string, uint64_t> frequent;
    for (const auto &[code, s] : supports)
    {
      if (s >= tau) frequent.emplace(code, s);
    }
    return frequent;
  }

  /**
   * Asynchronous aggregation: workers publish their cumulative local value
   * into a single-producer slot (swap + flag, never waiting on the
   * aggregator); an aggregator thread drains flagged slots every epoch and
   * folds the latest value per worker into the global view. A publish that
   * lands before the previous one was consumed simply supersedes it, so
   * mid-run snapshots are lower bounds; finish() performs the final drain
   * and makes the global value exact.
   */
  template <class T, class MergeFn>
  class Aggregator
  {
  public:
    Aggregator(size_t workers, T identity, MergeFn merge,
               std::chrono::milliseconds epoch = std::chrono::milliseconds(50))
      : identity_(std::move(identity)), merge_(std::move(merge)), epoch_(epoch),
        consumed_(workers), global_(identity_)
    {
      slots_.reserve(workers);
      for (size_t i = 0; i < workers; ++i) slots_.push_back(std::make_unique<Slot>());
      thread_ = std::thread([this] { loop(); });
    }

    ~Aggregator() { finish(); }

    void publish(size_t worker, T value)
    {
      Slot &slot = *slots_[worker];
      std::lock_guard lock(slot.m);
      slot.value = std::move(value);
      slot.ready = true;
    }

    T snapshot() const
    {
      std::lock_guard lock(global_m_);
      return global_;
    }

    void finish()
    {
      if (finished_) return;
      finished_ = true;
      stopping_.store(true, std::memory_order_release);
      thread_.join();
      drain();
    }

  private:
    struct Slot
    {
      std::mutex m;
      T value;
      bool ready = false;
    };

    void drain()
    {
      for (size_t i = 0; i < slots_.size(); ++i)
      {
        Slot &slot = *slots_[i];
        std::lock_guard lock(slot.m);
        if (slot.ready)
        {
          consumed_[i] = std::move(slot.value);
          slot.ready = false;
        }
      }
      T merged = identity_;
      for (const auto &v : consumed_)
      {
        if (v) merged = merge_(std::move(merged), *v);
      }
      std::lock_guard lock(global_m_);
      global_ = std::move(merged);
    }

    void loop()
    {
      const auto slice = std::min<std::chrono::milliseconds>(epoch_, std::chrono::milliseconds(5));
      auto next_drain = std::chrono::steady_clock::now() + epoch_;
      while (!stopping_.load(std::memory_order_acquire))
      {
        std::this_thread::sleep_for(slice);
        if (std::chrono::steady_clock::now() >= next_drain)
        {
          drain();
          next_drain = std::chrono::steady_clock::now() + epoch_;
        }
      }
    }

    T identity_;
    MergeFn merge_;
    std::chrono::milliseconds epoch_;
    std::vector<std::unique_ptr<Slot>> slots_;
    std::vector<std::optional<T>> consumed_;
    mutable std::mutex global_m_;
    T global_;
    std::atomic<bool> stopping_{false};
    bool finished_ = false;
    std::thread thread_;
  };
} // namespace patmine

#endif
