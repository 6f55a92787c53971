#ifndef PATMINE_BITMAP_HH
#define PATMINE_BITMAP_HH

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

namespace patmine
{
  class DenseBitmap
  {
  public:
    DenseBitmap() = default;
    explicit DenseBitmap(uint32_t universe) : words_((universe + 63) / 64, 0) {}

    void set(uint32_t i)
    {
      size_t w = i / 64;
      if (w >= words_.size()) words_.resize(w + 1, 0);
      words_[w] |= uint64_t{1} << (i % 64);
    }

    bool test(uint32_t i) const
    {
      size_t w = i / 64;
      return w < words_.size() && (words_[w] >> (i % 64)) & 1;
    }

    uint64_t popcount() const
    {
      uint64_t c = 0;
      for (uint64_t w : words_) c += std::popcount(w);
      return c;
    }

    void merge(const DenseBitmap &other)
    {
      if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
      for (size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    }

    bool operator==(const DenseBitmap &other) const
    {
      const auto &a = words_.size() <= other.words_.size() ? words_ : other.words_;
      const auto &b = words_.size() <= other.words_.size() ? other.words_ : words_;
      for (size_t i = 0; i < a.size(); ++i)
      {
        if (a[i] != b[i]) return false;
      }
      for (size_t i = a.size(); i < b.size(); ++i)
      {
        if (b[i] != 0) return false;
      }
      return true;
    }

  private:
    std::vector<uint64_t> words_;
  };

  /**
   * Two-level compressed bitmap: 64Ki-wide chunks stored as sorted arrays
   * until they grow past kArrayLimit, then as dense blocks. Popcounts agree
   * with DenseBitmap by contract; this trades speed for memory on large,
   * sparse universes.
   */
  class CompressedBitmap
  {
  public:
    CompressedBitmap() = default;
    explicit CompressedBitmap(uint32_t) {}

    void set(uint32_t i)
    {
      Chunk &c = chunks_[i >> 16];
      uint16_t low = static_cast<uint16_t>(i & 0xffff);
      if (!c.bits.empty())
      {
        c.bits[low / 64] |= uint64_t{1} << (low % 64);
        return;
      }
      auto it = std::lower_bound(c.arr.begin(), c.arr.end(), low);
      if (it != c.arr.end() && *it == low) return;
      c.arr.insert(it, low);
      if (c.arr.size() > kArrayLimit)
      {
        c.bits.assign(1024, 0);
        for (uint16_t v : c.arr) c.bits[v / 64] |= uint64_t{1} << (v % 64);
        c.arr.clear();
        c.arr.shrink_to_fit();
      }
    }

    bool test(uint32_t i) const
    {
      auto it = chunks_.find(i >> 16);
      if (it == chunks_.end()) return false;
      uint16_t low = static_cast<uint16_t>(i & 0xffff);
      const Chunk &c = it->second;
      if (!c.bits.empty()) return (c.bits[low / 64] >> (low % 64)) & 1;
      return std::binary_search(c.arr.begin(), c.arr.end(), low);
    }

    uint64_t popcount() const
    {
      uint64_t n = 0;
      for (const auto &[key, c] : chunks_)
      {
        if (!c.bits.empty())
        {
          for (uint64_t w : c.bits) n += std::popcount(w);
        }
        else
        {
          n += c.arr.size();
        }
      }
      return n;
    }

    void merge(const CompressedBitmap &other)
    {
      for (const auto &[key, c] : other.chunks_)
      {
        if (!c.bits.empty())
        {
          for (uint32_t w = 0; w < c.bits.size(); ++w)
          {
            uint64_t word = c.bits[w];
            while (word)
            {
              uint32_t b = std::countr_zero(word);
              set((key << 16) | (w * 64 + b));
              word &= word - 1;
            }
          }
        }
        else
        {
          for (uint16_t v : c.arr) set((key << 16) | v);
        }
      }
    }

    bool operator==(const CompressedBitmap &other) const
    {
      if (popcount() != other.popcount()) return false;
      for (const auto &[key, c] : chunks_)
      {
        if (!c.bits.empty())
        {
          for (uint32_t w = 0; w < c.bits.size(); ++w)
          {
            uint64_t word = c.bits[w];
            while (word)
            {
              uint32_t b = std::countr_zero(word);
              if (!other.test((key << 16) | (w * 64 + b))) return false;
              word &= word - 1;
            }
          }
        }
        else
        {
          for (uint16_t v : c.arr)
          {
            if (!other.test((key << 16) | v)) return false;
          }
        }
      }
      return true;
    }

  private:
    static constexpr size_t kArrayLimit = 4096;

    struct Chunk
    {
      std::vector<uint16_t> arr;  // sorted, used while small
      std::vector<uint64_t> bits; // 1024 words once dense
    };

    std::map<uint32_t, Chunk> chunks_;
  };
} // namespace patmine

#endif
