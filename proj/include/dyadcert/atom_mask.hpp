#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace dyadcert {

// Fixed-size bit vector whose length is a power of two (>= 2).
// Bit i is atom i. Bits above size() inside the last word are always zero.
class AtomMask {
 public:
  AtomMask() : AtomMask(2) {}
  explicit AtomMask(std::uint64_t size);

  static AtomMask Full(std::uint64_t size);

  std::uint64_t size() const { return size_; }
  unsigned log2_size() const { return static_cast<unsigned>(std::countr_zero(size_)); }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& mutable_words() { return words_; }

  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::uint64_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::uint64_t count() const;
  bool none() const;
  bool all() const;

  // #(set atoms with index bit m == 0) - #(set atoms with index bit m == 1).
  // Requires m < log2_size().
  std::int64_t balance(unsigned m) const;

  AtomMask& operator&=(const AtomMask& o);
  AtomMask& operator|=(const AtomMask& o);
  AtomMask& operator^=(const AtomMask& o);
  AtomMask& and_not(const AtomMask& o);
  AtomMask& flip();
  bool operator==(const AtomMask& o) const = default;

  // Repeats the pattern `factor` times (factor a power of two).
  AtomMask tiled(std::uint64_t factor) const;
  bool halves_equal() const;
  AtomMask lower_half() const;

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        unsigned b = static_cast<unsigned>(std::countr_zero(word));
        f((static_cast<std::uint64_t>(w) << 6) | b);
        word &= word - 1;
      }
    }
  }

 private:
  void clear_tail();

  std::uint64_t size_;
  std::vector<std::uint64_t> words_;
};

}  // namespace dyadcert
