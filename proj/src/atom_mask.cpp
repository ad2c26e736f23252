#include "dyadcert/atom_mask.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace dyadcert {

namespace {

// Bits of a word whose position has bit m clear, for m < 6.
constexpr std::uint64_t kLowPattern[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull,
};

std::uint64_t LowBits(std::uint64_t n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

}  // namespace

AtomMask::AtomMask(std::uint64_t size) : size_(size) {
  if (size < 2 || !std::has_single_bit(size)) {
    throw std::invalid_argument("atom mask size must be a power of two >= 2");
  }
  words_.assign(std::max<std::uint64_t>(1, size / 64), 0);
}

AtomMask AtomMask::Full(std::uint64_t size) {
  AtomMask m(size);
  std::fill(m.words_.begin(), m.words_.end(), ~std::uint64_t{0});
  m.clear_tail();
  return m;
}

void AtomMask::clear_tail() {
  if (size_ < 64) words_[0] &= LowBits(size_);
}

std::uint64_t AtomMask::count() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

bool AtomMask::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool AtomMask::all() const { return count() == size_; }

std::int64_t AtomMask::balance(unsigned m) const {
  assert(m < log2_size());
  std::int64_t zero = 0, one = 0;
  if (m < 6) {
    const std::uint64_t p = kLowPattern[m];
    for (auto w : words_) {
      zero += std::popcount(w & p);
      one += std::popcount(w & ~p);
    }
  } else {
    const unsigned shift = m - 6;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto c = std::popcount(words_[i]);
      if ((i >> shift) & 1u) {
        one += c;
      } else {
        zero += c;
      }
    }
  }
  return zero - one;
}

AtomMask& AtomMask::operator&=(const AtomMask& o) {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

AtomMask& AtomMask::operator|=(const AtomMask& o) {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

AtomMask& AtomMask::operator^=(const AtomMask& o) {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

AtomMask& AtomMask::and_not(const AtomMask& o) {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

AtomMask& AtomMask::flip() {
  for (auto& w : words_) w = ~w;
  clear_tail();
  return *this;
}

AtomMask AtomMask::tiled(std::uint64_t factor) const {
  if (factor == 1) return *this;
  AtomMask out(size_ * factor);
  if (size_ < 64) {
    std::uint64_t w = words_[0];
    std::uint64_t span = size_;
    while (span < 64 && span < out.size_) {
      w |= w << span;
      span *= 2;
    }
    std::fill(out.words_.begin(), out.words_.end(), w);
    out.clear_tail();
    return out;
  }
  const std::size_t n = words_.size();
  for (std::size_t i = 0; i < out.words_.size(); i += n) {
    std::copy(words_.begin(), words_.end(), out.words_.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

bool AtomMask::halves_equal() const {
  if (size_ <= 64) {
    const std::uint64_t h = size_ / 2;
    const std::uint64_t low = LowBits(h);
    return (words_[0] & low) == ((words_[0] >> h) & low);
  }
  const std::size_t half = words_.size() / 2;
  return std::equal(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(half),
                    words_.begin() + static_cast<std::ptrdiff_t>(half));
}

AtomMask AtomMask::lower_half() const {
  AtomMask out(size_ / 2);
  if (size_ <= 64) {
    out.words_[0] = words_[0] & LowBits(size_ / 2);
  } else {
    std::copy(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(out.words_.size()),
              out.words_.begin());
  }
  return out;
}

}  // namespace dyadcert
