#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace lips {

// Fixed-length bit vector used for row masks and dummy columns.
// Tail bits past size() are kept zero so popcount stays exact.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n, bool value = false)
      : n_(n), words_((n + 63) / 64, value ? ~0ull : 0ull) {
    clear_tail();
  }

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ull;
  }
  void set(std::size_t i, bool v = true) {
    if (v)
      words_[i >> 6] |= 1ull << (i & 63);
    else
      words_[i >> 6] &= ~(1ull << (i & 63));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  BitVector& operator&=(const BitVector& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  BitVector& operator|=(const BitVector& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

  BitVector operator~() const {
    BitVector r(*this);
    for (auto& w : r.words_) w = ~w;
    r.clear_tail();
    return r;
  }

  bool operator==(const BitVector& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::size_t and_count(const BitVector& o) const {
    assert(n_ == o.n_);
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(__builtin_popcountll(words_[i] & o.words_[i]));
    return c;
  }

 private:
  void clear_tail() {
    if (n_ & 63) words_.back() &= (~0ull) >> (64 - (n_ & 63));
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace lips
