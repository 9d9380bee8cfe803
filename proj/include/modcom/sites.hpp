#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "modcom/errors.hpp"

namespace modcom {

using SiteId = std::int64_t;

// Fixed-length bit vector over dense internal site indices.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return nbits_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool any() const noexcept {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // popcount(a & b) without materializing the intersection.
  static std::size_t and_count(const BitVec& a, const BitVec& b) noexcept {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.words_.size(); ++k) {
      c += static_cast<std::size_t>(std::popcount(a.words_[k] & b.words_[k]));
    }
    return c;
  }
  static bool intersects(const BitVec& a, const BitVec& b) noexcept {
    for (std::size_t k = 0; k < a.words_.size(); ++k) {
      if (a.words_[k] & b.words_[k]) return true;
    }
    return false;
  }

  BitVec& operator^=(const BitVec& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) noexcept { return a ^= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) noexcept { return a |= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) noexcept { return a &= b; }

  friend bool operator==(const BitVec&, const BitVec&) = default;
  friend auto operator<=>(const BitVec& a, const BitVec& b) noexcept {
    return a.words_ <=> b.words_;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::size_t hash() const noexcept {
    std::size_t h = nbits_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Ordered set of site labels. Internal index k is the position of the k-th
// smallest SiteId; dense tensor factors follow the same order.
class SiteUniverse {
 public:
  SiteUniverse() = default;
  explicit SiteUniverse(std::vector<SiteId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
      fail(ErrorCode::InvalidArgument, "duplicate SiteId in site universe");
    }
  }

  static std::shared_ptr<const SiteUniverse> make(std::vector<SiteId> ids) {
    return std::make_shared<const SiteUniverse>(std::move(ids));
  }
  // Contiguous integer range [lo, hi].
  static std::shared_ptr<const SiteUniverse> range(SiteId lo, SiteId hi) {
    std::vector<SiteId> ids;
    for (SiteId s = lo; s <= hi; ++s) ids.push_back(s);
    return make(std::move(ids));
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<SiteId>& ids() const noexcept { return ids_; }
  SiteId id(std::size_t index) const { return ids_.at(index); }

  bool contains(SiteId s) const noexcept { return std::binary_search(ids_.begin(), ids_.end(), s); }

  std::size_t index(SiteId s) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), s);
    if (it == ids_.end() || *it != s) {
      fail(ErrorCode::InvalidArgument, "site " + std::to_string(s) + " is not in the universe");
    }
    return static_cast<std::size_t>(it - ids_.begin());
  }

  BitVec mask(std::span<const SiteId> sites) const {
    BitVec m(size());
    for (SiteId s : sites) m.set(index(s));
    return m;
  }

  std::vector<SiteId> sites_of(const BitVec& m) const {
    std::vector<SiteId> out;
    for (std::size_t k = 0; k < size(); ++k) {
      if (m.test(k)) out.push_back(ids_[k]);
    }
    return out;
  }

  friend bool operator==(const SiteUniverse&, const SiteUniverse&) = default;

 private:
  std::vector<SiteId> ids_;
};

using UniversePtr = std::shared_ptr<const SiteUniverse>;

inline bool same_universe(const UniversePtr& a, const UniversePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_universe(const UniversePtr& a, const UniversePtr& b) {
  if (!same_universe(a, b)) fail(ErrorCode::InvalidArgument, "operands live on different site universes");
}

// Sorted, de-duplicated copy.
inline std::vector<SiteId> normalized_sites(std::vector<SiteId> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace modcom
