#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace esg {

using EventIdx = std::uint32_t;

/// Fixed-universe bitset of event indices. Sets compared or combined must
/// share a universe.
class EventSet {
 public:
  EventSet() = default;
  explicit EventSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}
  EventSet(std::size_t universe, std::initializer_list<std::size_t> elems) : EventSet(universe) {
    for (auto e : elems) set(e);
  }

  static EventSet full(std::size_t universe) {
    EventSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.set(i);
    return s;
  }

  template <class Range>
  static EventSet of(std::size_t universe, const Range& elems) {
    EventSet s(universe);
    for (auto e : elems) s.set(static_cast<std::size_t>(e));
    return s;
  }

  std::size_t universe() const { return n_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  EventSet with(std::size_t i) const {
    EventSet r = *this;
    r.set(i);
    return r;
  }
  EventSet without(std::size_t i) const {
    EventSet r = *this;
    r.reset(i);
    return r;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }

  bool subset_of(const EventSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const EventSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  EventSet& operator|=(const EventSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  EventSet& operator&=(const EventSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  EventSet& operator-=(const EventSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend EventSet operator|(EventSet a, const EventSet& b) { return a |= b; }
  friend EventSet operator&(EventSet a, const EventSet& b) { return a &= b; }
  friend EventSet operator-(EventSet a, const EventSet& b) { return a -= b; }

  friend bool operator==(const EventSet& a, const EventSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(static_cast<EventIdx>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<EventIdx> elements() const {
    std::vector<EventIdx> out;
    for_each([&](EventIdx e) { out.push_back(e); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = n_ * 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct EventSetHash {
  std::size_t operator()(const EventSet& s) const { return s.hash(); }
};

/// Canonical order: by cardinality, then lexicographically on sorted elements.
inline bool canonical_less(const EventSet& a, const EventSet& b) {
  const auto ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  const auto ea = a.elements(), eb = b.elements();
  return ea < eb;
}

inline void canonicalize(std::vector<EventSet>& family) {
  std::sort(family.begin(), family.end(), canonical_less);
  family.erase(std::unique(family.begin(), family.end()), family.end());
}

/// Keeps only the ⊆-maximal members.
inline std::vector<EventSet> maximal_members(std::vector<EventSet> family) {
  canonicalize(family);
  std::vector<EventSet> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = i + 1; j < family.size() && !dominated; ++j)
      dominated = family[j].count() > family[i].count() && family[i].subset_of(family[j]);
    if (!dominated) out.push_back(family[i]);
  }
  return out;
}

}  // namespace esg
