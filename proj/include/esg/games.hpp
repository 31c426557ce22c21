#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"
#include "esg/map.hpp"

namespace esg {

enum class Polarity { Plus, Minus, Neutral };

inline char polarity_char(Polarity p) {
  switch (p) {
    case Polarity::Plus: return '+';
    case Polarity::Minus: return '-';
    case Polarity::Neutral: return '0';
  }
  return '?';
}

inline Polarity flip(Polarity p) {
  if (p == Polarity::Plus) return Polarity::Minus;
  if (p == Polarity::Minus) return Polarity::Plus;
  return p;
}

struct PolarisedStructure {
  EventStructure es;
  std::vector<Polarity> pol;

  PolarisedStructure() = default;
  PolarisedStructure(EventStructure e, std::vector<Polarity> p) : es(std::move(e)), pol(std::move(p)) {}

  std::size_t size() const { return es.size(); }

  EventSet with_polarity(Polarity p) const {
    EventSet r(size());
    for (EventIdx e = 0; e < size(); ++e)
      if (pol[e] == p) r.set(e);
    return r;
  }
  /// Events that behave as Player moves: + and 0.
  EventSet player_like() const { return with_polarity(Polarity::Plus) | with_polarity(Polarity::Neutral); }

  bool has_neutral() const { return std::find(pol.begin(), pol.end(), Polarity::Neutral) != pol.end(); }

  friend bool operator==(const PolarisedStructure& a, const PolarisedStructure& b) {
    return a.es == b.es && a.pol == b.pol;
  }
};

/// A polarised structure with no neutral events.
struct Game : PolarisedStructure {
  Game() = default;
  explicit Game(PolarisedStructure p) : PolarisedStructure(std::move(p)) {
    Diagnostics d;
    for (EventIdx e = 0; e < size(); ++e)
      if (pol[e] == Polarity::Neutral) d.push_back({DiagKind::NeutralInGame, es.name(e)});
    if (!d.empty()) throw ValidationError(d);
  }
  Game(EventStructure e, std::vector<Polarity> p) : Game(PolarisedStructure(std::move(e), std::move(p))) {}
};

inline PolarisedStructure dual(const PolarisedStructure& a) {
  std::vector<Polarity> p(a.pol.size());
  std::transform(a.pol.begin(), a.pol.end(), p.begin(), flip);
  return PolarisedStructure(a.es, std::move(p));
}

inline Game dual(const Game& a) { return Game(dual(static_cast<const PolarisedStructure&>(a))); }

/// A⁰: every event made neutral.
inline PolarisedStructure neutralise(const PolarisedStructure& a) {
  return PolarisedStructure(a.es, std::vector<Polarity>(a.size(), Polarity::Neutral));
}

/// Flat index offsets of the components of a parallel composition.
inline std::vector<std::size_t> parallel_offsets(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

/// n-ary parallel composition. Component k (1-based) contributes events
/// named "k.name" at consecutive flat indices.
inline EventStructure parallel_es(const std::vector<const EventStructure*>& parts) {
  std::vector<std::size_t> sizes;
  for (auto* p : parts) sizes.push_back(p->size());
  const auto off = parallel_offsets(sizes);
  const std::size_t n = off.back();
  std::vector<std::string> names;
  std::vector<EventSet> down;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = *parts[k];
    for (EventIdx e = 0; e < p.size(); ++e) {
      names.push_back(std::to_string(k + 1) + "." + p.name(e));
      EventSet d(n);
      p.down(e).for_each([&](EventIdx x) { d.set(off[k] + x); });
      down.push_back(d);
    }
  }
  std::vector<EventSet> maximal{EventSet(n)};
  for (std::size_t k = 0; k < parts.size(); ++k) {
    std::vector<EventSet> next;
    for (const auto& acc : maximal)
      for (const auto& m : parts[k]->maximal_consistent()) {
        EventSet s = acc;
        m.for_each([&](EventIdx x) { s.set(off[k] + x); });
        next.push_back(s);
      }
    maximal = std::move(next);
  }
  return EventStructure(std::move(names), std::move(down), std::move(maximal));
}

inline PolarisedStructure parallel(const std::vector<PolarisedStructure>& parts) {
  std::vector<const EventStructure*> es;
  std::vector<Polarity> pol;
  for (const auto& p : parts) {
    es.push_back(&p.es);
    pol.insert(pol.end(), p.pol.begin(), p.pol.end());
  }
  return PolarisedStructure(parallel_es(es), std::move(pol));
}

inline Game parallel(const std::vector<Game>& parts) {
  std::vector<PolarisedStructure> ps(parts.begin(), parts.end());
  return Game(parallel(ps));
}

/// Configurations y ⊇ x with y \ x ⊆ allowed, for x a configuration.
inline std::vector<EventSet> extensions_within(const EventStructure& es, const EventSet& x, const EventSet& allowed,
                                               const Limits& limits = {}) {
  std::vector<EventSet> out{x};
  std::unordered_set<EventSet, EventSetHash> seen{x};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const EventSet cur = out[i];
    allowed.for_each([&](EventIdx e) {
      if (!es.enabled(cur, e)) return;
      EventSet y = cur.with(e);
      if (seen.insert(y).second) {
        if (seen.size() > limits.max_configs) throw SizeBoundExceeded("extensions", limits.max_configs);
        out.push_back(y);
      }
    });
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

inline std::vector<EventSet> extensions_within(const PolarisedStructure& a, const EventSet& x, const EventSet& allowed,
                                               const Limits& limits = {}) {
  return extensions_within(a.es, x, allowed, limits);
}

/// x ⊆⁺ y: the added events are + or 0.
inline bool plus_inclusion(const PolarisedStructure& a, const EventSet& x, const EventSet& y) {
  return x.subset_of(y) && (y - x).subset_of(a.player_like());
}
/// x ⊆⁻ y: the added events are −.
inline bool minus_inclusion(const PolarisedStructure& a, const EventSet& x, const EventSet& y) {
  return x.subset_of(y) && (y - x).subset_of(a.with_polarity(Polarity::Minus));
}

inline bool is_plus_maximal(const PolarisedStructure& a, const EventSet& x) {
  const EventSet pl = a.player_like();
  for (EventIdx e = 0; e < a.size(); ++e)
    if (pl.test(e) && a.es.enabled(x, e)) return false;
  return true;
}

inline std::vector<EventSet> plus_maximal_configs(const PolarisedStructure& a, const Limits& limits = {}) {
  std::vector<EventSet> out;
  for (const auto& x : a.es.configurations(limits.max_configs))
    if (is_plus_maximal(a, x)) out.push_back(x);
  return out;
}

struct ExtensionWitness {
  EventSet x, y, z;
};

namespace detail {

// Whenever x ⊆ y (y \ x ⊆ first) and x ⊆ z (z \ x ⊆ second), y ∪ z must be
// consistent. Unions of configurations are down-closed and consistency is
// hereditary, so maximal extensions suffice for the decision; the witness is
// then the smallest failing pair at the first failing x.
inline std::optional<ExtensionWitness> find_incompatible_extensions(const PolarisedStructure& a, const EventSet& first,
                                                                    const EventSet& second, const Limits& limits) {
  for (const auto& x : a.es.configurations(limits.max_configs)) {
    auto ys = extensions_within(a, x, first, limits);
    auto zs = extensions_within(a, x, second, limits);
    auto my = maximal_members(ys), mz = maximal_members(zs);
    bool bad = false;
    for (const auto& y : my)
      for (const auto& z : mz)
        if (!a.es.consistent(y | z)) bad = true;
    if (!bad) continue;
    std::optional<ExtensionWitness> best;
    std::size_t best_size = 0;
    for (const auto& y : ys)
      for (const auto& z : zs) {
        if (a.es.consistent(y | z)) continue;
        const auto sz = y.count() + z.count();
        if (!best || sz < best_size) {
          best = ExtensionWitness{x, y, z};
          best_size = sz;
        }
      }
    return best;
  }
  return std::nullopt;
}

}  // namespace detail

/// Race-free: x ⊆⁺ y and x ⊆⁻ z imply y ∪ z ∈ C(A). Returns a witness on failure.
inline std::optional<ExtensionWitness> race_witness(const PolarisedStructure& a, const Limits& limits = {}) {
  return detail::find_incompatible_extensions(a, a.player_like(), a.with_polarity(Polarity::Minus), limits);
}
inline bool is_race_free(const PolarisedStructure& a, const Limits& limits = {}) {
  return !race_witness(a, limits).has_value();
}

/// Deterministic: x ⊆⁺ y and x ⊆ z imply y ∪ z ∈ C(S).
inline std::optional<ExtensionWitness> nondeterminism_witness(const PolarisedStructure& s, const Limits& limits = {}) {
  return detail::find_incompatible_extensions(s, s.player_like(), EventSet::full(s.size()), limits);
}
inline bool is_deterministic(const PolarisedStructure& s, const Limits& limits = {}) {
  return !nondeterminism_witness(s, limits).has_value();
}

/// y ⊑ x: y ⊇⁻ x∩y ⊆⁺ x.
inline bool scott_leq(const PolarisedStructure& a, const EventSet& y, const EventSet& x) {
  const EventSet common = x & y;
  return (y - common).subset_of(a.with_polarity(Polarity::Minus)) && (x - common).subset_of(a.player_like());
}

/// Copycat on A: source CC over A⊥∥A, with (1,a) at index a and (2,a) at n+a,
/// and the identity-on-events map cc into A⊥∥A.
struct Copycat {
  PolarisedStructure cc_structure;
  ESMap cc;
};

inline Copycat copycat(const Game& a, const Limits& limits = {}) {
  const std::size_t n = a.size();
  PolarisedStructure target = parallel({dual(static_cast<const PolarisedStructure&>(a)), a});
  std::vector<std::pair<EventIdx, EventIdx>> edges;
  for (EventIdx e = 0; e < 2 * n; ++e)
    target.es.down(e).for_each([&](EventIdx d) {
      if (d != e) edges.emplace_back(d, e);
    });
  for (EventIdx c = 0; c < 2 * n; ++c)
    if (target.pol[c] == Polarity::Plus) {
      const EventIdx bar = c < n ? c + n : c - n;
      edges.emplace_back(bar, c);
    }
  auto closure = close_order(2 * n, edges);
  const auto& target_es = target.es;
  auto down = closure.down;
  EventStructure cc_es = structure_from_predicate(
      target_es.names(), down, [&](const EventSet& y) { return target_es.consistent(y); }, limits.max_configs);
  PolarisedStructure cc(cc_es, target.pol);
  std::vector<EventIdx> f(2 * n);
  for (EventIdx e = 0; e < 2 * n; ++e) f[e] = e;
  return Copycat{cc, ESMap(cc_es, target.es, std::move(f))};
}

/// Splits a configuration of A⊥∥A (or of CC) into its two component sets.
inline std::pair<EventSet, EventSet> split_copycat(const EventSet& w, std::size_t n) {
  EventSet left(n), right(n);
  w.for_each([&](EventIdx e) {
    if (e < n)
      left.set(e);
    else
      right.set(e - n);
  });
  return {left, right};
}

/// Convenience builder: events given with polarities.
inline PolarisedStructure make_polarised(std::vector<std::pair<std::string, Polarity>> events,
                                         std::vector<std::pair<std::string, std::string>> causes = {},
                                         std::vector<std::pair<std::string, std::string>> conflicts = {}) {
  std::vector<std::string> names;
  std::vector<Polarity> pol;
  for (auto& [n, p] : events) {
    names.push_back(n);
    pol.push_back(p);
  }
  return PolarisedStructure(make_structure(std::move(names), std::move(causes), std::move(conflicts)), std::move(pol));
}

inline Game make_game(std::vector<std::pair<std::string, Polarity>> events,
                      std::vector<std::pair<std::string, std::string>> causes = {},
                      std::vector<std::pair<std::string, std::string>> conflicts = {}) {
  return Game(make_polarised(std::move(events), std::move(causes), std::move(conflicts)));
}

}  // namespace esg
