#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_set.hpp"

namespace esg {

/// A finite event structure (E, ≤, Con).
///
/// The order is stored as reflexive down-sets [e]; consistency as the antichain
/// of maximal consistent sets. Since consistency is hereditary and closed under
/// adding causes, the maximal consistent sets are exactly the maximal
/// configurations, and X is consistent iff X lies inside one of them.
class EventStructure {
 public:
  EventStructure() : cache_(std::make_shared<Cache>()) { maximal_.push_back(EventSet(0)); }

  /// Trusted constructor. `down[e]` must be the reflexive, transitively closed
  /// down-set of e; `maximal` any family whose ⊆-maximal members are the
  /// maximal consistent sets.
  EventStructure(std::vector<std::string> names, std::vector<EventSet> down, std::vector<EventSet> maximal)
      : names_(std::move(names)), down_(std::move(down)), cache_(std::make_shared<Cache>()) {
    const auto n = names_.size();
    up_.assign(n, EventSet(n));
    for (EventIdx e = 0; e < n; ++e) down_[e].for_each([&](EventIdx d) { up_[d].set(e); });
    if (maximal.empty()) maximal.push_back(EventSet(n));
    maximal_ = maximal_members(std::move(maximal));
    for (EventIdx e = 0; e < n; ++e) index_.emplace(names_[e], e);
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(EventIdx e) const { return names_[e]; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<EventIdx> find(std::string_view n) const {
    auto it = index_.find(std::string(n));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  EventIdx index_of(std::string_view n) const {
    auto e = find(n);
    if (!e) throw UnknownEvent(std::string(n));
    return *e;
  }

  /// [e], including e.
  const EventSet& down(EventIdx e) const { return down_[e]; }
  /// [e) = [e] \ {e}.
  EventSet strict_down(EventIdx e) const { return down_[e].without(e); }
  const EventSet& up(EventIdx e) const { return up_[e]; }
  bool leq(EventIdx a, EventIdx b) const { return down_[b].test(a); }
  bool lt(EventIdx a, EventIdx b) const { return a != b && leq(a, b); }

  const std::vector<EventSet>& maximal_consistent() const { return maximal_; }

  EventSet empty_set() const { return EventSet(size()); }
  EventSet full_set() const { return EventSet::full(size()); }

  bool consistent(const EventSet& x) const {
    return std::any_of(maximal_.begin(), maximal_.end(), [&](const EventSet& m) { return x.subset_of(m); });
  }

  bool down_closed(const EventSet& x) const {
    bool ok = true;
    x.for_each([&](EventIdx e) { ok = ok && down_[e].subset_of(x); });
    return ok;
  }

  bool is_configuration(const EventSet& x) const { return down_closed(x) && consistent(x); }

  EventSet down_closure(const EventSet& x) const {
    EventSet r(size());
    x.for_each([&](EventIdx e) { r |= down_[e]; });
    return r;
  }

  /// x ∪ {e} is a configuration, for x a configuration not containing e.
  bool enabled(const EventSet& x, EventIdx e) const {
    return !x.test(e) && strict_down(e).subset_of(x) && consistent(x.with(e));
  }

  /// e is an immediate cause of e' (e ↣ e').
  bool immediate(EventIdx e, EventIdx e2) const {
    if (!lt(e, e2)) return false;
    EventSet between = up_[e] & down_[e2];
    return between.count() == 2;
  }

  std::vector<std::pair<EventIdx, EventIdx>> immediate_causes() const {
    std::vector<std::pair<EventIdx, EventIdx>> out;
    for (EventIdx a = 0; a < size(); ++a)
      for (EventIdx b = 0; b < size(); ++b)
        if (immediate(a, b)) out.emplace_back(a, b);
    return out;
  }

  /// All finite configurations, in canonical order (cached after the first call).
  const std::vector<EventSet>& configurations(std::size_t cap = Limits{}.max_configs) const;

  std::string format(const EventSet& x) const {
    std::string s = "{";
    bool first = true;
    x.for_each([&](EventIdx e) {
      if (!first) s += ",";
      s += names_[e];
      first = false;
    });
    return s + "}";
  }

  friend bool operator==(const EventStructure& a, const EventStructure& b) {
    return a.names_ == b.names_ && a.down_ == b.down_ && a.maximal_ == b.maximal_;
  }

 private:
  struct Cache {
    std::mutex mu;
    bool ready = false;
    std::vector<EventSet> configs;
  };

  std::vector<std::string> names_;
  std::vector<EventSet> down_;
  std::vector<EventSet> up_;
  std::vector<EventSet> maximal_;
  std::unordered_map<std::string, EventIdx> index_;
  std::shared_ptr<Cache> cache_;
};

/// Breadth-first enumeration of the down-closed sets accepted by `accept`,
/// adding one enabled event at a time. `accept` must be hereditary.
template <class Accept>
std::vector<EventSet> enumerate_down_closed(const std::vector<EventSet>& down, Accept&& accept, std::size_t cap,
                                            std::vector<EventSet>* maximal_out = nullptr) {
  const std::size_t n = down.size();
  std::vector<EventSet> out;
  std::unordered_set<EventSet, EventSetHash> seen;
  std::vector<EventSet> frontier{EventSet(n)};
  seen.insert(frontier.front());
  out.push_back(frontier.front());
  std::vector<EventSet> strict(n);
  for (std::size_t e = 0; e < n; ++e) strict[e] = down[e].without(e);
  while (!frontier.empty()) {
    std::vector<EventSet> next;
    for (const auto& x : frontier) {
      bool extended = false;
      for (std::size_t e = 0; e < n; ++e) {
        if (x.test(e) || !strict[e].subset_of(x)) continue;
        EventSet y = x.with(e);
        if (!accept(y)) continue;
        extended = true;
        if (seen.insert(y).second) {
          if (seen.size() > cap) throw SizeBoundExceeded("configurations", cap);
          next.push_back(y);
          out.push_back(y);
        }
      }
      if (!extended && maximal_out) maximal_out->push_back(x);
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

inline const std::vector<EventSet>& EventStructure::configurations(std::size_t cap) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->ready) {
    cache_->configs = enumerate_down_closed(down_, [&](const EventSet& y) { return consistent(y); }, cap);
    cache_->ready = true;
  }
  if (cache_->configs.size() > cap) throw SizeBoundExceeded("configurations", cap);
  return cache_->configs;
}

/// Builds a structure whose consistent sets are those X with `accept([X])`.
template <class Accept>
EventStructure structure_from_predicate(std::vector<std::string> names, std::vector<EventSet> down, Accept&& accept,
                                        std::size_t cap = Limits{}.max_configs) {
  std::vector<EventSet> maximal;
  enumerate_down_closed(down, accept, cap, &maximal);
  return EventStructure(std::move(names), std::move(down), std::move(maximal));
}

/// Reflexive-transitive closure of a relation given as edges (a < b), or the
/// cycle that prevents it from being a partial order.
struct OrderClosure {
  std::vector<EventSet> down;
  std::vector<EventIdx> cycle;
};

inline OrderClosure close_order(std::size_t n, const std::vector<std::pair<EventIdx, EventIdx>>& edges) {
  std::vector<std::vector<EventIdx>> preds(n);
  for (auto [a, b] : edges) preds[b].push_back(a);
  OrderClosure r;
  r.down.assign(n, EventSet(n));
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<EventIdx> stack;
  std::function<bool(EventIdx)> visit = [&](EventIdx v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    r.down[v].set(v);
    for (EventIdx p : preds[v]) {
      if (state[p] == 1) {
        auto it = std::find(stack.begin(), stack.end(), p);
        r.cycle.assign(it, stack.end());
        std::reverse(r.cycle.begin(), r.cycle.end());
        return false;
      }
      if (state[p] == 0 && !visit(p)) return false;
      r.down[v] |= r.down[p];
    }
    stack.pop_back();
    state[v] = 2;
    return true;
  };
  for (EventIdx v = 0; v < n; ++v)
    if (state[v] == 0 && !visit(v)) return r;
  return r;
}

/// Unvalidated description of an event structure, as written by a user.
struct RawStructure {
  std::vector<std::string> events;
  std::vector<std::pair<std::string, std::string>> causes;     // a < b
  std::vector<std::pair<std::string, std::string>> conflicts;  // a ~ b
  std::optional<std::vector<std::vector<std::string>>> consistent;  // overrides conflicts
};

/// Checks every axiom, returning the structure or throwing ValidationError
/// with one diagnostic per violation.
inline EventStructure validate_event_structure(const RawStructure& raw, const Limits& limits = {}) {
  Diagnostics diags;
  const std::size_t n = raw.events.size();
  std::unordered_map<std::string, EventIdx> idx;
  for (EventIdx e = 0; e < n; ++e)
    if (!idx.emplace(raw.events[e], e).second) diags.push_back({DiagKind::DuplicateEvent, raw.events[e]});
  auto lookup = [&](const std::string& s) -> std::optional<EventIdx> {
    auto it = idx.find(s);
    if (it == idx.end()) {
      diags.push_back({DiagKind::UnknownEvent, s});
      return std::nullopt;
    }
    return it->second;
  };
  std::vector<std::pair<EventIdx, EventIdx>> edges;
  for (const auto& [a, b] : raw.causes) {
    auto ia = lookup(a), ib = lookup(b);
    if (ia && ib) edges.emplace_back(*ia, *ib);
  }
  std::vector<std::pair<EventIdx, EventIdx>> conflicts;
  for (const auto& [a, b] : raw.conflicts) {
    auto ia = lookup(a), ib = lookup(b);
    if (ia && ib) conflicts.emplace_back(*ia, *ib);
  }
  std::vector<EventSet> listed;
  if (raw.consistent) {
    for (const auto& set : *raw.consistent) {
      EventSet s(n);
      for (const auto& a : set)
        if (auto ia = lookup(a)) s.set(*ia);
      listed.push_back(s);
    }
  }
  if (!diags.empty()) throw ValidationError(diags);

  auto closure = close_order(n, edges);
  if (!closure.cycle.empty()) {
    std::string path;
    for (auto e : closure.cycle) path += raw.events[e] + " < ";
    path += raw.events[closure.cycle.front()];
    throw ValidationError({{DiagKind::CycleInCause, path}});
  }
  auto& down = closure.down;

  std::vector<EventSet> maximal;
  if (raw.consistent) {
    maximal = maximal_members(listed);
    if (maximal.empty()) maximal.push_back(EventSet(n));
    for (const auto& m : maximal) {
      EventSet closed(n);
      m.for_each([&](EventIdx e) { closed |= down[e]; });
      if (!(closed == m)) {
        std::string miss;
        (closed - m).for_each([&](EventIdx e) { miss += (miss.empty() ? "" : ",") + raw.events[e]; });
        std::string ms;
        m.for_each([&](EventIdx e) { ms += (ms.empty() ? "" : ",") + raw.events[e]; });
        diags.push_back({DiagKind::ConsistencyNotDownClosed, "{" + ms + "} lacks causes {" + miss + "}"});
      }
    }
  } else {
    std::vector<EventSet> conflict_with(n, EventSet(n));
    for (auto [a, b] : conflicts) {
      conflict_with[a].set(b);
      conflict_with[b].set(a);
    }
    auto accept = [&](const EventSet& y) {
      bool ok = true;
      y.for_each([&](EventIdx e) { ok = ok && !conflict_with[e].intersects(y); });
      return ok;
    };
    for (EventIdx e = 0; e < n; ++e)
      if (!accept(down[e])) diags.push_back({DiagKind::InconsistentSingleton, raw.events[e]});
    if (diags.empty()) enumerate_down_closed(down, accept, limits.max_configs, &maximal);
  }
  if (diags.empty()) {
    for (EventIdx e = 0; e < n; ++e) {
      EventSet single(n, {e});
      bool ok = std::any_of(maximal.begin(), maximal.end(), [&](const EventSet& m) { return single.subset_of(m); });
      if (!ok) diags.push_back({DiagKind::InconsistentSingleton, raw.events[e]});
    }
  }
  if (!diags.empty()) throw ValidationError(diags);
  return EventStructure(raw.events, std::move(down), std::move(maximal));
}

inline const std::vector<EventSet>& enumerate_configurations(const EventStructure& e, const Limits& limits = {}) {
  return e.configurations(limits.max_configs);
}

struct Relations {
  std::vector<std::pair<EventIdx, EventIdx>> immediate;
  std::vector<std::pair<EventIdx, EventIdx>> concurrent;  // a < b as indices
};

inline Relations derive_relations(const EventStructure& e) {
  Relations r;
  r.immediate = e.immediate_causes();
  for (EventIdx a = 0; a < e.size(); ++a)
    for (EventIdx b = a + 1; b < e.size(); ++b)
      if (!e.leq(a, b) && !e.leq(b, a) && e.consistent(EventSet(e.size(), {a, b}))) r.concurrent.emplace_back(a, b);
  return r;
}

inline EventSet down_closure(const EventStructure& e, const std::vector<std::string>& names) {
  EventSet x(e.size());
  for (const auto& n : names) x.set(e.index_of(n));
  return e.down_closure(x);
}

/// E↓V: order and consistency restricted to V. Events keep their relative
/// order; `kept` (if given) receives the old index of each new event.
inline EventStructure project(const EventStructure& e, const EventSet& visible, std::vector<EventIdx>* kept = nullptr) {
  std::vector<EventIdx> old = visible.elements();
  std::vector<EventIdx> renum(e.size(), static_cast<EventIdx>(-1));
  for (EventIdx i = 0; i < old.size(); ++i) renum[old[i]] = i;
  const std::size_t m = old.size();
  auto restrict = [&](const EventSet& s) {
    EventSet r(m);
    (s & visible).for_each([&](EventIdx d) { r.set(renum[d]); });
    return r;
  };
  std::vector<std::string> names;
  std::vector<EventSet> down;
  for (auto o : old) {
    names.push_back(e.name(o));
    down.push_back(restrict(e.down(o)));
  }
  std::vector<EventSet> maximal;
  for (const auto& mx : e.maximal_consistent()) maximal.push_back(restrict(mx));
  if (kept) *kept = old;
  return EventStructure(std::move(names), std::move(down), std::move(maximal));
}

inline EventStructure project(const EventStructure& e, const std::vector<std::string>& names) {
  EventSet v(e.size());
  for (const auto& n : names) v.set(e.index_of(n));
  return project(e, v);
}

/// Minimal binary conflicts: {a,b} inconsistent while [a]∪[b] minus either
/// endpoint is consistent.
inline std::vector<std::pair<EventIdx, EventIdx>> minimal_conflicts(const EventStructure& e) {
  std::vector<std::pair<EventIdx, EventIdx>> out;
  for (EventIdx a = 0; a < e.size(); ++a)
    for (EventIdx b = a + 1; b < e.size(); ++b) {
      EventSet both = e.down(a) | e.down(b);
      if (e.consistent(both)) continue;
      if (e.consistent(both.without(a)) && e.consistent(both.without(b))) out.emplace_back(a, b);
    }
  return out;
}

/// True when consistency is generated by its minimal binary conflicts.
inline bool binary_consistency(const EventStructure& e) {
  const auto conflicts = minimal_conflicts(e);
  std::vector<EventSet> with(e.size(), EventSet(e.size()));
  for (auto [a, b] : conflicts) {
    with[a].set(b);
    with[b].set(a);
  }
  std::vector<EventSet> down;
  for (EventIdx i = 0; i < e.size(); ++i) down.push_back(e.down(i));
  std::vector<EventSet> maximal;
  enumerate_down_closed(
      down,
      [&](const EventSet& y) {
        bool ok = true;
        y.for_each([&](EventIdx i) { ok = ok && !with[i].intersects(y); });
        return ok;
      },
      Limits{}.max_configs, &maximal);
  return maximal_members(maximal) == e.maximal_consistent();
}

/// Same structure with events renamed.
inline EventStructure with_names(const EventStructure& e, std::vector<std::string> names) {
  std::vector<EventSet> down;
  for (EventIdx i = 0; i < e.size(); ++i) down.push_back(e.down(i));
  return EventStructure(std::move(names), std::move(down), e.maximal_consistent());
}

/// Convenience builder for fixtures and tests; throws ValidationError.
inline EventStructure make_structure(std::vector<std::string> events,
                                     std::vector<std::pair<std::string, std::string>> causes = {},
                                     std::vector<std::pair<std::string, std::string>> conflicts = {}) {
  RawStructure raw{std::move(events), std::move(causes), std::move(conflicts), std::nullopt};
  return validate_event_structure(raw);
}

}  // namespace esg
