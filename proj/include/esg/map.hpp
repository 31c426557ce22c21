#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"

namespace esg {

inline constexpr EventIdx kUndefined = std::numeric_limits<EventIdx>::max();

/// A partial map of event structures, stored as an assignment on source indices.
struct ESMap {
  EventStructure source;
  EventStructure target;
  std::vector<EventIdx> f;

  ESMap() = default;
  ESMap(EventStructure s, EventStructure t, std::vector<EventIdx> assignment)
      : source(std::move(s)), target(std::move(t)), f(std::move(assignment)) {}

  bool defined(EventIdx e) const { return f[e] != kUndefined; }
  EventIdx operator()(EventIdx e) const { return f[e]; }

  bool total() const {
    for (auto v : f)
      if (v == kUndefined) return false;
    return true;
  }

  EventSet domain() const {
    EventSet d(source.size());
    for (EventIdx e = 0; e < f.size(); ++e)
      if (defined(e)) d.set(e);
    return d;
  }

  /// Direct image f x.
  EventSet image(const EventSet& x) const {
    EventSet r(target.size());
    x.for_each([&](EventIdx e) {
      if (defined(e)) r.set(f[e]);
    });
    return r;
  }
};

inline ESMap identity_map(const EventStructure& e) {
  std::vector<EventIdx> f(e.size());
  for (EventIdx i = 0; i < e.size(); ++i) f[i] = i;
  return ESMap(e, e, std::move(f));
}

/// g ∘ f.
inline ESMap compose_maps(const ESMap& g, const ESMap& f) {
  std::vector<EventIdx> h(f.f.size(), kUndefined);
  for (EventIdx e = 0; e < h.size(); ++e)
    if (f.defined(e)) h[e] = g.f[f.f[e]];
  return ESMap(f.source, g.target, std::move(h));
}

/// Extensional equality of assignments.
inline bool same_assignment(const ESMap& a, const ESMap& b) { return a.f == b.f; }

struct MapReport {
  bool valid = true;
  bool total = true;
  bool rigid = true;
  Diagnostics diagnostics;
};

/// Checks that f sends configurations to configurations and is locally
/// injective, over every configuration of the source.
inline MapReport validate_map(const ESMap& m, const Limits& limits = {}) {
  MapReport r;
  const auto& src = m.source;
  const auto& tgt = m.target;
  r.total = m.total();
  for (EventIdx a = 0; a < src.size() && r.rigid; ++a)
    for (EventIdx b = 0; b < src.size(); ++b)
      if (src.leq(a, b) && m.defined(a) && m.defined(b) && !tgt.leq(m(a), m(b))) {
        r.rigid = false;
        break;
      }
  for (const auto& x : src.configurations(limits.max_configs)) {
    std::vector<EventIdx> seen(tgt.size(), kUndefined);
    bool injective = true;
    x.for_each([&](EventIdx e) {
      if (!injective || !m.defined(e)) return;
      auto& slot = seen[m(e)];
      if (slot != kUndefined) {
        r.diagnostics.push_back({DiagKind::LocalInjectivityViolation,
                                 src.format(x) + ", " + src.name(slot) + ", " + src.name(e)});
        injective = false;
      } else {
        slot = e;
      }
    });
    if (!injective) break;
    EventSet img = m.image(x);
    if (!tgt.is_configuration(img)) {
      r.diagnostics.push_back({DiagKind::ImageNotConfiguration, src.format(x)});
      break;
    }
  }
  r.valid = r.diagnostics.empty();
  return r;
}

/// The partial map E ⇀ E↓V that is the identity on V.
inline ESMap projection_map(const EventStructure& e, const EventSet& visible) {
  std::vector<EventIdx> kept;
  EventStructure p = project(e, visible, &kept);
  std::vector<EventIdx> f(e.size(), kUndefined);
  for (EventIdx i = 0; i < kept.size(); ++i) f[kept[i]] = i;
  return ESMap(e, std::move(p), std::move(f));
}

/// f = f1 ∘ f0 with f0 the projection onto the domain of f and f1 total.
struct Factorization {
  ESMap f0;
  ESMap f1;
};

inline Factorization factorize(const ESMap& m) {
  Factorization r;
  r.f0 = projection_map(m.source, m.domain());
  std::vector<EventIdx> g;
  for (EventIdx e = 0; e < m.source.size(); ++e)
    if (m.defined(e)) g.push_back(m(e));
  r.f1 = ESMap(r.f0.target, m.target, std::move(g));
  return r;
}

}  // namespace esg
