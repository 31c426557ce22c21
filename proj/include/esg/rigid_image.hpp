#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "esg/event_structure.hpp"
#include "esg/games.hpp"
#include "esg/map.hpp"
#include "esg/strategy.hpp"

namespace esg {

/// An augmentation of a target configuration with a top element: the carrier
/// σ[s], with the order of [s] transported along σ.
struct PointedAugmentation {
  EventIdx top = 0;
  EventSet carrier;
  std::vector<EventSet> below;  // per carrier element (by target index), its down-set; empty elsewhere

  friend bool operator==(const PointedAugmentation& a, const PointedAugmentation& b) {
    return a.top == b.top && a.carrier == b.carrier && a.below == b.below;
  }

  /// Inclusion of augmentations: carrier ⊆, down-closed in `o`, same order on it.
  bool included_in(const PointedAugmentation& o) const {
    if (!carrier.subset_of(o.carrier)) return false;
    bool ok = true;
    carrier.for_each([&](EventIdx e) { ok = ok && o.below[e] == below[e]; });
    return ok;
  }
};

struct RigidImage {
  Strategy sigma0;
  ESMap f;  // S → S0, rigid epi
  std::vector<PointedAugmentation> primes;
};

inline PointedAugmentation augmentation_of(const BareStrategy& s, EventIdx e) {
  const std::size_t nt = s.target.size();
  PointedAugmentation p{s.sigma(e), s.sigma.image(s.S.es.down(e)), std::vector<EventSet>(nt, EventSet(nt))};
  s.S.es.down(e).for_each([&](EventIdx d) { p.below[s.sigma(d)] = s.sigma.image(s.S.es.down(d)); });
  return p;
}

inline RigidImage rigid_image(const Strategy& s) {
  RigidImage r;
  std::vector<EventIdx> f(s.S.size());
  for (EventIdx e = 0; e < s.S.size(); ++e) {
    auto p = augmentation_of(s, e);
    auto it = std::find(r.primes.begin(), r.primes.end(), p);
    f[e] = static_cast<EventIdx>(it - r.primes.begin());
    if (it == r.primes.end()) r.primes.push_back(std::move(p));
  }
  const std::size_t n = r.primes.size();
  std::vector<std::string> names;
  std::unordered_set<std::string> taken;
  std::vector<Polarity> pol;
  std::vector<EventIdx> assign;
  for (const auto& p : r.primes) {
    std::string nm = s.target.es.name(p.top);
    for (int k = 2; taken.count(nm); ++k) nm = s.target.es.name(p.top) + "/" + std::to_string(k);
    taken.insert(nm);
    names.push_back(nm);
    pol.push_back(s.target.pol[p.top]);
    assign.push_back(p.top);
  }
  std::vector<EventSet> down(n, EventSet(n));
  for (EventIdx a = 0; a < n; ++a)
    for (EventIdx b = 0; b < n; ++b)
      if (r.primes[a].included_in(r.primes[b])) down[b].set(a);
  std::vector<EventSet> maxes;
  for (const auto& m : s.S.es.maximal_consistent()) {
    EventSet img(n);
    m.for_each([&](EventIdx e) { img.set(f[e]); });
    maxes.push_back(img);
  }
  EventStructure s0(std::move(names), std::move(down), std::move(maxes));
  r.f = ESMap(s.S.es, s0, std::move(f));
  r.sigma0 = Strategy(BareStrategy(s.A, PolarisedStructure(), s.B, PolarisedStructure(s0, std::move(pol)), std::move(assign)));
  return r;
}

/// (σ0, f M_S).
inline StoppingStrategy rigid_image_stopping(const StoppingStrategy& s, ESMap* f_out = nullptr) {
  auto r = rigid_image(s.strat);
  std::vector<EventSet> m;
  for (const auto& x : s.stopping) m.push_back(r.f.image(x));
  if (f_out) *f_out = r.f;
  return StoppingStrategy(std::move(r.sigma0), std::move(m));
}

/// Report on the candidate axioms for stopping configurations; never enforced.
struct StoppingLint {
  bool axiom_i = true;   // every configuration lies below a stopping one
  bool axiom_ii = true;  // +-maximal configurations below a stopping one are stopping
  bool plus_maximal_stopping = true;  // every +-maximal configuration is stopping
  std::string witness_i, witness_ii, witness_plus;
};

inline StoppingLint lint_stopping(const StoppingStrategy& s, const Limits& limits = {}) {
  StoppingLint l;
  const auto& S = s.strat.S;
  auto is_stop = [&](const EventSet& x) { return std::find(s.stopping.begin(), s.stopping.end(), x) != s.stopping.end(); };
  for (const auto& x : S.es.configurations(limits.max_configs)) {
    const bool below = std::any_of(s.stopping.begin(), s.stopping.end(), [&](const EventSet& y) { return x.subset_of(y); });
    if (!below && l.axiom_i) {
      l.axiom_i = false;
      l.witness_i = S.es.format(x);
    }
    if (!is_plus_maximal(S, x) || is_stop(x)) continue;
    if (below && l.axiom_ii) {
      l.axiom_ii = false;
      l.witness_ii = S.es.format(x);
    }
    if (l.plus_maximal_stopping) {
      l.plus_maximal_stopping = false;
      l.witness_plus = S.es.format(x);
    }
  }
  return l;
}

}  // namespace esg
