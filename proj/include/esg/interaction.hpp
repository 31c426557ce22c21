#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"
#include "esg/games.hpp"
#include "esg/map.hpp"
#include "esg/strategy.hpp"

namespace esg {

using EventPair = std::pair<EventIdx, EventIdx>;

/// θ: x ≅ fx = gy ≅ y with the order generated on the pairs.
struct SecuredBijection {
  std::vector<EventPair> pairs;
  std::vector<EventSet> down;  // reflexive down-sets over pair positions
};

enum class BijectionFailure { None, ImageMismatch, Cycle };

struct BijectionResult {
  std::optional<SecuredBijection> bijection;
  BijectionFailure failure = BijectionFailure::None;
  std::vector<EventPair> cycle;
};

/// Decides whether x and y form a secured bijection over f and g.
inline BijectionResult secured_bijection(const ESMap& f, const ESMap& g, const EventSet& x, const EventSet& y) {
  BijectionResult r;
  if (!(f.image(x) == g.image(y)) || f.image(x).count() != x.count() || g.image(y).count() != y.count()) {
    r.failure = BijectionFailure::ImageMismatch;
    return r;
  }
  std::vector<EventIdx> by_image(f.target.size(), kUndefined);
  y.for_each([&](EventIdx b) { by_image[g(b)] = b; });
  SecuredBijection s;
  x.for_each([&](EventIdx a) { s.pairs.emplace_back(a, by_image[f(a)]); });
  std::vector<EventPair> edges;
  for (EventIdx i = 0; i < s.pairs.size(); ++i)
    for (EventIdx j = 0; j < s.pairs.size(); ++j)
      if (i != j && (f.source.leq(s.pairs[i].first, s.pairs[j].first) || g.source.leq(s.pairs[i].second, s.pairs[j].second)))
        edges.emplace_back(i, j);
  auto closure = close_order(s.pairs.size(), edges);
  if (!closure.cycle.empty()) {
    r.failure = BijectionFailure::Cycle;
    for (auto i : closure.cycle) r.cycle.push_back(s.pairs[i]);
    return r;
  }
  s.down = std::move(closure.down);
  r.bijection = std::move(s);
  return r;
}

/// Pr(B) for the family B of secured bijections of total maps f: X → Z and
/// g: Y → Z, with its projections and the correspondence θ ↦ γ(θ).
struct Pullback {
  EventStructure P;
  ESMap pi1;
  ESMap pi2;
  std::vector<EventPair> pairs;            // all (a,b) with f(a) = g(b)
  std::vector<EventSet> prime_pairs;       // pair-set of each prime, over `pairs`
  std::vector<EventIdx> top;               // top pair of each prime
  std::vector<EventSet> secured;           // every secured bijection, as pair-sets
  std::unordered_map<EventSet, EventSet, EventSetHash> gamma;  // pair-set ↦ configuration of P

  /// x ∧ y, when x and y form a secured bijection.
  std::optional<EventSet> meet(const ESMap& f, const ESMap& g, const EventSet& x, const EventSet& y) const {
    const EventSet fx = f.image(x);
    if (!(fx == g.image(y)) || fx.count() != x.count() || g.image(y).count() != y.count()) return std::nullopt;
    std::vector<EventIdx> by_image(f.target.size(), kUndefined);
    y.for_each([&](EventIdx b) { by_image[g(b)] = b; });
    EventSet key(pairs.size());
    bool ok = true;
    x.for_each([&](EventIdx a) {
      auto it = pair_index.find(EventPair{a, by_image[f(a)]});
      if (it == pair_index.end())
        ok = false;
      else
        key.set(it->second);
    });
    if (!ok) return std::nullopt;
    auto it = gamma.find(key);
    if (it == gamma.end()) return std::nullopt;
    return it->second;
  }

  /// β: the pair-set ∪y of a configuration y of P.
  EventSet beta(const EventSet& y) const {
    EventSet r(pairs.size());
    y.for_each([&](EventIdx p) { r |= prime_pairs[p]; });
    return r;
  }

  struct PairHash {
    std::size_t operator()(const EventPair& p) const { return std::hash<std::uint64_t>{}((std::uint64_t{p.first} << 32) | p.second); }
  };
  std::unordered_map<EventPair, EventIdx, PairHash> pair_index;
};

using PairNamer = std::function<std::string(EventIdx, EventIdx)>;

inline Pullback pullback(const ESMap& f, const ESMap& g, const Limits& limits = {}, PairNamer namer = nullptr) {
  const auto& X = f.source;
  const auto& Y = g.source;
  Pullback pb;
  std::vector<std::vector<EventIdx>> by_image(f.target.size());
  for (EventIdx b = 0; b < Y.size(); ++b) by_image[g(b)].push_back(b);
  for (EventIdx a = 0; a < X.size(); ++a)
    for (EventIdx b : by_image[f(a)]) {
      pb.pair_index.emplace(EventPair{a, b}, static_cast<EventIdx>(pb.pairs.size()));
      pb.pairs.emplace_back(a, b);
    }
  const std::size_t np = pb.pairs.size();

  struct State {
    EventSet pairs, x, y, z;
    std::vector<EventIdx> primes;
  };
  std::unordered_map<EventSet, EventIdx, EventSetHash> prime_id;
  std::unordered_set<EventSet, EventSetHash> seen;
  std::vector<State> states{{EventSet(np), EventSet(X.size()), EventSet(Y.size()), EventSet(f.target.size()), {}}};
  seen.insert(states[0].pairs);
  std::vector<bool> maximal;
  for (std::size_t i = 0; i < states.size(); ++i) {
    bool extended = false;
    for (EventIdx k = 0; k < np; ++k) {
      const State& st = states[i];
      auto [a, b] = pb.pairs[k];
      if (st.z.test(f(a)) || !X.enabled(st.x, a) || !Y.enabled(st.y, b)) continue;
      extended = true;
      EventSet key = st.pairs.with(k);
      if (seen.count(key)) continue;
      EventSet pp = EventSet(np).with(k);
      for (EventIdx q : st.primes) {
        auto [a2, b2] = pb.pairs[pb.top[q]];
        if (X.lt(a2, a) || Y.lt(b2, b)) pp |= pb.prime_pairs[q];
      }
      auto [it, fresh] = prime_id.emplace(pp, static_cast<EventIdx>(pb.prime_pairs.size()));
      if (fresh) {
        if (pb.prime_pairs.size() >= limits.max_primes) throw SizeBoundExceeded("pullback primes", limits.max_primes);
        pb.prime_pairs.push_back(pp);
        pb.top.push_back(k);
      }
      State next{key, st.x.with(a), st.y.with(b), st.z.with(f(a)), st.primes};
      next.primes.push_back(it->second);
      seen.insert(key);
      if (seen.size() > limits.max_configs) throw SizeBoundExceeded("secured bijections", limits.max_configs);
      states.push_back(std::move(next));
    }
    maximal.push_back(!extended);
  }

  const std::size_t n = pb.prime_pairs.size();
  std::vector<std::string> names;
  std::unordered_set<std::string> taken;
  for (EventIdx p = 0; p < n; ++p) {
    auto [a, b] = pb.pairs[pb.top[p]];
    const std::string base = namer ? namer(a, b) : X.name(a) + "@" + Y.name(b);
    std::string nm = base;
    for (int k = 2; taken.count(nm); ++k) nm = base + "/" + std::to_string(k);
    taken.insert(nm);
    names.push_back(nm);
  }
  std::vector<EventSet> down(n, EventSet(n));
  for (EventIdx p = 0; p < n; ++p)
    for (EventIdx q = 0; q < n; ++q)
      if (pb.prime_pairs[q].subset_of(pb.prime_pairs[p])) down[p].set(q);
  std::vector<EventSet> maxes;
  for (std::size_t i = 0; i < states.size(); ++i) {
    EventSet c = EventSet::of(n, states[i].primes);
    pb.gamma.emplace(states[i].pairs, c);
    pb.secured.push_back(states[i].pairs);
    if (maximal[i]) maxes.push_back(c);
  }
  canonicalize(pb.secured);
  pb.P = EventStructure(std::move(names), std::move(down), std::move(maxes));
  std::vector<EventIdx> p1(n), p2(n);
  for (EventIdx p = 0; p < n; ++p) std::tie(p1[p], p2[p]) = pb.pairs[pb.top[p]];
  pb.pi1 = ESMap(pb.P, X, std::move(p1));
  pb.pi2 = ESMap(pb.P, Y, std::move(p2));
  return pb;
}

/// τ⊛σ for σ: S → A⊥∥M∥B and τ: T → B⊥∥N∥C, as a bare strategy into
/// A⊥∥(M∥B⁰∥N)∥C, together with the pullback it came from.
struct Interaction {
  BareStrategy sigma;
  BareStrategy tau;
  BareStrategy strategy;
  Pullback pb;
  ESMap left;   // S∥N∥C → A∥M∥B∥N∥C
  ESMap right;  // A∥M∥T → A∥M∥B∥N∥C

  std::size_t size_A() const { return sigma.A.size(); }
  std::size_t size_M() const { return sigma.N.size(); }
  std::size_t size_B() const { return sigma.B.size(); }
  std::size_t size_N() const { return tau.N.size(); }

  /// x ∥ y_0 ∥ y_C as a configuration of S∥N∥C.
  EventSet pad_left(const EventSet& x, const EventSet& y) const {
    const std::size_t ns = sigma.S.size();
    EventSet r(left.source.size());
    x.for_each([&](EventIdx s) { r.set(s); });
    tau.sigma.image(y).for_each([&](EventIdx t) {
      if (t >= size_B()) r.set(ns + (t - size_B()));
    });
    return r;
  }
  /// x_A ∥ x_0 ∥ y as a configuration of A∥M∥T.
  EventSet pad_right(const EventSet& x, const EventSet& y) const {
    const std::size_t am = size_A() + size_M();
    EventSet r(right.source.size());
    sigma.sigma.image(x).for_each([&](EventIdx t) {
      if (t < am) r.set(t);
    });
    y.for_each([&](EventIdx t) { r.set(am + t); });
    return r;
  }

  /// y⊛x, when defined.
  std::optional<EventSet> pair(const EventSet& x, const EventSet& y) const {
    return pb.meet(left, right, pad_left(x, y), pad_right(x, y));
  }

  /// The S- and T-parts of a configuration of T⊛S.
  std::pair<EventSet, EventSet> split(const EventSet& w) const {
    EventSet x(sigma.S.size()), y(tau.S.size());
    const std::size_t am = size_A() + size_M();
    w.for_each([&](EventIdx p) {
      const EventIdx u = pb.pi1(p), v = pb.pi2(p);
      if (u < sigma.S.size()) x.set(u);
      if (v >= am) y.set(v - am);
    });
    return {x, y};
  }
};

inline void require_same_game(const Game& b, const Game& b2) {
  if (!(b.es == b2.es) || b.pol != b2.pol) throw GameMismatch("middle games differ");
}

inline Interaction interact(const BareStrategy& sigma, const BareStrategy& tau, const Limits& limits = {}) {
  require_same_game(sigma.B, tau.A);
  const auto& A = sigma.A;
  const auto& M = sigma.N;
  const auto& B = sigma.B;
  const auto& N = tau.N;
  const auto& C = tau.B;
  const std::size_t a = A.size(), m = M.size(), b = B.size(), nn = N.size(), c = C.size();
  EventStructure Z = parallel_es({&A.es, &M.es, &B.es, &N.es, &C.es});

  EventStructure X = parallel_es({&sigma.S.es, &N.es, &C.es});
  std::vector<EventIdx> fl;
  for (EventIdx s = 0; s < sigma.S.size(); ++s) fl.push_back(sigma.sigma(s));
  for (EventIdx k = 0; k < nn + c; ++k) fl.push_back(static_cast<EventIdx>(a + m + b + k));
  EventStructure Y = parallel_es({&A.es, &M.es, &tau.S.es});
  std::vector<EventIdx> gr;
  for (EventIdx k = 0; k < a + m; ++k) gr.push_back(k);
  for (EventIdx t = 0; t < tau.S.size(); ++t) gr.push_back(static_cast<EventIdx>(a + m + tau.sigma(t)));

  Interaction in;
  in.sigma = sigma;
  in.tau = tau;
  in.left = ESMap(X, Z, std::move(fl));
  in.right = ESMap(Y, Z, std::move(gr));
  const std::size_t ns = sigma.S.size();
  PairNamer namer = [&](EventIdx u, EventIdx v) {
    const bool su = u < ns, tv = v >= a + m;
    if (su && tv) return sigma.S.es.name(u) + "@" + tau.S.es.name(v - a - m);
    if (su) return sigma.S.es.name(u);
    return tau.S.es.name(v - a - m);
  };
  in.pb = pullback(in.left, in.right, limits, namer);

  PolarisedStructure mid = parallel({M, neutralise(B), N});
  const auto& P = in.pb.P;
  std::vector<Polarity> pol(P.size());
  std::vector<EventIdx> assign(P.size());
  const PolarisedStructure dual_a = dual(static_cast<const PolarisedStructure&>(A));
  for (EventIdx p = 0; p < P.size(); ++p) {
    const EventIdx z = in.left(in.pb.pi1(p));
    assign[p] = z;
    if (z < a)
      pol[p] = dual_a.pol[z];
    else if (z < a + m + b + nn)
      pol[p] = Polarity::Neutral;
    else
      pol[p] = C.pol[z - a - m - b - nn];
  }
  in.strategy = BareStrategy(A, mid, C, PolarisedStructure(P, std::move(pol)), std::move(assign));
  return in;
}

/// τ⊙σ = (τ⊛σ)↓.
inline Strategy compose(const BareStrategy& sigma, const BareStrategy& tau, const Limits& limits = {}) {
  return visible_part(interact(sigma, tau, limits).strategy).strategy;
}

/// Both configurations of a pairing: y⊛x and y⊙x.
struct PairedConfig {
  EventSet interaction;
  EventSet visible;
};

inline std::optional<PairedConfig> pair_configs(const Interaction& in, const VisiblePart& vp, const EventSet& x,
                                                const EventSet& y) {
  auto w = in.pair(x, y);
  if (!w) return std::nullopt;
  return PairedConfig{*w, vp.down(*w)};
}

inline void require_race_free(const Game& g, const char* which, const Limits& limits) {
  if (!is_race_free(g, limits)) throw NotRaceFree(std::string("game ") + which + " is not race-free");
}

/// (τ⊛σ, M_T⊛M_S).
struct StoppingInteraction {
  Interaction interaction;
  std::vector<EventSet> stopping;
};

inline StoppingInteraction interact_stopping(const StoppingStrategy& s, const StoppingStrategy& t,
                                             const Limits& limits = {}) {
  require_race_free(s.strat.A, "A", limits);
  require_race_free(s.strat.B, "B", limits);
  require_race_free(t.strat.B, "C", limits);
  StoppingInteraction r{interact(s.strat, t.strat, limits), {}};
  for (const auto& x : s.stopping)
    for (const auto& y : t.stopping)
      if (auto w = r.interaction.pair(x, y)) r.stopping.push_back(*w);
  canonicalize(r.stopping);
  return r;
}

/// (τ⊙σ, M_T⊙M_S).
inline StoppingStrategy compose_stopping(const StoppingStrategy& s, const StoppingStrategy& t,
                                         const Limits& limits = {}) {
  auto si = interact_stopping(s, t, limits);
  auto vp = visible_part(si.interaction.strategy);
  std::vector<EventSet> m;
  for (const auto& w : si.stopping) m.push_back(vp.down(w));
  return StoppingStrategy(std::move(vp.strategy), std::move(m));
}

/// Copycat as a strategy from A to A.
inline Strategy copycat_strategy(const Game& a, const Limits& limits = {}) {
  auto cc = copycat(a, limits);
  return Strategy(BareStrategy(a, PolarisedStructure(), a, cc.cc_structure, cc.cc.f));
}

/// (cc_A, {x∥x : x ∈ C(A)}).
inline StoppingStrategy copycat_stopping(const Game& a, const Limits& limits = {}) {
  Strategy cc = copycat_strategy(a, limits);
  const std::size_t n = a.size();
  std::vector<EventSet> m;
  for (const auto& x : a.es.configurations(limits.max_configs)) {
    EventSet w(2 * n);
    x.for_each([&](EventIdx e) {
      w.set(e);
      w.set(n + e);
    });
    m.push_back(w);
  }
  return StoppingStrategy(std::move(cc), std::move(m));
}

/// g⊛f: τ⊛σ ⇒ τ'⊛σ' for 2-cells f: σ ⇒ σ' and g: τ ⇒ τ', acting as
/// (g⊛f)(y⊛x) = (g y)⊛(f x). Events with no image are left undefined.
inline ESMap interaction_two_cell(const Interaction& from, const Interaction& to, const ESMap& f, const ESMap& g) {
  const auto& P = from.pb.P;
  std::vector<EventIdx> h(P.size(), kUndefined);
  const std::size_t am = from.size_A() + from.size_M();
  const std::size_t ns = from.sigma.S.size(), ns2 = to.sigma.S.size();
  for (EventIdx p = 0; p < P.size(); ++p) {
    auto [x, y] = from.split(P.down(p));
    auto w = to.pair(f.image(x), g.image(y));
    if (!w) continue;
    const EventIdx u = from.pb.pi1(p), v = from.pb.pi2(p);
    const EventIdx u2 = u < ns ? f(u) : static_cast<EventIdx>(u - ns + ns2);
    const EventIdx v2 = v < am ? v : static_cast<EventIdx>(am + g(v - am));
    w->for_each([&](EventIdx q) {
      if (to.pb.pi1(q) == u2 && to.pb.pi2(q) == v2) h[p] = q;
    });
  }
  return ESMap(P, to.pb.P, std::move(h));
}

}  // namespace esg
