#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"
#include "esg/games.hpp"
#include "esg/map.hpp"

namespace esg {

/// A⊥∥N∥B with events named "in.a", "mid.n" and plain "b".
inline PolarisedStructure strategy_target(const Game& a, const PolarisedStructure& n, const Game& b) {
  PolarisedStructure t = parallel({dual(static_cast<const PolarisedStructure&>(a)), n, b});
  std::vector<std::string> names;
  for (EventIdx e = 0; e < a.size(); ++e) names.push_back("in." + a.es.name(e));
  for (EventIdx e = 0; e < n.size(); ++e) names.push_back("mid." + n.es.name(e));
  for (EventIdx e = 0; e < b.size(); ++e) names.push_back(b.es.name(e));
  return PolarisedStructure(with_names(t.es, std::move(names)), t.pol);
}

/// σ: S → A⊥∥N∥B. Flat target indices: A at [0,|A|), N next, then B.
struct BareStrategy {
  Game A;
  PolarisedStructure N;
  Game B;
  PolarisedStructure S;
  PolarisedStructure target;
  ESMap sigma;

  BareStrategy() = default;
  /// Unvalidated; see make_bare_strategy.
  BareStrategy(Game a, PolarisedStructure n, Game b, PolarisedStructure s, std::vector<EventIdx> assignment)
      : A(std::move(a)), N(std::move(n)), B(std::move(b)), S(std::move(s)), target(strategy_target(A, N, B)),
        sigma(S.es, target.es, std::move(assignment)) {}

  std::size_t n_offset() const { return A.size(); }
  std::size_t b_offset() const { return A.size() + N.size(); }
  bool in_A(EventIdx t) const { return t < n_offset(); }
  bool in_N(EventIdx t) const { return t >= n_offset() && t < b_offset(); }
  bool in_B(EventIdx t) const { return t >= b_offset(); }

  /// Events of S not sent to N.
  EventSet visible_events() const {
    EventSet v(S.size());
    for (EventIdx s = 0; s < S.size(); ++s)
      if (!in_N(sigma(s))) v.set(s);
    return v;
  }
};

namespace detail {

inline Diagnostics receptivity_diagnostics(const BareStrategy& st, const Limits& limits) {
  const auto& S = st.S;
  const EventSet s_minus = S.with_polarity(Polarity::Minus);
  const EventSet t_minus = st.target.with_polarity(Polarity::Minus);
  for (const auto& x : S.es.configurations(limits.max_configs)) {
    const EventSet sx = st.sigma.image(x);
    std::vector<EventSet> lifts;
    for (const auto& x2 : extensions_within(S.es, x, s_minus, limits)) lifts.push_back(st.sigma.image(x2));
    for (const auto& y : extensions_within(st.target.es, sx, t_minus, limits)) {
      const auto c = std::count(lifts.begin(), lifts.end(), y);
      if (c != 1)
        return {{DiagKind::NotReceptive, S.es.format(x) + ", " + st.target.es.format(y) +
                                             (c == 0 ? " (no lifting)" : " (several liftings)")}};
    }
  }
  return {};
}

}  // namespace detail

/// Every violated clause of the bare-strategy definition, with witnesses.
inline Diagnostics check_bare_strategy(const BareStrategy& st, const Limits& limits = {}) {
  Diagnostics d;
  const auto& S = st.S;
  const auto& T = st.target;
  if (st.sigma.f.size() != S.size()) return {{DiagKind::NotTotal, "assignment size"}};
  for (EventIdx n = 0; n < st.N.size(); ++n)
    if (st.N.pol[n] != Polarity::Neutral) d.push_back({DiagKind::PolarityMismatch, "mid." + st.N.es.name(n)});
  for (EventIdx s = 0; s < S.size(); ++s) {
    if (!st.sigma.defined(s) || st.sigma(s) >= T.size()) {
      d.push_back({DiagKind::NotTotal, S.es.name(s)});
      continue;
    }
    if (S.pol[s] != T.pol[st.sigma(s)]) d.push_back({DiagKind::PolarityMismatch, S.es.name(s)});
  }
  if (!d.empty()) return d;
  auto rep = validate_map(st.sigma, limits);
  if (!rep.valid) return rep.diagnostics;
  auto r = detail::receptivity_diagnostics(st, limits);
  d.insert(d.end(), r.begin(), r.end());
  for (auto [s, s2] : S.es.immediate_causes()) {
    const bool linked = T.es.immediate(st.sigma(s), st.sigma(s2));
    if (S.pol[s] == Polarity::Plus && !linked)
      d.push_back({DiagKind::PlusInnocenceViolation, S.es.name(s) + ", " + S.es.name(s2)});
    if (S.pol[s2] == Polarity::Minus && !linked)
      d.push_back({DiagKind::MinusInnocenceViolation, S.es.name(s) + ", " + S.es.name(s2)});
  }
  return d;
}

inline BareStrategy validate_bare_strategy(BareStrategy st, const Limits& limits = {}) {
  auto d = check_bare_strategy(st, limits);
  if (!d.empty()) throw ValidationError(d);
  return st;
}

inline BareStrategy make_bare_strategy(Game a, PolarisedStructure n, Game b, PolarisedStructure s,
                                       std::vector<EventIdx> assignment, const Limits& limits = {}) {
  return validate_bare_strategy(
      BareStrategy(std::move(a), std::move(n), std::move(b), std::move(s), std::move(assignment)), limits);
}

/// A bare strategy with N empty and no neutral events.
struct Strategy : BareStrategy {
  Strategy() = default;
  explicit Strategy(BareStrategy b) : BareStrategy(std::move(b)) {
    Diagnostics d;
    if (N.size() != 0) d.push_back({DiagKind::NeutralInGame, "nonempty neutral component"});
    for (EventIdx s = 0; s < S.size(); ++s)
      if (S.pol[s] == Polarity::Neutral) d.push_back({DiagKind::NeutralInGame, S.es.name(s)});
    if (!d.empty()) throw ValidationError(d);
  }
};

inline Strategy make_strategy(Game a, Game b, PolarisedStructure s, std::vector<EventIdx> assignment,
                              const Limits& limits = {}) {
  return Strategy(make_bare_strategy(std::move(a), PolarisedStructure(), std::move(b), std::move(s),
                                     std::move(assignment), limits));
}

/// Strategy in game G, i.e. from the empty game.
inline Strategy make_strategy_in(Game g, PolarisedStructure s, std::vector<EventIdx> assignment,
                                 const Limits& limits = {}) {
  return make_strategy(Game(), std::move(g), std::move(s), std::move(assignment), limits);
}

/// Assignment from event names of S to names of the game G (for strategies in G).
inline std::vector<EventIdx> assignment_by_name(const PolarisedStructure& s, const PolarisedStructure& target,
                                                const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<EventIdx> f(s.size(), kUndefined);
  for (const auto& [a, b] : pairs) f[s.es.index_of(a)] = target.es.index_of(b);
  return f;
}

/// The visible part σ↓ with the projection p: S ⇀ S↓.
struct VisiblePart {
  Strategy strategy;
  ESMap p;

  EventSet down(const EventSet& x) const { return p.image(x); }
};

inline VisiblePart visible_part(const BareStrategy& st) {
  ESMap p = projection_map(st.S.es, st.visible_events());
  std::vector<EventIdx> f;
  std::vector<Polarity> pol;
  const auto shift = static_cast<EventIdx>(st.N.size());
  for (EventIdx s = 0; s < st.S.size(); ++s) {
    if (!p.defined(s)) continue;
    const EventIdx t = st.sigma(s);
    f.push_back(st.in_A(t) ? t : t - shift);
    pol.push_back(st.S.pol[s]);
  }
  BareStrategy vis(st.A, PolarisedStructure(), st.B, PolarisedStructure(p.target, std::move(pol)), std::move(f));
  return VisiblePart{Strategy(std::move(vis)), std::move(p)};
}

/// A strategy with a set of stopping configurations (kept canonical).
struct StoppingStrategy {
  Strategy strat;
  std::vector<EventSet> stopping;

  StoppingStrategy() = default;
  StoppingStrategy(Strategy s, std::vector<EventSet> m) : strat(std::move(s)), stopping(std::move(m)) {
    canonicalize(stopping);
    Diagnostics d;
    for (const auto& x : stopping)
      if (!strat.S.es.is_configuration(x)) d.push_back({DiagKind::NotAConfiguration, strat.S.es.format(x)});
    if (!d.empty()) throw ValidationError(d);
  }
};

inline std::vector<EventSet> stop_set(const BareStrategy& st, const VisiblePart& vp, const Limits& limits = {}) {
  std::vector<EventSet> m;
  for (const auto& x : plus_maximal_configs(st.S, limits)) m.push_back(vp.down(x));
  canonicalize(m);
  return m;
}

/// St(σ) = (σ↓, Stop(σ)).
inline StoppingStrategy stop_of(const BareStrategy& st, const Limits& limits = {}) {
  auto vp = visible_part(st);
  auto m = stop_set(st, vp, limits);
  return StoppingStrategy(std::move(vp.strategy), std::move(m));
}

inline StoppingStrategy saturate_stopping(const Strategy& s, const Limits& limits = {}) {
  return StoppingStrategy(s, plus_maximal_configs(s.S, limits));
}

enum class TwoCellKind { Plain, Stopping, PlusReflecting, RigidEpi };

struct TwoCellReport {
  bool valid = true;
  Diagnostics diagnostics;
};

/// Checks f: S → S' as a 2-cell σ ⇒ σ' of the given kind. Stopping sets are
/// only consulted for TwoCellKind::Stopping.
inline TwoCellReport validate_two_cell(const ESMap& f, const BareStrategy& from, const BareStrategy& to,
                                       TwoCellKind kind, const std::vector<EventSet>* from_stop = nullptr,
                                       const std::vector<EventSet>* to_stop = nullptr, const Limits& limits = {}) {
  TwoCellReport r;
  auto fail = [&](DiagKind k, std::string w) { r.diagnostics.push_back({k, std::move(w)}); };
  const auto& S = from.S;
  const auto& S2 = to.S;
  if (f.f.size() != S.size()) {
    fail(DiagKind::NotTotal, "assignment size");
    r.valid = false;
    return r;
  }
  for (EventIdx s = 0; s < S.size(); ++s) {
    if (!f.defined(s) || f(s) >= S2.size()) {
      fail(DiagKind::NotTotal, S.es.name(s));
      continue;
    }
    if (S.pol[s] != S2.pol[f(s)]) fail(DiagKind::PolarityMismatch, S.es.name(s));
    if (to.sigma(f(s)) != from.sigma(s)) fail(DiagKind::TriangleBroken, S.es.name(s));
  }
  if (!r.diagnostics.empty()) {
    r.valid = false;
    return r;
  }
  auto mr = validate_map(f, limits);
  r.diagnostics.insert(r.diagnostics.end(), mr.diagnostics.begin(), mr.diagnostics.end());
  if (kind == TwoCellKind::Stopping && from_stop && to_stop) {
    for (const auto& x : *from_stop) {
      EventSet fx = f.image(x);
      if (std::find(to_stop->begin(), to_stop->end(), fx) == to_stop->end()) fail(DiagKind::StoppingNotPreserved, S.es.format(x));
    }
  }
  if (kind == TwoCellKind::PlusReflecting) {
    const EventSet pl = S2.player_like();
    for (const auto& x : S.es.configurations(limits.max_configs)) {
      const EventSet fx = f.image(x);
      for (const auto& y : extensions_within(S2.es, fx, pl, limits)) {
        EventSet pre(S.size());
        for (EventIdx s = 0; s < S.size(); ++s)
          if ((y - fx).test(f(s))) pre.set(s);
        bool found = false;
        for (const auto& x2 : extensions_within(S.es, x, pre, limits))
          if (f.image(x2) == y) found = true;
        if (!found) {
          fail(DiagKind::NotPlusReflecting, S.es.format(x) + ", " + S2.es.format(y));
          break;
        }
      }
      if (!r.diagnostics.empty()) break;
    }
  }
  if (kind == TwoCellKind::RigidEpi) {
    if (!mr.rigid) fail(DiagKind::NotRigid, "dependency not preserved");
    EventSet hit(S2.size());
    for (auto v : f.f) hit.set(v);
    if (!(hit == S2.es.full_set())) fail(DiagKind::NotEpi, S2.es.format(S2.es.full_set() - hit));
  }
  r.valid = r.diagnostics.empty();
  return r;
}

inline TwoCellReport validate_two_cell(const ESMap& f, const StoppingStrategy& from, const StoppingStrategy& to,
                                       TwoCellKind kind, const Limits& limits = {}) {
  return validate_two_cell(f, from.strat, to.strat, kind, &from.stopping, &to.stopping, limits);
}

/// f↓: S↓ → S'↓ for a 2-cell f between bare strategies.
inline ESMap hide_two_cell(const ESMap& f, const VisiblePart& from, const VisiblePart& to) {
  const auto& p = from.p;
  std::vector<EventIdx> g(p.target.size(), kUndefined);
  for (EventIdx s = 0; s < p.source.size(); ++s)
    if (p.defined(s)) g[p(s)] = to.p(f(s));
  return ESMap(p.target, to.p.target, std::move(g));
}

}  // namespace esg
