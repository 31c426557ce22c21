#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"
#include "esg/games.hpp"
#include "esg/interaction.hpp"
#include "esg/map.hpp"
#include "esg/strategy.hpp"

namespace esg {

/// A sequence of target events (flat indices of A⊥∥N∥B).
using Trace = std::vector<EventIdx>;

/// Shortest first, then lexicographic.
inline bool trace_less(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline std::string format_trace(const BareStrategy& s, const Trace& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + s.target.es.name(t[i]);
  return out + ")";
}

/// The one-move success game.
inline Game tick_game() { return make_game({{"tick", Polarity::Plus}}); }

/// Traces of configuration x: images of its serialisations.
inline std::vector<Trace> traces_of(const BareStrategy& s, const EventSet& x) {
  std::set<Trace> out;
  Trace cur;
  std::function<void(const EventSet&)> go = [&](const EventSet& done) {
    if (done == x) {
      out.insert(cur);
      return;
    }
    (x - done).for_each([&](EventIdx e) {
      if (!s.S.es.strict_down(e).subset_of(done)) return;
      cur.push_back(s.sigma(e));
      go(done.with(e));
      cur.pop_back();
    });
  };
  go(s.S.es.empty_set());
  std::vector<Trace> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), trace_less);
  return v;
}

/// Every finite trace, with the canonically least configuration having it.
inline std::map<Trace, EventSet> trace_table(const BareStrategy& s, const Limits& limits = {}) {
  std::map<Trace, EventSet> table;
  Trace cur;
  std::function<void(const EventSet&)> go = [&](const EventSet& x) {
    auto [it, fresh] = table.emplace(cur, x);
    if (!fresh && canonical_less(x, it->second)) it->second = x;
    if (table.size() > limits.max_configs) throw SizeBoundExceeded("traces", limits.max_configs);
    for (EventIdx e = 0; e < s.S.size(); ++e) {
      if (!s.S.es.enabled(x, e)) continue;
      cur.push_back(s.sigma(e));
      go(x.with(e));
      cur.pop_back();
    }
  };
  go(s.S.es.empty_set());
  return table;
}

inline std::vector<Trace> finite_traces(const BareStrategy& s, const Limits& limits = {}) {
  std::vector<Trace> v;
  for (auto& [t, x] : trace_table(s, limits)) v.push_back(t);
  std::sort(v.begin(), v.end(), trace_less);
  return v;
}

inline std::vector<Trace> stopping_traces(const StoppingStrategy& s) {
  std::set<Trace> out;
  for (const auto& x : s.stopping)
    for (auto& t : traces_of(s.strat, x)) out.insert(t);
  std::vector<Trace> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), trace_less);
  return v;
}

/// The configurations of S having trace α.
inline std::vector<EventSet> configurations_with_trace(const BareStrategy& s, const Trace& alpha) {
  std::vector<EventSet> front{s.S.es.empty_set()};
  for (EventIdx a : alpha) {
    std::unordered_set<EventSet, EventSetHash> next;
    for (const auto& x : front)
      for (EventIdx e = 0; e < s.S.size(); ++e)
        if (s.sigma(e) == a && s.S.es.enabled(x, e)) next.insert(x.with(e));
    front.assign(next.begin(), next.end());
    if (front.empty()) break;
  }
  std::sort(front.begin(), front.end(), canonical_less);
  return front;
}

inline bool is_trace(const BareStrategy& s, const Trace& alpha) { return !configurations_with_trace(s, alpha).empty(); }

inline bool is_stopping_trace(const StoppingStrategy& s, const Trace& alpha) {
  for (const auto& x : configurations_with_trace(s.strat, alpha))
    if (std::find(s.stopping.begin(), s.stopping.end(), x) != s.stopping.end()) return true;
  return false;
}

/// Some s ↣ s' in x with s −, s' +, and σ(s') before σ(s) in α; the
/// lexicographically least (position of σ(s'), position of σ(s)).
inline std::optional<std::pair<EventIdx, EventIdx>> disagreement(const BareStrategy& s, const EventSet& x,
                                                                 const Trace& alpha) {
  std::vector<std::size_t> pos(s.target.size(), alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) pos[alpha[i]] = i;
  std::optional<std::pair<EventIdx, EventIdx>> best;
  std::pair<std::size_t, std::size_t> key;
  for (auto [a, b] : s.S.es.immediate_causes()) {
    if (!x.test(a) || !x.test(b)) continue;
    if (s.S.pol[a] != Polarity::Minus || s.S.pol[b] != Polarity::Plus) continue;
    const auto pa = pos[s.sigma(a)], pb = pos[s.sigma(b)];
    if (pb >= pa) continue;
    std::pair<std::size_t, std::size_t> k{pb, pa};
    if (!best || k < key) {
      best = std::make_pair(a, b);
      key = k;
    }
  }
  return best;
}

/// A gap: trace α of configuration x1 of the first strategy that the second lacks.
struct Gap {
  EventSet x1;
  Trace alpha;
};

struct PreorderResult {
  bool holds = true;
  std::optional<Gap> gap;
};

inline void require_same_game(const BareStrategy& a, const BareStrategy& b) {
  if (!(a.target.es == b.target.es) || a.target.pol != b.target.pol) throw GameMismatch("strategies are over different games");
}

/// Finite traces of σ1 ⊆ traces of σ2, with a shortest gap otherwise.
inline PreorderResult may_preorder(const BareStrategy& s1, const BareStrategy& s2, const Limits& limits = {}) {
  require_same_game(s1, s2);
  std::vector<std::pair<Trace, EventSet>> rows;
  for (auto& [t, x] : trace_table(s1, limits)) rows.emplace_back(t, x);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return trace_less(a.first, b.first); });
  for (auto& [t, x] : rows)
    if (!is_trace(s2, t)) return {false, Gap{x, t}};
  return {};
}

/// Traces of stopping configurations of s1 ⊆ those of s2.
inline PreorderResult must_preorder(const StoppingStrategy& s1, const StoppingStrategy& s2) {
  require_same_game(s1.strat, s2.strat);
  std::vector<std::pair<Trace, EventSet>> rows;
  for (const auto& x : s1.stopping)
    for (auto& t : traces_of(s1.strat, x)) rows.emplace_back(t, x);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return trace_less(a.first, b.first);
    return canonical_less(a.second, b.second);
  });
  for (auto& [t, x] : rows)
    if (!is_stopping_trace(s2, t)) return {false, Gap{x, t}};
  return {};
}

enum class GapKind { May, Must };

inline std::optional<Gap> find_gap(const StoppingStrategy& s1, const StoppingStrategy& s2, GapKind kind,
                                   const Limits& limits = {}) {
  return kind == GapKind::May ? may_preorder(s1.strat, s2.strat, limits).gap : must_preorder(s1, s2).gap;
}

/// Result of running a test. For may: a successful pairing on pass. For
/// must: an unsuccessful stopping pairing on failure.
struct Verdict {
  bool pass = false;
  std::optional<EventSet> x;  // subject configuration
  std::optional<EventSet> y;  // test configuration
  std::string witness;
};

namespace detail {

inline void require_test_for(const BareStrategy& subject, const BareStrategy& test) {
  if (subject.A.size() != 0) throw GameMismatch("subject must be a strategy in a game");
  if (!(subject.B.es == test.A.es) || subject.B.pol != test.A.pol) throw GameMismatch("test is for a different game");
  if (test.B.size() != 1 || test.B.pol[0] != Polarity::Plus) throw GameMismatch("test target is not the success game");
}

inline EventIdx tick_index(const BareStrategy& test) { return static_cast<EventIdx>(test.b_offset()); }

inline bool has_tick(const BareStrategy& test, const EventSet& y) {
  bool t = false;
  y.for_each([&](EventIdx e) { t = t || test.sigma(e) == tick_index(test); });
  return t;
}

inline std::string pairing_text(const BareStrategy& subject, const BareStrategy& test, const EventSet& x,
                                const EventSet& y) {
  return "x=" + subject.S.es.format(x) + " y=" + test.S.es.format(y);
}

}  // namespace detail

/// A stopping strategy may pass a test iff some τ0 y containing ✓ pairs with a configuration of S.
inline Verdict may_pass(const StoppingStrategy& subject, const BareStrategy& test, const Limits& limits = {}) {
  detail::require_test_for(subject.strat, test);
  auto vp = visible_part(test);
  const Strategy& t0 = vp.strategy;
  auto in = interact(subject.strat, t0, limits);
  const auto& P = in.strategy.S.es;
  const EventIdx tick = static_cast<EventIdx>(in.strategy.b_offset());
  std::optional<EventSet> best;
  for (EventIdx p = 0; p < P.size(); ++p)
    if (in.strategy.sigma(p) == tick && (!best || canonical_less(P.down(p), *best))) best = P.down(p);
  Verdict v;
  if (!best) return v;
  auto [x, y] = in.split(*best);
  v.pass = true;
  v.x = x;
  v.y = y;
  v.witness = detail::pairing_text(subject.strat, t0, x, y);
  return v;
}

/// Must pass iff every y⊛x with x ∈ M_S and y ∈ M0 has τ0 y containing ✓,
/// where St(τ) = (τ0, M0).
inline Verdict must_pass(const StoppingStrategy& subject, const BareStrategy& test, const Limits& limits = {}) {
  detail::require_test_for(subject.strat, test);
  auto st = stop_of(test, limits);
  auto in = interact(subject.strat, st.strat, limits);
  Verdict v;
  v.pass = true;
  for (const auto& x : subject.stopping)
    for (const auto& y : st.stopping) {
      if (detail::has_tick(st.strat, y)) continue;
      if (!in.pair(x, y)) continue;
      v.pass = false;
      v.x = x;
      v.y = y;
      v.witness = detail::pairing_text(subject.strat, st.strat, x, y);
      return v;
    }
  return v;
}

inline Verdict may_pass(const BareStrategy& subject, const BareStrategy& test, const Limits& limits = {}) {
  return may_pass(stop_of(subject, limits), test, limits);
}
inline Verdict must_pass(const BareStrategy& subject, const BareStrategy& test, const Limits& limits = {}) {
  return must_pass(stop_of(subject, limits), test, limits);
}

/// The definitions on bare strategies directly, without St.
inline Verdict may_pass_bare(const BareStrategy& subject, const BareStrategy& test, const Limits& limits = {}) {
  detail::require_test_for(subject, test);
  auto in = interact(subject, test, limits);
  const EventIdx tick = static_cast<EventIdx>(in.strategy.b_offset());
  Verdict v;
  for (EventIdx p = 0; p < in.strategy.S.size(); ++p)
    if (in.strategy.sigma(p) == tick) {
      auto [x, y] = in.split(in.strategy.S.es.down(p));
      v.pass = true;
      v.x = x;
      v.y = y;
      v.witness = detail::pairing_text(subject, test, x, y);
      return v;
    }
  return v;
}

inline Verdict must_pass_bare(const BareStrategy& subject, const BareStrategy& test, const Limits& limits = {}) {
  detail::require_test_for(subject, test);
  auto in = interact(subject, test, limits);
  Verdict v;
  v.pass = true;
  for (const auto& x : plus_maximal_configs(subject.S, limits))
    for (const auto& y : plus_maximal_configs(test.S, limits)) {
      if (detail::has_tick(test, y) || !in.pair(x, y)) continue;
      v.pass = false;
      v.x = x;
      v.y = y;
      v.witness = detail::pairing_text(subject, test, x, y);
      return v;
    }
  return v;
}

namespace detail {

/// T1 = set(α) and its saturation T1' = {a : [a] \ T1 consists of Player moves of A}.
struct Saturation {
  EventSet t1;
  EventSet t1_prime;
};

inline Saturation saturate_opponent(const Game& g, const Trace& alpha, std::size_t offset) {
  Saturation s{EventSet(g.size()), EventSet(g.size())};
  for (EventIdx t : alpha) s.t1.set(t - offset);
  const EventSet plus = g.with_polarity(Polarity::Plus);
  for (EventIdx a = 0; a < g.size(); ++a)
    if ((g.es.down(a) - s.t1).subset_of(plus)) s.t1_prime.set(a);
  return s;
}

/// Reversal edges σ2(s') ≤ σ2(s), one per configuration with image T1, as
/// game-index pairs.
inline std::vector<std::pair<EventIdx, EventIdx>> reversal_edges(const BareStrategy& s2,
                                                                 const std::vector<EventSet>& candidates,
                                                                 const EventSet& t1, const Trace& alpha) {
  std::vector<std::pair<EventIdx, EventIdx>> edges;
  const auto off = static_cast<EventIdx>(s2.b_offset());
  for (const auto& x2 : candidates) {
    EventSet img(s2.B.size());
    s2.sigma.image(x2).for_each([&](EventIdx t) { img.set(t - off); });
    if (!(img == t1)) continue;
    auto d = disagreement(s2, x2, alpha);
    if (!d) throw std::logic_error("gap trace is a trace of the second strategy");
    edges.emplace_back(s2.sigma(d->second) - off, s2.sigma(d->first) - off);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace detail

/// A pure test that σ1 may pass and σ2 does not, from a may-gap α1 of σ1.
inline BareStrategy synthesize_may_test(const BareStrategy& s2, const Trace& alpha, const Limits& limits = {}) {
  if (s2.A.size() != 0) throw GameMismatch("strategy must be in a game");
  if (alpha.empty() || is_trace(s2, alpha)) throw NotAGap("the trace is a trace of the second strategy");
  const Game& g = s2.B;
  const auto sat = detail::saturate_opponent(g, alpha, s2.b_offset());
  const auto rev = detail::reversal_edges(s2, s2.S.es.configurations(limits.max_configs), sat.t1, alpha);

  std::vector<EventIdx> events = sat.t1_prime.elements();
  std::vector<EventIdx> local(g.size(), kUndefined);
  for (EventIdx i = 0; i < events.size(); ++i) local[events[i]] = i;
  const std::size_t n = events.size();
  const auto tick = static_cast<EventIdx>(n);
  std::vector<std::string> names;
  std::vector<Polarity> pol;
  for (auto a : events) {
    names.push_back(g.es.name(a));
    pol.push_back(flip(g.pol[a]));
  }
  names.push_back("tick");
  pol.push_back(Polarity::Plus);
  std::vector<std::pair<EventIdx, EventIdx>> edges;
  for (auto a : events)
    g.es.down(a).for_each([&](EventIdx b) {
      if (b != a) edges.emplace_back(local[b], local[a]);
    });
  for (auto [a, b] : rev) edges.emplace_back(local[a], local[b]);
  for (auto a : events)
    if (sat.t1.test(a) && g.pol[a] == Polarity::Plus) edges.emplace_back(local[a], tick);
  auto closure = close_order(n + 1, edges);
  if (!closure.cycle.empty()) throw std::logic_error("reversal edges are cyclic");
  auto es = structure_from_predicate(
      names, closure.down,
      [&](const EventSet& x) {
        EventSet in_g(g.size());
        x.for_each([&](EventIdx e) {
          if (e < n) in_g.set(events[e]);
        });
        return g.es.consistent(in_g);
      },
      limits.max_configs);
  std::vector<EventIdx> assign(events.begin(), events.end());
  assign.push_back(static_cast<EventIdx>(g.size()));
  return make_bare_strategy(g, PolarisedStructure(), tick_game(), PolarisedStructure(es, pol), assign, limits);
}

/// A bare test that s2 must pass and any stopping strategy with stopping
/// trace α1 fails, from a must-gap α1.
inline BareStrategy synthesize_must_test(const StoppingStrategy& s2, const Trace& alpha, const Limits& limits = {}) {
  if (s2.strat.A.size() != 0) throw GameMismatch("strategy must be in a game");
  if (is_stopping_trace(s2, alpha)) throw NotAGap("the trace is a stopping trace of the second strategy");
  const Game& g = s2.strat.B;
  const auto sat = detail::saturate_opponent(g, alpha, s2.strat.b_offset());
  const auto rev = detail::reversal_edges(s2.strat, s2.stopping, sat.t1, alpha);

  // Layout: T1' events, then neutral copies, then one tick per T1' event.
  std::vector<EventIdx> events = sat.t1_prime.elements();
  std::vector<EventIdx> local(g.size(), kUndefined);
  for (EventIdx i = 0; i < events.size(); ++i) local[events[i]] = i;
  const std::size_t n = events.size();
  std::vector<std::string> names;
  std::vector<Polarity> pol;
  for (auto a : events) {
    names.push_back(g.es.name(a));
    pol.push_back(flip(g.pol[a]));
  }
  std::vector<EventIdx> neutral_of(n, kUndefined), tick_of(n, kUndefined);
  std::vector<std::string> n_names;
  for (EventIdx i = 0; i < n; ++i)
    if (sat.t1.test(events[i]) && g.pol[events[i]] == Polarity::Plus) {
      neutral_of[i] = static_cast<EventIdx>(names.size());
      names.push_back("n." + g.es.name(events[i]));
      n_names.push_back(names.back());
      pol.push_back(Polarity::Neutral);
    }
  const auto first_tick = static_cast<EventIdx>(names.size());
  for (EventIdx i = 0; i < n; ++i) {
    tick_of[i] = static_cast<EventIdx>(names.size());
    names.push_back("tick." + g.es.name(events[i]));
    pol.push_back(Polarity::Plus);
  }
  const std::size_t total = names.size();

  std::vector<std::pair<EventIdx, EventIdx>> edges;
  for (auto a : events)
    g.es.down(a).for_each([&](EventIdx b) {
      if (b != a) edges.emplace_back(local[b], local[a]);
    });
  for (auto [a, b] : rev) edges.emplace_back(local[a], local[b]);
  for (EventIdx i = 0; i < n; ++i) {
    if (neutral_of[i] != kUndefined) edges.emplace_back(i, neutral_of[i]);
    // Ticks outside T1 wait for their event, so stopping beyond T1 succeeds.
    if (!sat.t1.test(events[i])) edges.emplace_back(i, tick_of[i]);
  }
  auto closure = close_order(total, edges);
  if (!closure.cycle.empty()) throw std::logic_error("reversal edges are cyclic");
  auto es = structure_from_predicate(
      names, closure.down,
      [&](const EventSet& x) {
        EventSet in_g(g.size());
        std::size_t ticks = 0;
        bool ok = true;
        x.for_each([&](EventIdx e) {
          if (e < n) in_g.set(events[e]);
          if (e >= first_tick) ++ticks;
        });
        for (EventIdx i = 0; i < n && ok; ++i) {
          if (!sat.t1.test(events[i]) || !x.test(tick_of[i])) continue;
          if (g.pol[events[i]] == Polarity::Minus && x.test(i)) ok = false;
          if (neutral_of[i] != kUndefined && x.test(neutral_of[i])) ok = false;
        }
        return ok && ticks <= 1 && g.es.consistent(in_g);
      },
      limits.max_configs);

  PolarisedStructure nstruct(make_structure(n_names), std::vector<Polarity>(n_names.size(), Polarity::Neutral));
  std::vector<EventIdx> assign(total);
  const auto n_off = static_cast<EventIdx>(g.size());
  const auto tick = static_cast<EventIdx>(g.size() + n_names.size());
  EventIdx k = 0;
  for (EventIdx e = 0; e < total; ++e) {
    if (e < n)
      assign[e] = events[e];
    else if (e < first_tick)
      assign[e] = n_off + k++;
    else
      assign[e] = tick;
  }
  return make_bare_strategy(g, nstruct, tick_game(), PolarisedStructure(es, pol), assign, limits);
}

namespace detail {

/// Events of a test under construction: label, strict down-set and the
/// (symmetric) conflict relation as bitmasks.
struct TestDraft {
  static constexpr int kNeutral = -1;
  static constexpr int kTick = -2;
  std::vector<int> label;
  std::vector<std::uint32_t> down, conf;

  std::size_t size() const { return label.size(); }

  /// Relabelled encoding; the least over all permutations identifies the
  /// structure up to isomorphism.
  std::vector<int> key() const {
    const std::size_t n = size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<int> best;
    do {
      std::vector<int> k;
      for (std::size_t i = 0; i < n; ++i) k.push_back(label[perm[i]]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const auto a = perm[i], b = perm[j];
          const auto hi = std::max(a, b), lo = std::min(a, b);
          k.push_back(static_cast<int>((a > b && (down[a] >> b & 1)) * 2 + (hi != lo && (conf[hi] >> lo & 1))));
        }
      if (best.empty() || k < best) best = std::move(k);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
};

}  // namespace detail

/// Every test over g with at most max_events events and binary conflict, up
/// to isomorphism. Pure tests only unless `neutral`; tests without a tick are
/// skipped since they cannot separate anything.
inline std::vector<BareStrategy> enumerate_tests(const Game& g, std::size_t max_events, bool neutral,
                                                 const Limits& limits = {}) {
  using D = detail::TestDraft;
  if (max_events > 6) throw SizeBoundExceeded("test size", 6);
  std::vector<int> labels;
  for (EventIdx a = 0; a < g.size(); ++a) labels.push_back(static_cast<int>(a));
  if (neutral) labels.push_back(D::kNeutral);
  labels.push_back(D::kTick);
  auto pol_of = [&](int l) {
    if (l == D::kTick) return Polarity::Plus;
    if (l == D::kNeutral) return Polarity::Neutral;
    return g.pol[l] == Polarity::Plus ? Polarity::Minus : Polarity::Plus;
  };

  std::set<std::vector<int>> seen;
  std::vector<BareStrategy> out;
  D d;

  auto emit = [&]() {
    if (std::find(d.label.begin(), d.label.end(), D::kTick) == d.label.end()) return;
    if (!seen.insert(d.key()).second) return;
    const std::size_t n = d.size();
    std::vector<std::string> names, nnames;
    std::vector<Polarity> pol;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("e" + std::to_string(i));
      pol.push_back(pol_of(d.label[i]));
      if (d.label[i] == D::kNeutral) nnames.push_back("n" + std::to_string(i));
    }
    std::vector<std::pair<std::string, std::string>> causes, conflicts;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        if (d.down[i] >> j & 1) causes.emplace_back(names[j], names[i]);
        if (d.conf[i] >> j & 1) conflicts.emplace_back(names[j], names[i]);
      }
    std::vector<EventIdx> assign;
    EventIdx k = 0;
    const auto n_off = static_cast<EventIdx>(g.size());
    for (std::size_t i = 0; i < n; ++i) {
      const int l = d.label[i];
      assign.push_back(l >= 0 ? static_cast<EventIdx>(l)
                              : l == D::kNeutral ? n_off + k++ : static_cast<EventIdx>(g.size() + nnames.size()));
    }
    try {
      PolarisedStructure nstruct(make_structure(nnames), std::vector<Polarity>(nnames.size(), Polarity::Neutral));
      PolarisedStructure s(make_structure(names, causes, conflicts), pol);
      out.push_back(make_bare_strategy(g, nstruct, tick_game(), s, assign, limits));
    } catch (const ValidationError&) {
    }
  };

  std::function<void()> grow = [&]() {
    if (!d.label.empty()) emit();
    const std::size_t n = d.size();
    if (n == max_events) return;
    const std::uint32_t all = (std::uint32_t{1} << n) - 1;
    for (int l : labels) {
      const Polarity p = pol_of(l);
      for (std::uint32_t dn = 0; dn <= all; ++dn) {
        bool ok = true;
        std::uint32_t inherited = 0;
        EventSet img(g.size());
        for (std::size_t j = 0; j < n && ok; ++j) {
          if (!(dn >> j & 1)) continue;
          ok = (d.down[j] & ~dn) == 0 && (d.conf[j] & dn) == 0;
          inherited |= d.conf[j];
          if (d.label[j] >= 0) {
            ok = ok && !img.test(static_cast<EventIdx>(d.label[j]));
            img.set(static_cast<EventIdx>(d.label[j]));
          }
        }
        if (!ok) continue;
        if (l >= 0) {
          const auto a = static_cast<EventIdx>(l);
          if (img.test(a) || !g.es.strict_down(a).subset_of(img)) continue;
          EventSet with = img;
          with.set(a);
          if (!g.es.consistent(with)) continue;
        }
        // Innocence on the immediate causes, which are the maximal elements of dn.
        for (std::size_t j = 0; j < n && ok; ++j) {
          if (!(dn >> j & 1)) continue;
          bool maximal = true;
          for (std::size_t k = 0; k < n; ++k)
            if ((dn >> k & 1) && (d.down[k] >> j & 1)) maximal = false;
          if (!maximal) continue;
          const bool linked = l >= 0 && d.label[j] >= 0 &&
                              g.es.immediate(static_cast<EventIdx>(d.label[j]), static_cast<EventIdx>(l));
          if ((pol_of(d.label[j]) == Polarity::Plus || p == Polarity::Minus) && !linked) ok = false;
        }
        if (!ok) continue;
        const std::uint32_t free = all & ~dn & ~inherited;
        std::set<std::uint32_t> closures;
        for (std::uint32_t c = free;; c = (c - 1) & free) {
          std::uint32_t cl = c | inherited;
          for (std::size_t k = 0; k < n; ++k)
            if (d.down[k] & cl) cl |= std::uint32_t{1} << k;
          const bool fresh = (cl & dn) == 0 && closures.insert(cl).second;
          bool same_ok = true;
          if (l != D::kNeutral)
            for (std::size_t j = 0; j < n; ++j)
              if (d.label[j] == l && !(cl >> j & 1)) same_ok = false;
          if (fresh && same_ok) {
            d.label.push_back(l);
            d.down.push_back(dn);
            d.conf.push_back(cl);
            std::vector<std::uint32_t> saved = d.conf;
            for (std::size_t j = 0; j < n; ++j)
              if (cl >> j & 1) d.conf[j] |= std::uint32_t{1} << n;
            grow();
            d.conf = std::move(saved);
            d.label.pop_back();
            d.down.pop_back();
            d.conf.pop_back();
          }
          if (c == 0) break;
        }
      }
    }
  };
  grow();
  return out;
}

}  // namespace esg
