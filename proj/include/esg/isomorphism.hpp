#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"
#include "esg/games.hpp"
#include "esg/map.hpp"
#include "esg/strategy.hpp"

namespace esg {

struct IsoOptions {
  /// Per-event labels each side must agree on (polarity, σ-image, ...).
  std::vector<std::uint64_t> label_a;
  std::vector<std::uint64_t> label_b;
  /// Extra check on a complete candidate bijection.
  std::function<bool(const std::vector<EventIdx>&)> accept;
  std::size_t budget = 1'000'000;
};

namespace detail {

struct IsoInvariant {
  std::size_t below, above, preds, succs;
  std::uint64_t label;
  friend bool operator==(const IsoInvariant&, const IsoInvariant&) = default;
};

inline std::vector<IsoInvariant> iso_invariants(const EventStructure& e, const std::vector<std::uint64_t>& label) {
  std::vector<IsoInvariant> inv(e.size());
  for (EventIdx i = 0; i < e.size(); ++i) inv[i] = {e.down(i).count(), e.up(i).count(), 0, 0, label.empty() ? 0 : label[i]};
  for (auto [a, b] : e.immediate_causes()) {
    ++inv[a].succs;
    ++inv[b].preds;
  }
  return inv;
}

}  // namespace detail

/// A bijection φ with φ and φ⁻¹ both maps of event structures, respecting the
/// labels. Returned as φ on indices of `a`.
inline std::optional<std::vector<EventIdx>> find_isomorphism(const EventStructure& a, const EventStructure& b,
                                                             const IsoOptions& opt = {}) {
  const std::size_t n = a.size();
  if (n != b.size() || a.maximal_consistent().size() != b.maximal_consistent().size()) return std::nullopt;
  const auto ia = detail::iso_invariants(a, opt.label_a);
  const auto ib = detail::iso_invariants(b, opt.label_b);
  std::vector<EventIdx> order(n);
  for (EventIdx i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](EventIdx x, EventIdx y) { return ia[x].below < ia[y].below; });
  std::vector<std::vector<EventIdx>> cand(n);
  for (EventIdx x = 0; x < n; ++x)
    for (EventIdx y = 0; y < n; ++y)
      if (ia[x] == ib[y]) cand[x].push_back(y);
  for (const auto& c : cand)
    if (c.empty()) return std::nullopt;

  auto pair_ok = [&](EventIdx x, EventIdx x2, EventIdx y, EventIdx y2) {
    if (a.leq(x, x2) != b.leq(y, y2) || a.leq(x2, x) != b.leq(y2, y)) return false;
    return a.consistent(a.down(x) | a.down(x2)) == b.consistent(b.down(y) | b.down(y2));
  };
  auto full_ok = [&](const std::vector<EventIdx>& phi) {
    std::vector<EventSet> img;
    for (const auto& m : a.maximal_consistent()) {
      EventSet s(n);
      m.for_each([&](EventIdx e) { s.set(phi[e]); });
      img.push_back(s);
    }
    canonicalize(img);
    if (img != b.maximal_consistent()) return false;
    return !opt.accept || opt.accept(phi);
  };

  std::vector<EventIdx> phi(n, kUndefined);
  std::vector<bool> used(n, false);
  std::size_t steps = 0;
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (++steps > opt.budget) throw SearchBudgetExceeded("isomorphism search exceeded its budget");
    if (k == n) return full_ok(phi);
    const EventIdx x = order[k];
    for (EventIdx y : cand[x]) {
      if (used[y]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = pair_ok(order[j], x, phi[order[j]], y);
      if (!ok) continue;
      phi[x] = y;
      used[y] = true;
      if (go(k + 1)) return true;
      used[y] = false;
      phi[x] = kUndefined;
    }
    return false;
  };
  if (go(0)) return phi;
  return std::nullopt;
}

inline std::vector<std::uint64_t> polarity_labels(const PolarisedStructure& p) {
  std::vector<std::uint64_t> l;
  for (auto q : p.pol) l.push_back(static_cast<std::uint64_t>(q));
  return l;
}

inline std::optional<std::vector<EventIdx>> find_isomorphism(const PolarisedStructure& a, const PolarisedStructure& b,
                                                             IsoOptions opt = {}) {
  opt.label_a = polarity_labels(a);
  opt.label_b = polarity_labels(b);
  return find_isomorphism(a.es, b.es, opt);
}

namespace detail {

inline std::vector<std::uint64_t> strategy_labels(const BareStrategy& s) {
  std::vector<std::uint64_t> l;
  for (EventIdx e = 0; e < s.S.size(); ++e)
    l.push_back(static_cast<std::uint64_t>(s.sigma(e)) * 4 + static_cast<std::uint64_t>(s.S.pol[e]));
  return l;
}

inline bool same_signature(const BareStrategy& a, const BareStrategy& b) {
  return a.target.es == b.target.es && a.target.pol == b.target.pol && a.A.size() == b.A.size() &&
         a.N.size() == b.N.size();
}

}  // namespace detail

/// Isomorphism of (bare) strategies over a common target: σ' ∘ φ = σ.
inline std::optional<std::vector<EventIdx>> strategy_isomorphism(const BareStrategy& a, const BareStrategy& b,
                                                                 IsoOptions opt = {}) {
  if (!detail::same_signature(a, b)) return std::nullopt;
  opt.label_a = detail::strategy_labels(a);
  opt.label_b = detail::strategy_labels(b);
  return find_isomorphism(a.S.es, b.S.es, opt);
}

/// Isomorphism of stopping strategies: also carries M_S onto M_S'.
inline std::optional<std::vector<EventIdx>> stopping_isomorphism(const StoppingStrategy& a, const StoppingStrategy& b,
                                                                 std::size_t budget = IsoOptions{}.budget) {
  if (a.stopping.size() != b.stopping.size()) return std::nullopt;
  IsoOptions opt;
  opt.budget = budget;
  opt.accept = [&](const std::vector<EventIdx>& phi) {
    std::vector<EventSet> img;
    for (const auto& x : a.stopping) {
      EventSet s(b.strat.S.size());
      x.for_each([&](EventIdx e) { s.set(phi[e]); });
      img.push_back(s);
    }
    canonicalize(img);
    return img == b.stopping;
  };
  return strategy_isomorphism(a.strat, b.strat, opt);
}

inline bool isomorphic(const BareStrategy& a, const BareStrategy& b) { return strategy_isomorphism(a, b).has_value(); }
inline bool isomorphic(const StoppingStrategy& a, const StoppingStrategy& b) {
  return stopping_isomorphism(a, b).has_value();
}

}  // namespace esg
