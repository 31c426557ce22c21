#include <gtest/gtest.h>

#include <random>

#include "esg/esg.hpp"

using namespace esg;

namespace {

std::vector<std::vector<std::string>> named(const EventStructure& e, const std::vector<EventSet>& fam) {
  std::vector<std::vector<std::string>> out;
  for (const auto& x : fam) {
    std::vector<std::string> s;
    x.for_each([&](EventIdx i) { s.push_back(e.name(i)); });
    out.push_back(s);
  }
  return out;
}

EventStructure chain3() { return make_structure({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}); }

// Brute-force oracle: all subsets that are down-closed and consistent.
std::vector<EventSet> brute_configs(const EventStructure& e) {
  std::vector<EventSet> out;
  const auto n = e.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    EventSet x(n);
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) x.set(i);
    bool closed = true;
    for (std::size_t i = 0; i < n; ++i)
      if (x.test(i))
        for (std::size_t j = 0; j < n; ++j)
          if (e.leq(j, i) && !x.test(j)) closed = false;
    if (closed && e.consistent(x)) out.push_back(x);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

EventStructure random_structure(std::mt19937& rng, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> causes, conflicts;
  std::bernoulli_distribution edge(0.3), conf(0.2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) causes.emplace_back(names[i], names[j]);
      else if (conf(rng)) conflicts.emplace_back(names[i], names[j]);
    }
  for (;;) {
    try {
      return make_structure(names, causes, conflicts);
    } catch (const ValidationError&) {
      conflicts.pop_back();
    }
  }
}

}  // namespace

TEST(Validate, ChainIsValid) {
  auto e = make_structure({"a", "b"}, {{"a", "b"}});
  EXPECT_EQ(e.size(), 2u);
  EXPECT_TRUE(e.lt(0, 1));
}

TEST(Validate, TwoCycleIsRejected) {
  try {
    make_structure({"a", "b"}, {{"a", "b"}, {"b", "a"}});
    FAIL();
  } catch (const ValidationError& err) {
    ASSERT_EQ(err.diagnostics().size(), 1u);
    EXPECT_EQ(err.diagnostics()[0].kind, DiagKind::CycleInCause);
    EXPECT_NE(err.diagnostics()[0].witness.find("a"), std::string::npos);
  }
}

TEST(Validate, ExplicitConsistencyFamily) {
  RawStructure ok{{"a", "b"}, {}, {}, std::vector<std::vector<std::string>>{{"a", "b"}}};
  EXPECT_NO_THROW(validate_event_structure(ok));
  RawStructure bad{{"a", "b"}, {}, {}, std::vector<std::vector<std::string>>{{"a"}}};
  try {
    validate_event_structure(bad);
    FAIL();
  } catch (const ValidationError& err) {
    ASSERT_EQ(err.diagnostics().size(), 1u);
    EXPECT_EQ(err.diagnostics()[0].kind, DiagKind::InconsistentSingleton);
    EXPECT_EQ(err.diagnostics()[0].witness, "b");
  }
}

TEST(Validate, NotDownClosedFamily) {
  RawStructure bad{{"a", "b"}, {{"a", "b"}}, {}, std::vector<std::vector<std::string>>{{"b"}, {"a"}}};
  try {
    validate_event_structure(bad);
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_TRUE(has(err.diagnostics(), DiagKind::ConsistencyNotDownClosed));
  }
}

TEST(Validate, ConflictWithOwnCauseIsInconsistent) {
  try {
    make_structure({"a", "b"}, {{"a", "b"}}, {{"a", "b"}});
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_TRUE(has(err.diagnostics(), DiagKind::InconsistentSingleton));
  }
}

TEST(Validate, DuplicateAndUnknown) {
  try {
    make_structure({"a", "a"});
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_TRUE(has(err.diagnostics(), DiagKind::DuplicateEvent));
  }
  try {
    make_structure({"a"}, {{"a", "zz"}});
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_TRUE(has(err.diagnostics(), DiagKind::UnknownEvent));
  }
}

TEST(Configurations, FreeStructure) {
  auto gb = make_structure({"b1", "b2"});
  using V = std::vector<std::vector<std::string>>;
  EXPECT_EQ(named(gb, enumerate_configurations(gb)), (V{{}, {"b1"}, {"b2"}, {"b1", "b2"}}));
}

TEST(Configurations, ConflictPair) {
  auto e = make_structure({"s1", "s2"}, {}, {{"s1", "s2"}});
  using V = std::vector<std::vector<std::string>>;
  EXPECT_EQ(named(e, enumerate_configurations(e)), (V{{}, {"s1"}, {"s2"}}));
}

TEST(Configurations, Chain) {
  auto e = chain3();
  using V = std::vector<std::vector<std::string>>;
  EXPECT_EQ(named(e, enumerate_configurations(e)), (V{{}, {"a"}, {"a", "b"}, {"a", "b", "c"}}));
}

TEST(Configurations, CapIsEnforced) {
  auto e = make_structure({"a", "b", "c", "d"});
  Limits l;
  l.max_configs = 5;
  EXPECT_THROW(enumerate_configurations(e, l), SizeBoundExceeded);
}

TEST(Configurations, NonBinaryConsistency) {
  RawStructure r{{"a", "b", "c"}, {}, {}, std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "c"}, {"a", "c"}}};
  auto e = validate_event_structure(r);
  EXPECT_EQ(enumerate_configurations(e).size(), 7u);
  EXPECT_FALSE(binary_consistency(e));
  EXPECT_TRUE(binary_consistency(make_structure({"s1", "s2"}, {}, {{"s1", "s2"}})));
}

TEST(Configurations, MatchBruteForceOnRandomStructures) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto e = random_structure(rng, 1 + i % 7);
    EXPECT_EQ(enumerate_configurations(e), brute_configs(e));
  }
}

TEST(Relations, Chain) {
  auto r = derive_relations(chain3());
  using P = std::vector<std::pair<EventIdx, EventIdx>>;
  EXPECT_EQ(r.immediate, (P{{0, 1}, {1, 2}}));
  EXPECT_TRUE(r.concurrent.empty());
}

TEST(Relations, FreePair) {
  auto r = derive_relations(make_structure({"b1", "b2"}));
  EXPECT_TRUE(r.immediate.empty());
  using P = std::vector<std::pair<EventIdx, EventIdx>>;
  EXPECT_EQ(r.concurrent, (P{{0, 1}}));
}

TEST(Relations, TransitiveEdgeIsNotImmediate) {
  auto e = make_structure({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  using P = std::vector<std::pair<EventIdx, EventIdx>>;
  EXPECT_EQ(derive_relations(e).immediate, (P{{0, 1}, {1, 2}}));
}

TEST(DownClosure, Examples) {
  auto c = chain3();
  EXPECT_EQ(down_closure(c, {"c"}), c.full_set());
  EXPECT_EQ(down_closure(c, {}), c.empty_set());
  auto gb = make_structure({"b1", "b2"});
  EXPECT_EQ(down_closure(gb, {"b1"}), EventSet(2, {0}));
  EXPECT_THROW(down_closure(gb, {"nope"}), UnknownEvent);
}

TEST(Maps, IdentityIsValidTotalRigid) {
  auto gb = make_structure({"b1", "b2"});
  auto r = validate_map(identity_map(gb));
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.total);
  EXPECT_TRUE(r.rigid);
}

TEST(Maps, MergingConcurrentEventsBreaksInjectivity) {
  auto gb = make_structure({"b1", "b2"});
  auto p = make_structure({"p"});
  auto r = validate_map(ESMap(gb, p, {0, 0}));
  EXPECT_FALSE(r.valid);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].kind, DiagKind::LocalInjectivityViolation);
  EXPECT_EQ(r.diagnostics[0].witness, "{b1,b2}, b1, b2");
}

TEST(Maps, ImageMustBeConfiguration) {
  auto one = make_structure({"x"});
  auto chain = make_structure({"a", "b"}, {{"a", "b"}});
  auto r = validate_map(ESMap(one, chain, {1}));
  EXPECT_FALSE(r.valid);
  EXPECT_TRUE(has(r.diagnostics, DiagKind::ImageNotConfiguration));
}

TEST(Project, Examples) {
  auto c = chain3();
  auto p = project(c, std::vector<std::string>{"a", "c"});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_TRUE(p.lt(0, 1));
  EXPECT_EQ(project(c, c.full_set()), c);
  auto conf = make_structure({"s1", "s2"}, {}, {{"s1", "s2"}});
  auto q = project(conf, std::vector<std::string>{"s1"});
  EXPECT_EQ(q.configurations().size(), 2u);
  EXPECT_THROW(project(c, std::vector<std::string>{"zz"}), UnknownEvent);
}

TEST(Project, ConfigurationsAreRestrictions) {
  std::mt19937 rng(11);
  for (int i = 0; i < 150; ++i) {
    auto e = random_structure(rng, 1 + i % 7);
    EventSet v(e.size());
    for (EventIdx k = 0; k < e.size(); ++k)
      if (rng() % 2) v.set(k);
    std::vector<EventIdx> kept;
    auto p = project(e, v, &kept);
    std::vector<EventSet> expect;
    for (const auto& x : e.configurations()) {
      EventSet r(p.size());
      for (EventIdx k = 0; k < kept.size(); ++k)
        if (x.test(kept[k])) r.set(k);
      expect.push_back(r);
    }
    canonicalize(expect);
    EXPECT_EQ(p.configurations(), expect);
    EventSet w = v;
    for (EventIdx k = 0; k < e.size(); ++k)
      if (rng() % 2) w.reset(k);
    std::vector<EventIdx> kept_w;
    auto pw = project(e, w, &kept_w);
    EventSet w_in_p(p.size());
    for (EventIdx k = 0; k < kept.size(); ++k)
      if (w.test(kept[k])) w_in_p.set(k);
    EXPECT_EQ(project(p, w_in_p), pw);
  }
}

TEST(Factorize, TotalMapIsItsOwnDefinedPart) {
  auto gb = make_structure({"b1", "b2"});
  auto f = identity_map(gb);
  auto [f0, f1] = factorize(f);
  EXPECT_EQ(f0.target, gb);
  EXPECT_EQ(f1.f, f.f);
}

TEST(Factorize, EverywhereUndefined) {
  auto gb = make_structure({"b1", "b2"});
  ESMap f(gb, make_structure({"p"}), {kUndefined, kUndefined});
  auto [f0, f1] = factorize(f);
  EXPECT_EQ(f0.target.size(), 0u);
  EXPECT_TRUE(f1.f.empty());
}

TEST(Factorize, RecomposesOnRandomPartialMaps) {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto e = random_structure(rng, 1 + i % 6);
    EventSet v(e.size());
    for (EventIdx k = 0; k < e.size(); ++k)
      if (rng() % 3) v.set(k);
    // The projection onto v followed by the identity is a valid partial map.
    ESMap p = projection_map(e, v);
    auto [f0, f1] = factorize(p);
    EXPECT_EQ(compose_maps(f1, f0).f, p.f);
    EXPECT_TRUE(f1.total());
    EXPECT_TRUE(validate_map(f1).valid);
  }
}

TEST(Maps, ValidTotalMapsAreBijectiveOnConfigurations) {
  std::mt19937 rng(3);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto s = random_structure(rng, 1 + i % 5);
    auto t = random_structure(rng, 1 + i % 4);
    std::vector<EventIdx> f(s.size());
    for (auto& v : f) v = static_cast<EventIdx>(rng() % t.size());
    ESMap m(s, t, f);
    auto r = validate_map(m);
    if (!r.valid) continue;
    ++checked;
    for (const auto& x : s.configurations()) {
      EXPECT_EQ(m.image(x).count(), x.count());
      // Local reflection of dependency and preservation of concurrency.
      x.for_each([&](EventIdx a) {
        x.for_each([&](EventIdx b) {
          if (a != b && t.leq(m(a), m(b))) EXPECT_TRUE(s.leq(a, b));
        });
      });
    }
    for (auto [a, b] : derive_relations(s).concurrent) {
      EXPECT_FALSE(t.leq(m(a), m(b)));
      EXPECT_FALSE(t.leq(m(b), m(a)));
    }
  }
  EXPECT_GT(checked, 20);
}
