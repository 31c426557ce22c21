#include <gtest/gtest.h>

#include <random>

#include "esg/esg.hpp"
#include "support/generators.hpp"

using namespace esg;
using testgen::load;

namespace {
const auto P = Polarity::Plus;
const auto M = Polarity::Minus;
}  // namespace

TEST(Format, HiddenDeadlockHasFiveDefinitions) {
  auto ws = load({"hidden_deadlock.esg"});
  ASSERT_EQ(ws.definitions().size(), 5u);
  EXPECT_EQ(ws.get("GB").kind, DefKind::Game);
  EXPECT_EQ(ws.get("tau_bc").kind, DefKind::Strategy);
  EXPECT_EQ(ws.bare("tau_bc").A.size(), 2u);
}

TEST(Format, FixturesRoundTrip) {
  for (const auto& file : testgen::fixture_files()) {
    auto ws = load({file});
    const auto text = print(ws);
    auto again = parse(text, file + " (printed)");
    EXPECT_TRUE(same_workspace(ws, again)) << file << "\n" << text;
    EXPECT_EQ(print(again), text) << file;
  }
}

TEST(Format, TestsRoundTrip) {
  Workspace ws = load({"hidden_deadlock.esg", "gb_tests.esg"});
  auto again = parse(print(ws));
  EXPECT_TRUE(same_workspace(ws, again));
}

TEST(Format, DuplicateNameIsAnError) {
  const char* text = "game G { event p + }\ngame G { event q + }\n";
  try {
    parse(text, "dup.esg");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(e.message().find("duplicate"), std::string::npos);
  }
}

TEST(Format, SyntaxErrorPosition) {
  const char* text = "game G {\n  event p +\n  cause p <\n}\n";
  try {
    parse(text, "syn.esg");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 1);
    EXPECT_NE(std::string(e.what()).find("syn.esg:4:1"), std::string::npos);
  }
}

TEST(Format, UnknownEventIsAnError) {
  EXPECT_THROW(parse("game G { event p +\n cause p < q }"), LocatedValidationError);
  EXPECT_THROW(parse("game G { event p }"), ParseError);
}

TEST(Format, EsWithoutPolarityAndMaps) {
  auto ws = parse(
      "es E { event a, b; cause a < b }\n"
      "es F { event c }\n"
      "map f : E -> F { a -> c\n b -> _ }\n");
  EXPECT_FALSE(ws.get("E").polarised);
  const auto& f = ws.get("f").map;
  EXPECT_EQ(f(0), 0u);
  EXPECT_FALSE(f.defined(1));
  EXPECT_TRUE(same_workspace(ws, parse(print(ws))));
}

TEST(Format, InvalidMapIsRejected) {
  EXPECT_THROW(parse("es E { event a, b; conflict a ~ b }\nes F { event c }\nmap f : F -> E { c -> a }\n"
                     "map g : E -> F { a -> c\n b -> c }\n"
                     "es G { event x, y }\nmap h : G -> F { x -> c\n y -> c }"),
               LocatedValidationError);
}

TEST(Format, ConsistencyBlocksForNonBinaryConflict) {
  auto ws = parse("es E { event a, b, c; consistent { a b }; consistent { b c }; consistent { a c } }");
  const auto& e = ws.get("E").es.es;
  EXPECT_FALSE(e.consistent(e.full_set()));
  const auto text = print(ws);
  EXPECT_NE(text.find("consistent"), std::string::npos);
  EXPECT_TRUE(same_workspace(ws, parse(text)));
}

TEST(Format, RandomGamesRoundTrip) {
  std::mt19937 rng(51);
  for (int i = 0; i < 40; ++i) {
    Definition d;
    d.kind = DefKind::Game;
    d.name = "G";
    d.es = testgen::random_game(rng, 5, false);
    d.polarised = true;
    Workspace ws;
    ws.add(d);
    EXPECT_TRUE(same_workspace(ws, parse(print(ws))));
  }
}

TEST(Isomorphism, Examples) {
  auto gb = make_game({{"b1", P}, {"b2", P}});
  auto map = find_isomorphism(static_cast<const PolarisedStructure&>(gb), gb);
  ASSERT_TRUE(map.has_value());
  auto chain = make_polarised({{"x", P}, {"y", P}}, {{"x", "y"}});
  auto anti = make_polarised({{"x", P}, {"y", P}});
  EXPECT_FALSE(find_isomorphism(chain, anti).has_value());
  auto flipped = make_polarised({{"x", P}, {"y", M}});
  EXPECT_FALSE(find_isomorphism(anti, flipped).has_value());
  auto renamed = make_polarised({{"u", P}, {"v", P}}, {{"v", "u"}});
  auto phi = find_isomorphism(chain, renamed);
  ASSERT_TRUE(phi.has_value());
  EXPECT_EQ((*phi)[0], 1u);
  EXPECT_EQ((*phi)[1], 0u);
}

TEST(Isomorphism, RandomRelabelling) {
  std::mt19937 rng(52);
  for (int i = 0; i < 40; ++i) {
    auto g = testgen::random_game(rng, 6, false);
    std::vector<EventIdx> perm(g.size());
    for (EventIdx k = 0; k < perm.size(); ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto d = testgen::draft_of(g);
    testgen::Draft shuffled;
    for (EventIdx k = 0; k < g.size(); ++k) {
      EventIdx src = 0;
      while (perm[src] != k) ++src;
      shuffled.add(g.pol[src], 0, "e");
    }
    for (auto [a, b] : d.causes) shuffled.causes.insert({perm[a], perm[b]});
    for (auto [a, b] : d.conflicts) shuffled.conflicts.insert({perm[a], perm[b]});
    auto h = shuffled.structure();
    auto phi = find_isomorphism(static_cast<const PolarisedStructure&>(g), h);
    ASSERT_TRUE(phi.has_value());
    for (EventIdx a = 0; a < g.size(); ++a)
      for (EventIdx b = 0; b < g.size(); ++b) EXPECT_EQ(g.es.leq(a, b), h.es.leq((*phi)[a], (*phi)[b]));
  }
}
