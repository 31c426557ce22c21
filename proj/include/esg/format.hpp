#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esg/errors.hpp"
#include "esg/event_structure.hpp"
#include "esg/games.hpp"
#include "esg/map.hpp"
#include "esg/strategy.hpp"
#include "esg/testing.hpp"

namespace esg {

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int col, const std::string& msg)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line), col_(col), message_(msg) {}
  int line() const { return line_; }
  int column() const { return col_; }
  const std::string& message() const { return message_; }

 private:
  int line_, col_;
  std::string message_;
};

/// A validation failure located at the definition that caused it.
class LocatedValidationError : public ValidationError {
 public:
  LocatedValidationError(const std::string& where, Diagnostics d) : ValidationError(std::move(d)), where_(where) {
    what_ = where_ + ": " + ValidationError::what();
  }
  const char* what() const noexcept override { return what_.c_str(); }
  const std::string& where() const { return where_; }

 private:
  std::string where_, what_;
};

enum class DefKind { Es, Game, Map, Strategy, Bare, Stopping, Test };

inline const char* to_string(DefKind k) {
  switch (k) {
    case DefKind::Es: return "es";
    case DefKind::Game: return "game";
    case DefKind::Map: return "map";
    case DefKind::Strategy: return "strategy";
    case DefKind::Bare: return "bare";
    case DefKind::Stopping: return "stopping";
    case DefKind::Test: return "test";
  }
  return "?";
}

struct Definition {
  DefKind kind = DefKind::Es;
  std::string name;
  int line = 0;
  PolarisedStructure es;  // es and game definitions
  bool polarised = true;
  ESMap map;
  std::string src, dst;   // map endpoints
  BareStrategy bare;      // strategy, bare and test definitions
  StoppingStrategy stopping;
  std::string game_a, game_b;  // names of A and B ("" when A is empty)
  std::string n_name;          // bare: name of N, "*" when automatic, "" when empty
};

/// Named definitions loaded from .esg text.
class Workspace {
 public:
  const std::vector<Definition>& definitions() const { return defs_; }

  const Definition* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &defs_[it->second];
  }
  const Definition& get(const std::string& name) const {
    auto* d = find(name);
    if (!d) throw Error("unknown definition: " + name);
    return *d;
  }

  void add(Definition d) {
    if (index_.count(d.name)) throw Error("duplicate definition: " + d.name);
    index_.emplace(d.name, defs_.size());
    defs_.push_back(std::move(d));
  }

  const Game& game(const std::string& name) const {
    const auto& d = get(name);
    if (d.kind != DefKind::Game) throw Error(name + " is not a game");
    return static_cast<const Game&>(d.es);
  }

  /// Any strategy-like definition viewed as a bare strategy.
  BareStrategy bare(const std::string& name) const {
    const auto& d = get(name);
    switch (d.kind) {
      case DefKind::Strategy:
      case DefKind::Bare:
      case DefKind::Test: return d.bare;
      case DefKind::Stopping: return d.stopping.strat;
      default: throw Error(name + " is not a strategy");
    }
  }

  Strategy strategy(const std::string& name) const {
    auto b = bare(name);
    if (b.N.size() != 0 || b.S.has_neutral()) throw Error(name + " has neutral events; use st first");
    return Strategy(std::move(b));
  }

  /// Stopping definitions as given; strategies saturated; bare strategies through St.
  StoppingStrategy stopping(const std::string& name, const Limits& limits = {}) const {
    const auto& d = get(name);
    if (d.kind == DefKind::Stopping) return d.stopping;
    if (d.kind == DefKind::Strategy) return saturate_stopping(Strategy(d.bare), limits);
    if (d.kind == DefKind::Bare || d.kind == DefKind::Test) return stop_of(d.bare, limits);
    throw Error(name + " is not a strategy");
  }

  /// Name of a game definition structurally equal to g, if any.
  std::string game_name(const Game& g) const {
    for (const auto& d : defs_)
      if (d.kind == DefKind::Game && d.es.es == g.es && d.es.pol == g.pol) return d.name;
    return "";
  }

 private:
  std::vector<Definition> defs_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

enum class Tok { Id, LBrace, RBrace, Semi, Colon, Arrow, Lt, Tilde, Plus, Minus, Pipe, Star, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline bool id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.'@/!?$^").find(c) != std::string_view::npos;
}

inline std::vector<Token> lex(std::string_view s, const std::string& source) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    const int l = line, cl = col;
    if (id_char(c)) {
      std::size_t j = i;
      while (j < s.size() && id_char(s[j])) ++j;
      out.push_back({Tok::Id, std::string(s.substr(i, j - i)), l, cl});
      adv(j - i);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", l, cl});
      adv(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ';': k = Tok::Semi; break;
      case ':': k = Tok::Colon; break;
      case '<': k = Tok::Lt; break;
      case '~': k = Tok::Tilde; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '|': k = Tok::Pipe; break;
      case '*': k = Tok::Star; break;
      case ',': k = Tok::Comma; break;
      default: throw ParseError(source, l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), l, cl});
    adv(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

/// Event-structure body as written, before resolution.
struct Body {
  struct Ev {
    std::string name;
    std::optional<Polarity> pol;
    int line, col;
  };
  std::vector<Ev> events;
  std::vector<std::pair<std::string, std::string>> causes, conflicts;
  std::optional<std::vector<std::vector<std::string>>> consistent;
  std::vector<std::pair<std::string, std::string>> assigns;
  std::vector<std::vector<std::string>> stops;
  std::string strategy_ref, st_ref;
  bool saturate = false;
};

class Parser {
 public:
  Parser(std::string_view text, std::string source, Workspace& ws, const Limits& limits)
      : toks_(lex(text, source)), source_(std::move(source)), ws_(ws), limits_(limits) {}

  void run() {
    while (peek().kind != Tok::End) {
      skip_semis();
      if (peek().kind == Tok::End) break;
      definition();
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string source_;
  Workspace& ws_;
  Limits limits_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(source_, t.line, t.col, msg); }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what + (peek().kind == Tok::End ? "" : ", found '" + peek().text + "'"));
    return next();
  }
  std::string ident(const char* what = "identifier") { return expect(Tok::Id, what).text; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(const char* kw) {
    if (peek().kind == Tok::Id && peek().text == kw) {
      ++pos_;
      return true;
    }
    return false;
  }
  void skip_semis() {
    while (accept(Tok::Semi) || accept(Tok::Comma)) {
    }
  }

  template <class F>
  auto located(const Token& at, const std::string& name, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ValidationError& e) {
      throw LocatedValidationError(source_ + ":" + std::to_string(at.line) + ": " + name, e.diagnostics());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(at, e.what());
    }
  }

  std::optional<Polarity> polarity() {
    if (accept(Tok::Plus)) return Polarity::Plus;
    if (accept(Tok::Minus)) return Polarity::Minus;
    if (peek().kind == Tok::Id && peek().text == "0") {
      ++pos_;
      return Polarity::Neutral;
    }
    return std::nullopt;
  }

  std::vector<std::string> id_set() {
    expect(Tok::LBrace, "'{'");
    std::vector<std::string> ids;
    while (!accept(Tok::RBrace)) {
      if (accept(Tok::Comma)) continue;
      ids.push_back(ident("event name"));
    }
    return ids;
  }

  Body body(bool allow_refs) {
    Body b;
    expect(Tok::LBrace, "'{'");
    for (;;) {
      skip_semis();
      if (accept(Tok::RBrace)) break;
      const Token kw = expect(Tok::Id, "statement");
      if (kw.text == "event") {
        do {
          const Token id = expect(Tok::Id, "event name");
          b.events.push_back({id.text, polarity(), id.line, id.col});
        } while (accept(Tok::Comma));
      } else if (kw.text == "cause") {
        std::string prev = ident("event name");
        expect(Tok::Lt, "'<'");
        do {
          std::string cur = ident("event name");
          b.causes.emplace_back(prev, cur);
          prev = cur;
        } while (accept(Tok::Lt));
      } else if (kw.text == "conflict") {
        std::vector<std::string> ids{ident("event name")};
        expect(Tok::Tilde, "'~'");
        do ids.push_back(ident("event name"));
        while (accept(Tok::Tilde));
        for (std::size_t i = 0; i < ids.size(); ++i)
          for (std::size_t j = i + 1; j < ids.size(); ++j) b.conflicts.emplace_back(ids[i], ids[j]);
      } else if (kw.text == "consistent") {
        if (!b.consistent) b.consistent.emplace();
        b.consistent->push_back(id_set());
      } else if (kw.text == "assign") {
        std::string a = ident("event name");
        expect(Tok::Arrow, "'->'");
        b.assigns.emplace_back(a, ident("target event"));
      } else if (allow_refs && kw.text == "stop") {
        b.stops.push_back(id_set());
      } else if (allow_refs && kw.text == "strategy") {
        b.strategy_ref = ident("strategy name");
      } else if (allow_refs && kw.text == "st") {
        b.st_ref = ident("bare strategy name");
      } else if (allow_refs && kw.text == "saturate") {
        b.saturate = true;
      } else {
        fail(kw, "unknown statement '" + kw.text + "'");
      }
    }
    return b;
  }

  EventStructure structure(const Body& b) {
    std::vector<std::string> names;
    for (const auto& e : b.events) names.push_back(e.name);
    return validate_event_structure(RawStructure{names, b.causes, b.conflicts, b.consistent}, limits_);
  }

  const Definition& lookup(const Token& at, const std::string& name) {
    auto* d = ws_.find(name);
    if (!d) fail(at, "unknown definition '" + name + "'");
    return *d;
  }

  Game game_ref(const Token& at, const std::string& name) {
    if (name == "tick") return tick_game();
    if (name == "_") return Game();
    const auto& d = lookup(at, name);
    if (d.kind != DefKind::Game) fail(at, "'" + name + "' is not a game");
    return static_cast<const Game&>(d.es);
  }

  void add(Definition d, const Token& at) {
    if (ws_.find(d.name)) fail(at, "duplicate definition '" + d.name + "'");
    ws_.add(std::move(d));
  }

  void definition() {
    const Token kw = expect(Tok::Id, "definition keyword");
    const Token name_tok = expect(Tok::Id, "definition name");
    Definition d;
    d.name = name_tok.text;
    d.line = kw.line;
    if (kw.text == "es" || kw.text == "game") {
      Body b = body(false);
      located(name_tok, d.name, [&] {
        auto es = structure(b);
        std::vector<Polarity> pol;
        bool all = true, none = true;
        for (const auto& e : b.events) {
          pol.push_back(e.pol.value_or(Polarity::Plus));
          all = all && e.pol.has_value();
          none = none && !e.pol.has_value();
        }
        if (kw.text == "game") {
          if (!all) throw Error("every game event needs a polarity");
          d.kind = DefKind::Game;
          d.es = Game(PolarisedStructure(es, pol));
        } else {
          if (!all && !none) throw Error("give polarities for all events or none");
          d.kind = DefKind::Es;
          d.polarised = all;
          d.es = PolarisedStructure(es, pol);
        }
        return 0;
      });
    } else if (kw.text == "map") {
      expect(Tok::Colon, "':'");
      const Token st = expect(Tok::Id, "source");
      expect(Tok::Arrow, "'->'");
      const Token dt = expect(Tok::Id, "target");
      const auto& src = source_structure(st);
      const auto& dst = source_structure(dt);
      expect(Tok::LBrace, "'{'");
      std::vector<EventIdx> f(src.size(), kUndefined);
      for (;;) {
        skip_semis();
        if (accept(Tok::RBrace)) break;
        const Token a = expect(Tok::Id, "event name");
        expect(Tok::Arrow, "'->'");
        const Token b = expect(Tok::Id, "target event");
        auto ia = src.find(a.text);
        if (!ia) fail(a, "unknown event '" + a.text + "'");
        if (b.text == "_") continue;
        auto ib = dst.find(b.text);
        if (!ib) fail(b, "unknown event '" + b.text + "'");
        f[*ia] = *ib;
      }
      d.kind = DefKind::Map;
      d.src = st.text;
      d.dst = dt.text;
      d.map = ESMap(src, dst, std::move(f));
      located(name_tok, d.name, [&] {
        auto r = validate_map(d.map, limits_);
        if (!r.valid) throw ValidationError(r.diagnostics);
        return 0;
      });
    } else if (kw.text == "strategy") {
      expect(Tok::Colon, "':'");
      strategy_header(d);
      Body b = body(false);
      d.kind = DefKind::Strategy;
      located(name_tok, d.name, [&] {
        d.bare = Strategy(build_bare(b, game_or_empty(name_tok, d.game_a), PolarisedStructure(),
                                     game_ref(name_tok, d.game_b), false, false));
        return 0;
      });
    } else if (kw.text == "bare") {
      expect(Tok::Colon, "':'");
      const Token a = expect(Tok::Id, "game or _");
      expect(Tok::Pipe, "'|'");
      std::string n_name;
      if (accept(Tok::Star))
        n_name = "*";
      else
        n_name = ident("neutral structure, _ or *");
      expect(Tok::Pipe, "'|'");
      const Token bt = expect(Tok::Id, "game");
      d.game_a = a.text == "_" ? "" : a.text;
      d.game_b = bt.text;
      d.n_name = n_name == "_" ? "" : n_name;
      Body b = body(false);
      d.kind = DefKind::Bare;
      PolarisedStructure n;
      if (!d.n_name.empty() && d.n_name != "*") {
        const auto& nd = lookup(a, d.n_name);
        if (nd.kind != DefKind::Es) fail(a, "'" + d.n_name + "' is not an es");
        n = PolarisedStructure(nd.es.es, std::vector<Polarity>(nd.es.size(), Polarity::Neutral));
      }
      located(name_tok, d.name, [&] {
        d.bare = build_bare(b, game_or_empty(a, d.game_a), n, game_ref(bt, d.game_b), d.n_name == "*", false);
        return 0;
      });
    } else if (kw.text == "test") {
      expect(Tok::Colon, "':'");
      const Token g = expect(Tok::Id, "game");
      d.game_a = g.text;
      d.game_b = "tick";
      d.n_name = "*";
      Body b = body(false);
      d.kind = DefKind::Test;
      located(name_tok, d.name, [&] {
        d.bare = build_bare(b, game_ref(g, g.text), PolarisedStructure(), tick_game(), true, true);
        return 0;
      });
    } else if (kw.text == "stopping") {
      d.kind = DefKind::Stopping;
      std::optional<Strategy> inline_strategy;
      if (accept(Tok::Colon)) strategy_header(d);
      Body b = body(true);
      located(name_tok, d.name, [&] {
        Strategy s;
        std::vector<EventSet> m;
        const int sources = (d.game_b.empty() ? 0 : 1) + !b.strategy_ref.empty() + !b.st_ref.empty();
        if (sources != 1) throw Error("a stopping strategy needs exactly one of an inline body, strategy REF or st REF");
        if (!d.game_b.empty()) {
          s = Strategy(build_bare(b, game_or_empty(name_tok, d.game_a), PolarisedStructure(),
                                  game_ref(name_tok, d.game_b), false, false));
        } else if (!b.strategy_ref.empty()) {
          s = ws_.strategy(b.strategy_ref);
          const auto& ref = ws_.get(b.strategy_ref);
          d.game_a = ref.game_a;
          d.game_b = ref.game_b;
        } else {
          auto st = stop_of(ws_.bare(b.st_ref), limits_);
          s = st.strat;
          m = st.stopping;
          const auto& ref = ws_.get(b.st_ref);
          d.game_a = ref.game_a;
          d.game_b = ref.game_b;
        }
        if (!b.events.empty() && d.game_b.empty()) throw Error("events given without an inline strategy");
        for (const auto& ids : b.stops) {
          EventSet x(s.S.size());
          for (const auto& id : ids) x.set(s.S.es.index_of(id));
          m.push_back(x);
        }
        if (b.saturate)
          for (auto& x : plus_maximal_configs(s.S, limits_)) m.push_back(x);
        d.stopping = StoppingStrategy(std::move(s), std::move(m));
        return 0;
      });
    } else {
      fail(kw, "unknown definition keyword '" + kw.text + "'");
    }
    add(std::move(d), name_tok);
  }

  void strategy_header(Definition& d) {
    const Token first = expect(Tok::Id, "game");
    if (accept(Tok::Arrow)) {
      d.game_a = first.text == "_" ? "" : first.text;
      d.game_b = ident("game");
    } else {
      d.game_b = first.text;
    }
    if (!d.game_a.empty()) game_ref(first, d.game_a);
    game_ref(first, d.game_b);
  }

  Game game_or_empty(const Token& at, const std::string& name) { return name.empty() ? Game() : game_ref(at, name); }

  const EventStructure& source_structure(const Token& at) {
    const auto& d = lookup(at, at.text);
    switch (d.kind) {
      case DefKind::Es:
      case DefKind::Game: return d.es.es;
      case DefKind::Strategy:
      case DefKind::Bare:
      case DefKind::Test: return d.bare.S.es;
      case DefKind::Stopping: return d.stopping.strat.S.es;
      default: fail(at, "'" + at.text + "' has no event structure");
    }
  }

  /// Resolves assignments, infers missing polarities from targets and builds
  /// the automatic neutral component when requested.
  BareStrategy build_bare(const Body& b, const Game& a, PolarisedStructure n, const Game& g, bool auto_n,
                          bool plain_is_in) {
    auto es = structure(b);
    std::vector<std::optional<Polarity>> declared;
    for (const auto& e : b.events) declared.push_back(e.pol);
    if (auto_n) {
      std::vector<std::string> nn;
      for (std::size_t i = 0; i < b.events.size(); ++i)
        if (declared[i] == Polarity::Neutral) nn.push_back(b.events[i].name);
      n = PolarisedStructure(make_structure(nn), std::vector<Polarity>(nn.size(), Polarity::Neutral));
    }
    PolarisedStructure target = strategy_target(a, n, g);
    std::vector<EventIdx> f(es.size(), kUndefined);
    for (const auto& [s, t] : b.assigns) {
      auto is = es.find(s);
      if (!is) throw UnknownEvent(s);
      std::optional<EventIdx> it;
      if (plain_is_in && t != "tick") it = target.es.find("in." + t);
      if (!it) it = target.es.find(t);
      if (!it) throw UnknownEvent(t);
      f[*is] = *it;
    }
    std::vector<Polarity> pol(es.size());
    for (EventIdx i = 0; i < es.size(); ++i) {
      if (auto_n && declared[i] == Polarity::Neutral) {
        if (f[i] != kUndefined) throw Error("neutral event " + es.name(i) + " is assigned automatically");
        f[i] = *target.es.find("mid." + es.name(i));
      }
      if (declared[i])
        pol[i] = *declared[i];
      else if (f[i] != kUndefined)
        pol[i] = target.pol[f[i]];
      else
        pol[i] = Polarity::Plus;
    }
    return validate_bare_strategy(BareStrategy(a, n, g, PolarisedStructure(es, pol), f), limits_);
  }
};

}  // namespace detail

inline void parse_into(Workspace& ws, std::string_view text, const std::string& source = "<input>",
                       const Limits& limits = {}) {
  detail::Parser(text, source, ws, limits).run();
}

inline Workspace parse(std::string_view text, const std::string& source = "<input>", const Limits& limits = {}) {
  Workspace ws;
  parse_into(ws, text, source, limits);
  return ws;
}

namespace detail {

inline std::string pol_suffix(Polarity p) {
  switch (p) {
    case Polarity::Plus: return " +";
    case Polarity::Minus: return " -";
    case Polarity::Neutral: return " 0";
  }
  return "";
}

inline void print_structure(std::ostream& os, const PolarisedStructure& p, bool with_pol) {
  const auto& e = p.es;
  for (EventIdx i = 0; i < e.size(); ++i) os << "  event " << e.name(i) << (with_pol ? pol_suffix(p.pol[i]) : "") << "\n";
  for (auto [a, b] : e.immediate_causes()) os << "  cause " << e.name(a) << " < " << e.name(b) << "\n";
  if (binary_consistency(e)) {
    for (auto [a, b] : minimal_conflicts(e)) os << "  conflict " << e.name(a) << " ~ " << e.name(b) << "\n";
  } else {
    for (const auto& m : e.maximal_consistent()) {
      os << "  consistent {";
      m.for_each([&](EventIdx i) { os << " " << e.name(i); });
      os << " }\n";
    }
  }
}

inline void print_assigns(std::ostream& os, const BareStrategy& s, bool skip_neutral, bool strip_in) {
  for (EventIdx i = 0; i < s.S.size(); ++i) {
    if (skip_neutral && s.S.pol[i] == Polarity::Neutral) continue;
    std::string t = s.target.es.name(s.sigma(i));
    if (strip_in && s.in_A(s.sigma(i))) t = t.substr(3);
    os << "  assign " << s.S.es.name(i) << " -> " << t << "\n";
  }
}

inline std::string header_games(const std::string& a, const std::string& b) { return (a.empty() ? "" : a + " -> ") + b; }

}  // namespace detail

/// Text for one definition. Strategies produced by operations are printed
/// with the given game names.
inline std::string print_definition(const Definition& d) {
  std::ostringstream os;
  switch (d.kind) {
    case DefKind::Es:
    case DefKind::Game:
      os << to_string(d.kind) << " " << d.name << " {\n";
      detail::print_structure(os, d.es, d.polarised || d.kind == DefKind::Game);
      os << "}\n";
      break;
    case DefKind::Map:
      os << "map " << d.name << " : " << d.src << " -> " << d.dst << " {\n";
      for (EventIdx i = 0; i < d.map.source.size(); ++i)
        os << "  " << d.map.source.name(i) << " -> " << (d.map.defined(i) ? d.map.target.name(d.map(i)) : "_") << "\n";
      os << "}\n";
      break;
    case DefKind::Strategy:
      os << "strategy " << d.name << " : " << detail::header_games(d.game_a, d.game_b) << " {\n";
      detail::print_structure(os, d.bare.S, true);
      detail::print_assigns(os, d.bare, false, false);
      os << "}\n";
      break;
    case DefKind::Bare:
      os << "bare " << d.name << " : " << (d.game_a.empty() ? "_" : d.game_a) << " | "
         << (d.n_name.empty() ? "_" : d.n_name) << " | " << d.game_b << " {\n";
      detail::print_structure(os, d.bare.S, true);
      detail::print_assigns(os, d.bare, d.n_name == "*", false);
      os << "}\n";
      break;
    case DefKind::Test:
      os << "test " << d.name << " : " << d.game_a << " {\n";
      detail::print_structure(os, d.bare.S, true);
      detail::print_assigns(os, d.bare, true, true);
      os << "}\n";
      break;
    case DefKind::Stopping: {
      const auto& s = d.stopping.strat;
      os << "stopping " << d.name << " : " << detail::header_games(d.game_a, d.game_b) << " {\n";
      detail::print_structure(os, s.S, true);
      detail::print_assigns(os, s, false, false);
      for (const auto& x : d.stopping.stopping) {
        os << "  stop {";
        x.for_each([&](EventIdx i) { os << " " << s.S.es.name(i); });
        os << " }\n";
      }
      os << "}\n";
      break;
    }
  }
  return os.str();
}

inline std::string print(const Workspace& ws) {
  std::string out;
  for (const auto& d : ws.definitions()) {
    if (!out.empty()) out += "\n";
    out += print_definition(d);
  }
  return out;
}

/// Semantic equality of two definitions (same kind and same structures).
inline bool same_definition(const Definition& a, const Definition& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  switch (a.kind) {
    case DefKind::Es:
    case DefKind::Game: return a.es == b.es && a.polarised == b.polarised;
    case DefKind::Map: return a.map.source == b.map.source && a.map.target == b.map.target && a.map.f == b.map.f;
    case DefKind::Strategy:
    case DefKind::Bare:
    case DefKind::Test:
      return a.bare.S == b.bare.S && a.bare.target == b.bare.target && a.bare.sigma.f == b.bare.sigma.f;
    case DefKind::Stopping:
      return a.stopping.strat.S == b.stopping.strat.S && a.stopping.strat.target == b.stopping.strat.target &&
             a.stopping.strat.sigma.f == b.stopping.strat.sigma.f && a.stopping.stopping == b.stopping.stopping;
  }
  return false;
}

inline bool same_workspace(const Workspace& a, const Workspace& b) {
  if (a.definitions().size() != b.definitions().size()) return false;
  for (std::size_t i = 0; i < a.definitions().size(); ++i)
    if (!same_definition(a.definitions()[i], b.definitions()[i])) return false;
  return true;
}

}  // namespace esg
