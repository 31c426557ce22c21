#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "esg/dot.hpp"
#include "esg/esg.hpp"

namespace esg::cli {

enum Exit { kYes = 0, kNo = 1, kUsage = 2 };

/// Collects result definitions as .esg text, naming games on the way. Games
/// already in the workspace are referenced, others are emitted first.
class Emitter {
 public:
  explicit Emitter(const Workspace& ws) : ws_(ws) {}

  std::string game(const Game& g, const std::string& suggested) {
    if (g.size() == 0) return "";
    const Game tick = tick_game();
    if (g.es == tick.es && g.pol == tick.pol) return "tick";
    for (const Workspace* w : {&ws_, static_cast<const Workspace*>(&out_)})
      if (auto n = w->game_name(g); !n.empty()) return n;
    Definition d;
    d.kind = DefKind::Game;
    d.name = fresh(suggested);
    d.es = g;
    out_.add(d);
    return d.name;
  }

  void game_def(const std::string& name, const Game& g) {
    Definition d;
    d.kind = DefKind::Game;
    d.name = fresh(name);
    d.es = g;
    out_.add(d);
  }

  void strategy(const std::string& name, const BareStrategy& s) {
    Definition d = header(name, s);
    d.bare = s;
    if (s.N.size() == 0 && s.S.with_polarity(Polarity::Neutral).empty()) {
      d.kind = DefKind::Strategy;
    } else {
      d.kind = DefKind::Bare;
      if (s.N.size() > 0) {
        Definition n;
        n.kind = DefKind::Es;
        n.name = fresh(name + "_N");
        n.es = s.N;
        out_.add(n);
        d.n_name = n.name;
      }
    }
    out_.add(d);
  }

  void stopping(const std::string& name, const StoppingStrategy& s) {
    Definition d = header(name, s.strat);
    d.kind = DefKind::Stopping;
    d.stopping = s;
    out_.add(d);
  }

  void test(const std::string& name, const BareStrategy& t) {
    Definition d;
    d.kind = DefKind::Test;
    d.game_a = game(t.A, name + "_game");
    d.name = fresh(name);
    d.bare = t;
    d.n_name = "*";
    out_.add(d);
  }

  std::string text() const { return print(out_); }

 private:
  Definition header(const std::string& name, const BareStrategy& s) {
    Definition d;
    d.game_a = game(s.A, name + "_A");
    d.game_b = game(s.B, name + "_B");
    if (d.game_b.empty()) d.game_b = "_";
    d.name = fresh(name);
    return d;
  }

  std::string fresh(const std::string& base) const {
    std::string n = base;
    for (int k = 2; ws_.find(n) || out_.find(n); ++k) n = base + "_" + std::to_string(k);
    return n;
  }

  const Workspace& ws_;
  Workspace out_;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-structure games: composition, stopping strategies and testing", "esg"};
  app.require_subcommand(1);
  app.fallthrough();
  std::vector<std::string> files;
  std::string out_path, result_name;
  Limits limits;
  bool exhaustive = false;
  app.add_option("-f,--file", files, ".esg input file (repeatable)");
  app.add_option("--max-configs", limits.max_configs, "configuration enumeration cap");
  app.add_option("--max-primes", limits.max_primes, "prime / secured-bijection cap");
  app.add_option("--max-test-size", limits.max_test_size, "event bound for exhaustive test enumeration");
  app.add_option("--out", out_path, "write the resulting definitions to a file");
  app.add_option("--name", result_name, "name of the resulting definition");
  app.add_flag("--exhaustive", exhaustive, "cross-check preorders by enumerating tests");

  std::vector<std::string> names;
  auto sub = [&](const char* name, const char* help, int min_args, int max_args) {
    auto* c = app.add_subcommand(name, help);
    if (max_args > 0) c->add_option("names", names)->expected(min_args, max_args)->required(min_args > 0);
    return c;
  };
  sub("check", "load and validate every definition", 0, 0);
  sub("configs", "list configurations", 1, 1);
  sub("relations", "immediate causality, minimal conflict, concurrency", 1, 1);
  sub("copycat", "copycat strategy on a game", 1, 1);
  sub("dual", "dual game", 1, 1);
  sub("par", "parallel composition of games", 1, 16);
  sub("compose", "composition T S (S first, then T)", 2, 2);
  sub("interact", "interaction T S before hiding", 2, 2);
  sub("st", "stopping strategy of a bare strategy", 1, 1);
  sub("saturate", "stop at +-maximal configurations", 1, 1);
  sub("may", "may-testing: SUBJECT TEST", 2, 2);
  sub("must", "must-testing: SUBJECT TEST", 2, 2);
  sub("may-preorder", "S1 S2: finite traces of S1 within those of S2", 2, 2);
  sub("must-preorder", "S1 S2: stopping traces of S1 within those of S2", 2, 2);
  sub("synth-may", "S1 S2: test S1 may pass and S2 cannot", 2, 2);
  sub("synth-must", "S1 S2: test S2 must pass and S1 can fail", 2, 2);
  sub("rigid-image", "rigid image of a strategy", 1, 1);
  sub("dot", "Graphviz rendering", 1, 1);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kYes;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    Workspace ws;
    for (const auto& f : files) parse_into(ws, read_text(f), f, limits);
    Emitter em(ws);
    bool emitted = false;
    auto name_or = [&](const std::string& dflt) { return result_name.empty() ? dflt : result_name; };
    auto finish = [&](int code) {
      if (!emitted) return code;
      if (out_path.empty()) {
        out << em.text();
      } else {
        std::ofstream f(out_path);
        if (!f) throw Error("cannot write " + out_path);
        f << em.text();
        out << "wrote " << out_path << "\n";
      }
      return code;
    };
    auto structure_of = [&](const Definition& d) -> const EventStructure& {
      switch (d.kind) {
        case DefKind::Es:
        case DefKind::Game: return d.es.es;
        case DefKind::Map: return d.map.source;
        case DefKind::Stopping: return d.stopping.strat.S.es;
        default: return d.bare.S.es;
      }
    };
    auto in_game = [&](const StoppingStrategy& s) {
      if (s.strat.A.size() != 0) throw GameMismatch("expected a strategy in a game (empty A)");
    };

    if (cmd == "check") {
      for (const auto& d : ws.definitions()) {
        out << d.name << ": " << to_string(d.kind) << ", " << structure_of(d).size() << " events";
        if (d.kind == DefKind::Game) out << (is_race_free(static_cast<const Game&>(d.es), limits) ? ", race-free" : ", racy");
        if (d.kind == DefKind::Strategy || d.kind == DefKind::Bare || d.kind == DefKind::Test) out << ", valid";
        out << "\n";
        if (d.kind == DefKind::Stopping) {
          auto l = lint_stopping(d.stopping, limits);
          if (!l.axiom_i) out << "  lint: " << l.witness_i << " lies below no stopping configuration\n";
          if (!l.axiom_ii) out << "  lint: " << l.witness_ii << " is +-maximal below a stopping one but not stopping\n";
          if (!l.plus_maximal_stopping) out << "  lint: +-maximal " << l.witness_plus << " is not stopping\n";
        }
      }
      return kYes;
    }
    if (cmd == "configs") {
      const auto& d = ws.get(names[0]);
      const auto& e = structure_of(d);
      for (const auto& x : e.configurations(limits.max_configs)) {
        const bool stop = d.kind == DefKind::Stopping &&
                          std::find(d.stopping.stopping.begin(), d.stopping.stopping.end(), x) != d.stopping.stopping.end();
        out << e.format(x) << (stop ? " stop" : "") << "\n";
      }
      return kYes;
    }
    if (cmd == "relations") {
      const auto& e = structure_of(ws.get(names[0]));
      auto r = derive_relations(e);
      for (auto [a, b] : r.immediate) out << "cause " << e.name(a) << " < " << e.name(b) << "\n";
      for (auto [a, b] : minimal_conflicts(e)) out << "conflict " << e.name(a) << " ~ " << e.name(b) << "\n";
      for (auto [a, b] : r.concurrent) out << "concurrent " << e.name(a) << " | " << e.name(b) << "\n";
      return kYes;
    }
    if (cmd == "copycat") {
      em.strategy(name_or("cc_" + names[0]), copycat_strategy(ws.game(names[0]), limits));
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "dual") {
      em.game_def(name_or(names[0] + "_dual"), dual(ws.game(names[0])));
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "par") {
      std::vector<Game> parts;
      for (const auto& n : names) parts.push_back(ws.game(n));
      em.game_def(name_or("par"), parallel(parts));
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "compose" || cmd == "interact") {
      const auto& t = names[0];
      const auto& s = names[1];
      const bool stopping = ws.get(s).kind == DefKind::Stopping || ws.get(t).kind == DefKind::Stopping;
      if (cmd == "compose") {
        if (stopping)
          em.stopping(name_or("composed"), compose_stopping(ws.stopping(s, limits), ws.stopping(t, limits), limits));
        else
          em.strategy(name_or("composed"), compose(ws.bare(s), ws.bare(t), limits));
      } else if (stopping) {
        auto si = interact_stopping(ws.stopping(s, limits), ws.stopping(t, limits), limits);
        em.strategy(name_or("interaction"), si.interaction.strategy);
        for (const auto& w : si.stopping) out << "# stop " << si.interaction.strategy.S.es.format(w) << "\n";
      } else {
        em.strategy(name_or("interaction"), interact(ws.bare(s), ws.bare(t), limits).strategy);
      }
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "st") {
      em.stopping(name_or("st_" + names[0]), stop_of(ws.bare(names[0]), limits));
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "saturate") {
      em.stopping(name_or("sat_" + names[0]), saturate_stopping(ws.strategy(names[0]), limits));
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "may" || cmd == "must") {
      auto subject = ws.stopping(names[0], limits);
      auto test = ws.bare(names[1]);
      const bool may = cmd == "may";
      auto v = may ? may_pass(subject, test, limits) : must_pass(subject, test, limits);
      out << (v.pass ? "pass" : "fail") << "\n";
      if (may && v.pass) out << "witness: " << v.witness << "\n";
      if (may && !v.pass) out << "no stopping configuration pairs with a successful test configuration\n";
      if (!may && !v.pass) out << "counterexample: " << v.witness << "\n";
      return v.pass ? kYes : kNo;
    }
    if (cmd == "may-preorder" || cmd == "must-preorder" || cmd == "synth-may" || cmd == "synth-must") {
      auto s1 = ws.stopping(names[0], limits);
      auto s2 = ws.stopping(names[1], limits);
      const bool may = cmd == "may-preorder" || cmd == "synth-may";
      auto gap = find_gap(s1, s2, may ? GapKind::May : GapKind::Must, limits);
      const std::string gap_text =
          gap ? format_trace(s1.strat, gap->alpha) + " of " + s1.strat.S.es.format(gap->x1) : std::string();
      if (cmd == "synth-may" || cmd == "synth-must") {
        if (!gap) {
          out << "no gap: " << (may ? "may" : "must") << "-preorder holds\n";
          return kNo;
        }
        in_game(s1);
        out << "# gap " << gap_text << "\n";
        if (may)
          em.test(name_or("may_test"), synthesize_may_test(s2.strat, gap->alpha, limits));
        else
          em.test(name_or("must_test"), synthesize_must_test(s2, gap->alpha, limits));
        emitted = true;
        return finish(kYes);
      }
      out << (gap ? "false" : "true") << "\n";
      if (gap) out << "gap: " << gap_text << "\n";
      if (exhaustive) {
        in_game(s1);
        auto tests = enumerate_tests(s1.strat.B, limits.max_test_size, !may, limits);
        std::size_t found = 0;
        for (const auto& t : tests) {
          const bool sep = may ? may_pass(s1, t, limits).pass && !may_pass(s2, t, limits).pass
                               : must_pass(s2, t, limits).pass && !must_pass(s1, t, limits).pass;
          if (sep && found++ == 0) {
            em.test(name_or("separating_test"), t);
            emitted = true;
          }
        }
        out << "exhaustive: " << found << " of " << tests.size() << " tests up to " << limits.max_test_size
            << " events separate\n";
      }
      return finish(gap ? kNo : kYes);
    }
    if (cmd == "rigid-image") {
      const auto& d = ws.get(names[0]);
      if (d.kind == DefKind::Stopping)
        em.stopping(name_or("image_" + names[0]), rigid_image_stopping(d.stopping));
      else
        em.strategy(name_or("image_" + names[0]), rigid_image(ws.strategy(names[0])).sigma0);
      emitted = true;
      return finish(kYes);
    }
    if (cmd == "dot") {
      out << export_dot(ws.get(names[0]));
      return kYes;
    }
    err << "unknown command " << cmd << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace esg::cli
