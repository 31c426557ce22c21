#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "esg/event_structure.hpp"
#include "esg/format.hpp"
#include "esg/strategy.hpp"

namespace esg {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline const char* dot_shape(Polarity p) {
  switch (p) {
    case Polarity::Plus: return "shape=box, style=filled";
    case Polarity::Minus: return "shape=box";
    case Polarity::Neutral: return "shape=circle";
  }
  return "";
}

}  // namespace detail

/// DOT for an event structure. Nodes in index order, then arrows for
/// immediate causality, then dashed edges for minimal conflicts. `pol` and
/// `labels` may be empty.
inline std::string export_dot(const std::string& name, const EventStructure& e, const std::vector<Polarity>& pol,
                              const std::vector<std::string>& labels = {}) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(name) << " {\n";
  for (EventIdx i = 0; i < e.size(); ++i) {
    os << "  " << detail::dot_quote(e.name(i)) << " [";
    os << (pol.empty() ? "shape=ellipse" : detail::dot_shape(pol[i]));
    if (!labels.empty()) os << ", label=" << detail::dot_quote(labels[i]);
    os << "];\n";
  }
  for (auto [a, b] : e.immediate_causes())
    os << "  " << detail::dot_quote(e.name(a)) << " -> " << detail::dot_quote(e.name(b)) << ";\n";
  for (auto [a, b] : minimal_conflicts(e))
    os << "  " << detail::dot_quote(e.name(a)) << " -> " << detail::dot_quote(e.name(b))
       << " [style=dashed, dir=none];\n";
  os << "}\n";
  return os.str();
}

inline std::string export_dot(const std::string& name, const BareStrategy& s) {
  std::vector<std::string> labels;
  for (EventIdx i = 0; i < s.S.size(); ++i) labels.push_back(s.S.es.name(i) + " : " + s.target.es.name(s.sigma(i)));
  return export_dot(name, s.S.es, s.S.pol, labels);
}

inline std::string export_dot(const Definition& d) {
  switch (d.kind) {
    case DefKind::Es:
    case DefKind::Game: return export_dot(d.name, d.es.es, d.polarised || d.kind == DefKind::Game ? d.es.pol : std::vector<Polarity>{});
    case DefKind::Map: {
      std::vector<std::string> labels;
      for (EventIdx i = 0; i < d.map.source.size(); ++i)
        labels.push_back(d.map.source.name(i) + " : " + (d.map.defined(i) ? d.map.target.name(d.map(i)) : "_"));
      return export_dot(d.name, d.map.source, {}, labels);
    }
    case DefKind::Stopping: return export_dot(d.name, d.stopping.strat);
    default: return export_dot(d.name, d.bare);
  }
}

}  // namespace esg
