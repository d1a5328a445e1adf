// Sculpting directed bigraphs: data model, EPM classification, presets,
// perfect matchings, undirected projection and JSON/DOT interchange.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sculpt/fock.hpp"

namespace sculpt {

/// Single-boson internal state alpha|0> + beta|1>.
struct InternalState {
  Amplitude alpha{1.0, 0.0};
  Amplitude beta{0.0, 0.0};

  static InternalState zero() { return {1.0, 0.0}; }
  static InternalState one() { return {0.0, 1.0}; }
  static InternalState plus() { return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}; }
  static InternalState minus() { return {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2}; }

  double norm2() const { return std::norm(alpha) + std::norm(beta); }

  bool approx(const InternalState& o, double tol = kTolerance) const {
    return std::abs(alpha - o.alpha) < tol && std::abs(beta - o.beta) < tol;
  }

  /// "0", "1", "+", "-" for the named states, "custom" otherwise.
  std::string name() const {
    if (approx(zero())) return "0";
    if (approx(one())) return "1";
    if (approx(plus())) return "+";
    if (approx(minus())) return "-";
    return "custom";
  }

  static std::optional<InternalState> from_name(const std::string& n) {
    if (n == "0") return zero();
    if (n == "1") return one();
    if (n == "+") return plus();
    if (n == "-") return minus();
    return std::nullopt;
  }
};

inline Amplitude overlap(const InternalState& a, const InternalState& b) {
  return std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta;
}

enum class CircleKind { Main, Ancilla };

struct Circle {
  std::string label;
  CircleKind kind = CircleKind::Main;
};

/// Directed edge from a circle (spatial mode) into a dot.
struct Leg {
  std::string mode;
  InternalState state;
  Amplitude amplitude{1.0, 0.0};
};

/// One single-boson subtraction operator.
struct Dot {
  int id = 0;
  std::vector<Leg> legs;
};

struct EdgeRef {
  std::size_t dot = 0;
  std::size_t leg = 0;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Main circles are labelled "1".."n_main"; ancilla circles carry their own labels.
/// Dots are kept in application order.
class SculptingBigraph {
 public:
  SculptingBigraph() = default;
  SculptingBigraph(int n_main, std::vector<std::string> ancillas, std::vector<Dot> dots)
      : n_main_(n_main), ancillas_(std::move(ancillas)), dots_(std::move(dots)) {
    if (n_main_ < 0) throw GraphError("n_main must be non-negative");
    std::vector<std::string> labels;
    for (const auto& c : circles()) {
      if (std::find(labels.begin(), labels.end(), c.label) != labels.end())
        throw GraphError("duplicate circle label '" + c.label + "'");
      labels.push_back(c.label);
    }
    for (const auto& d : dots_)
      for (const auto& l : d.legs)
        if (!has_circle(l.mode))
          throw GraphError("dot " + std::to_string(d.id) + " references unknown mode '" +
                           l.mode + "'");
  }

  int n_main() const { return n_main_; }
  int n_ancilla() const { return static_cast<int>(ancillas_.size()); }
  const std::vector<std::string>& ancillas() const { return ancillas_; }
  const std::vector<Dot>& dots() const { return dots_; }

  static std::string main_label(int j) { return std::to_string(j); }

  std::vector<Circle> circles() const {
    std::vector<Circle> out;
    for (int j = 1; j <= n_main_; ++j) out.push_back({main_label(j), CircleKind::Main});
    for (const auto& a : ancillas_) out.push_back({a, CircleKind::Ancilla});
    return out;
  }

  bool has_circle(const std::string& label) const {
    for (const auto& c : circles())
      if (c.label == label) return true;
    return false;
  }

  CircleKind kind_of(const std::string& label) const {
    for (const auto& c : circles())
      if (c.label == label) return c.kind;
    throw GraphError("unknown circle '" + label + "'");
  }

  /// Position of a circle in circles(): main modes first, then ancillas.
  std::size_t circle_index(const std::string& label) const {
    auto cs = circles();
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (cs[i].label == label) return i;
    throw GraphError("unknown circle '" + label + "'");
  }

  std::vector<EdgeRef> edges_from(const std::string& label) const {
    std::vector<EdgeRef> out;
    for (std::size_t d = 0; d < dots_.size(); ++d)
      for (std::size_t l = 0; l < dots_[d].legs.size(); ++l)
        if (dots_[d].legs[l].mode == label) out.push_back({d, l});
    return out;
  }

  const Leg& leg(EdgeRef e) const { return dots_.at(e.dot).legs.at(e.leg); }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& d : dots_) n += d.legs.size();
    return n;
  }

  /// Structural problems (empty dots, idle circles, normalization, bad internal states).
  std::vector<std::string> diagnostics() const {
    std::vector<std::string> out;
    for (const auto& d : dots_) {
      if (d.legs.empty()) out.push_back("dot " + std::to_string(d.id) + " has no incoming edge");
      double s = 0;
      for (const auto& l : d.legs) {
        s += std::norm(l.amplitude);
        if (std::abs(l.state.norm2() - 1.0) > kTolerance)
          out.push_back("dot " + std::to_string(d.id) + ": internal state on leg from '" +
                        l.mode + "' is not normalized");
      }
      if (!d.legs.empty() && std::abs(s - 1.0) > kTolerance)
        out.push_back("dot " + std::to_string(d.id) + " violates normalization (sum |amp|^2 = " +
                      std::to_string(s) + ")");
    }
    for (const auto& c : circles())
      if (edges_from(c.label).empty()) out.push_back("circle '" + c.label + "' has no outgoing edge");
    return out;
  }

  friend bool operator==(const SculptingBigraph& a, const SculptingBigraph& b) {
    if (a.n_main_ != b.n_main_ || a.ancillas_ != b.ancillas_ || a.dots_.size() != b.dots_.size())
      return false;
    for (std::size_t d = 0; d < a.dots_.size(); ++d) {
      const auto& x = a.dots_[d];
      const auto& y = b.dots_[d];
      if (x.id != y.id || x.legs.size() != y.legs.size()) return false;
      for (std::size_t l = 0; l < x.legs.size(); ++l) {
        if (x.legs[l].mode != y.legs[l].mode || !x.legs[l].state.approx(y.legs[l].state) ||
            std::abs(x.legs[l].amplitude - y.legs[l].amplitude) > kTolerance)
          return false;
      }
    }
    return true;
  }

 private:
  int n_main_ = 0;
  std::vector<std::string> ancillas_;
  std::vector<Dot> dots_;
};

// ---------------------------------------------------------------------------
// EPM classification

/// A: main circle with a |+> edge and a |-> edge into distinct dots.
/// B: ancilla circle whose |0> edges go to distinct dots.
/// C: ancilla circle with two |0> edges into the same dot.
enum class EpmPattern { A, B, C, NonEPM };

inline const char* to_string(EpmPattern p) {
  switch (p) {
    case EpmPattern::A: return "A";
    case EpmPattern::B: return "B";
    case EpmPattern::C: return "C";
    case EpmPattern::NonEPM: return "non-EPM";
  }
  return "?";
}

inline EpmPattern classify_circle(const SculptingBigraph& g, const std::string& label) {
  CircleKind kind = g.kind_of(label);
  auto edges = g.edges_from(label);
  if (kind == CircleKind::Main) {
    if (edges.size() != 2 || edges[0].dot == edges[1].dot) return EpmPattern::NonEPM;
    auto s0 = g.leg(edges[0]).state.name();
    auto s1 = g.leg(edges[1]).state.name();
    if ((s0 == "+" && s1 == "-") || (s0 == "-" && s1 == "+")) return EpmPattern::A;
    return EpmPattern::NonEPM;
  }
  if (edges.empty()) return EpmPattern::NonEPM;
  std::vector<std::size_t> targets;
  for (auto e : edges) {
    if (g.leg(e).state.name() != "0") return EpmPattern::NonEPM;
    targets.push_back(e.dot);
  }
  std::sort(targets.begin(), targets.end());
  bool repeated = std::adjacent_find(targets.begin(), targets.end()) != targets.end();
  return repeated ? EpmPattern::C : EpmPattern::B;
}

/// True iff every circle is A or B (C as well when `admit_pattern_c`).
inline bool is_epm(const SculptingBigraph& g, bool admit_pattern_c = false) {
  for (const auto& c : g.circles()) {
    auto p = classify_circle(g, c.label);
    if (p == EpmPattern::A || p == EpmPattern::B) continue;
    if (p == EpmPattern::C && admit_pattern_c) continue;
    return false;
  }
  return true;
}

/// Names of circles that break the EPM rule.
inline std::vector<std::string> non_epm_circles(const SculptingBigraph& g) {
  std::vector<std::string> out;
  for (const auto& c : g.circles()) {
    auto p = classify_circle(g, c.label);
    if (p != EpmPattern::A && p != EpmPattern::B) out.push_back(c.label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operators and matchings

struct OperatorTerm {
  std::string mode;
  InternalState state;
  Amplitude coefficient;
};

/// One list per dot: A^(l) = sum_j k_j a_{j,state}.
inline std::vector<std::vector<OperatorTerm>> subtraction_operators(const SculptingBigraph& g) {
  std::vector<std::vector<OperatorTerm>> out;
  for (const auto& d : g.dots()) {
    double s = 0;
    for (const auto& l : d.legs) s += std::norm(l.amplitude);
    if (std::abs(s - 1.0) > kTolerance)
      throw GraphError("dot " + std::to_string(d.id) + " violates normalization");
    std::vector<OperatorTerm> terms;
    for (const auto& l : d.legs) terms.push_back({l.mode, l.state, l.amplitude});
    out.push_back(std::move(terms));
  }
  return out;
}

using Matching = std::vector<EdgeRef>;

/// Every choice of one edge per dot such that no circle is used twice and
/// every circle is used once. Ordered by dot, then by circle label.
inline std::vector<Matching> perfect_matchings(const SculptingBigraph& g) {
  std::vector<Matching> out;
  const auto circles = g.circles();
  if (g.dots().size() != circles.size()) return out;
  for (const auto& d : g.dots())
    if (d.legs.empty()) return out;

  std::vector<std::vector<std::size_t>> order(g.dots().size());
  for (std::size_t d = 0; d < g.dots().size(); ++d) {
    auto& o = order[d];
    for (std::size_t l = 0; l < g.dots()[d].legs.size(); ++l) o.push_back(l);
    std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
      return g.dots()[d].legs[a].mode < g.dots()[d].legs[b].mode;
    });
  }

  std::vector<bool> used(circles.size(), false);
  Matching current;
  auto recurse = [&](auto&& self, std::size_t d) -> void {
    if (d == g.dots().size()) {
      out.push_back(current);
      return;
    }
    for (std::size_t l : order[d]) {
      std::size_t c = g.circle_index(g.dots()[d].legs[l].mode);
      if (used[c]) continue;
      used[c] = true;
      current.push_back({d, l});
      self(self, d + 1);
      current.pop_back();
      used[c] = false;
    }
  };
  recurse(recurse, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Presets

enum class PresetKind { GHZ, W, TYPE5 };

inline SculptingBigraph preset(PresetKind kind, int n = 3) {
  const double r2 = 1.0 / std::numbers::sqrt2;
  auto L = SculptingBigraph::main_label;
  switch (kind) {
    case PresetKind::GHZ: {
      if (n < 2) throw GraphError("GHZ preset requires N >= 2");
      std::vector<Dot> dots;
      for (int j = 1; j <= n; ++j)
        dots.push_back({j, {{L(j), InternalState::plus(), r2},
                            {L(j % n + 1), InternalState::minus(), -r2}}});
      return SculptingBigraph(n, {}, std::move(dots));
    }
    case PresetKind::W: {
      if (n < 2) throw GraphError("W preset requires N >= 2");
      std::vector<Dot> dots;
      for (int j = 1; j <= n; ++j)
        dots.push_back({j, {{L(j), InternalState::plus(), r2}, {"X", InternalState::zero(), r2}}});
      Dot last{n + 1, {}};
      for (int k = 1; k <= n; ++k)
        last.legs.push_back({L(k), InternalState::minus(), 1.0 / std::sqrt(double(n))});
      dots.push_back(std::move(last));
      return SculptingBigraph(n, {"X"}, std::move(dots));
    }
    case PresetKind::TYPE5: {
      if (n != 3) throw GraphError("TYPE5 preset is defined for N = 3 only");
      const double r3 = 1.0 / std::sqrt(3.0);
      auto zero = InternalState::zero();
      auto plus = InternalState::plus();
      auto minus = InternalState::minus();
      std::vector<Dot> dots{
          {1, {{"1", plus, r2}, {"X", zero, r2}}},
          {2, {{"2", plus, r2}, {"Y", zero, r2}}},
          {3, {{"3", plus, r2}, {"Z", zero, r2}}},
          {4, {{"Z", zero, r2}, {"1", minus, -r2}}},
          {5, {{"X", zero, r3}, {"Y", zero, r3}, {"2", minus, -r3}}},
          {6, {{"Y", zero, r3}, {"Z", zero, r3}, {"3", minus, -r3}}},
      };
      return SculptingBigraph(3, {"X", "Y", "Z"}, std::move(dots));
    }
  }
  throw GraphError("unknown preset");
}

// ---------------------------------------------------------------------------
// Undirected view: only the operator side survives.

struct UndirectedEdge {
  std::string circle;
  int dot = 0;
  InternalState state;
  Amplitude amplitude;
};

struct UndirectedBigraph {
  std::vector<std::string> circles;
  std::vector<int> dots;
  std::vector<UndirectedEdge> edges;
};

inline UndirectedBigraph to_undirected(const SculptingBigraph& g) {
  UndirectedBigraph u;
  for (const auto& c : g.circles()) u.circles.push_back(c.label);
  for (const auto& d : g.dots()) {
    u.dots.push_back(d.id);
    for (const auto& l : d.legs) u.edges.push_back({l.mode, d.id, l.state, l.amplitude});
  }
  return u;
}

inline UndirectedBigraph to_undirected(const UndirectedBigraph& u) { return u; }

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline nlohmann::json complex_to_json(Amplitude a) {
  auto clean = [](double x) { return std::abs(x) < kDropout ? 0.0 : x; };
  return nlohmann::json::array({clean(a.real()), clean(a.imag())});
}

inline Amplitude complex_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw GraphError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline nlohmann::json graph_to_json(const SculptingBigraph& g) {
  nlohmann::json j;
  j["n_main"] = g.n_main();
  j["ancillas"] = g.ancillas();
  j["dots"] = nlohmann::json::array();
  for (const auto& d : g.dots()) {
    nlohmann::json jd;
    jd["id"] = d.id;
    jd["legs"] = nlohmann::json::array();
    for (const auto& l : d.legs) {
      nlohmann::json jl;
      jl["mode"] = l.mode;
      jl["state"] = l.state.name();
      if (jl["state"] == "custom") {
        jl["alpha"] = detail::complex_to_json(l.state.alpha);
        jl["beta"] = detail::complex_to_json(l.state.beta);
      }
      jl["amplitude"] = detail::complex_to_json(l.amplitude);
      jd["legs"].push_back(std::move(jl));
    }
    j["dots"].push_back(std::move(jd));
  }
  return j;
}

inline std::string serialize_graph(const SculptingBigraph& g) { return graph_to_json(g).dump(2); }

/// Accepts an optional per-leg "phase" (radians) that multiplies the amplitude.
inline SculptingBigraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw GraphError("graph: expected a JSON object");
  if (!j.contains("n_main") || !j["n_main"].is_number_integer())
    throw GraphError("graph.n_main: missing or not an integer");
  int n_main = j["n_main"].get<int>();
  std::vector<std::string> ancillas;
  if (j.contains("ancillas")) {
    if (!j["ancillas"].is_array()) throw GraphError("graph.ancillas: expected an array");
    for (const auto& a : j["ancillas"]) {
      if (!a.is_string()) throw GraphError("graph.ancillas: labels must be strings");
      ancillas.push_back(a.get<std::string>());
    }
  }
  if (!j.contains("dots") || !j["dots"].is_array())
    throw GraphError("graph.dots: missing or not an array");
  std::vector<Dot> dots;
  for (std::size_t di = 0; di < j["dots"].size(); ++di) {
    const auto& jd = j["dots"][di];
    std::string where = "graph.dots[" + std::to_string(di) + "]";
    if (!jd.is_object() || !jd.contains("id") || !jd["id"].is_number_integer())
      throw GraphError(where + ".id: missing or not an integer");
    if (!jd.contains("legs") || !jd["legs"].is_array())
      throw GraphError(where + ".legs: missing or not an array");
    Dot d{jd["id"].get<int>(), {}};
    for (std::size_t li = 0; li < jd["legs"].size(); ++li) {
      const auto& jl = jd["legs"][li];
      std::string lw = where + ".legs[" + std::to_string(li) + "]";
      if (!jl.is_object() || !jl.contains("mode") || !jl["mode"].is_string())
        throw GraphError(lw + ".mode: missing or not a string");
      if (!jl.contains("state") || !jl["state"].is_string())
        throw GraphError(lw + ".state: missing or not a string");
      Leg leg;
      leg.mode = jl["mode"].get<std::string>();
      auto sname = jl["state"].get<std::string>();
      if (sname == "custom") {
        if (!jl.contains("alpha") || !jl.contains("beta"))
          throw GraphError(lw + ": custom state requires alpha and beta");
        leg.state = {detail::complex_from_json(jl["alpha"], lw + ".alpha"),
                     detail::complex_from_json(jl["beta"], lw + ".beta")};
      } else if (auto s = InternalState::from_name(sname)) {
        leg.state = *s;
      } else {
        throw GraphError(lw + ".state: unknown state '" + sname + "'");
      }
      if (!jl.contains("amplitude")) throw GraphError(lw + ".amplitude: missing");
      leg.amplitude = detail::complex_from_json(jl["amplitude"], lw + ".amplitude");
      if (jl.contains("phase")) {
        if (!jl["phase"].is_number()) throw GraphError(lw + ".phase: not a number");
        leg.amplitude *= std::polar(1.0, jl["phase"].get<double>());
      }
      d.legs.push_back(std::move(leg));
    }
    dots.push_back(std::move(d));
  }
  SculptingBigraph g(n_main, std::move(ancillas), std::move(dots));
  auto diags = g.diagnostics();
  if (!diags.empty()) throw GraphError("graph: " + diags.front());
  return g;
}

inline SculptingBigraph parse_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(std::string("graph: malformed JSON: ") + e.what());
  }
  return graph_from_json(j);
}

// ---------------------------------------------------------------------------
// DOT

inline std::string graph_to_dot(const SculptingBigraph& g) {
  auto color = [](const InternalState& s) {
    auto n = s.name();
    if (n == "0") return "black";
    if (n == "1") return "black\", style=\"dotted";
    if (n == "+") return "red";
    if (n == "-") return "blue";
    return "gray";
  };
  std::ostringstream os;
  os << "digraph sculpting {\n  rankdir=LR;\n";
  for (const auto& c : g.circles())
    os << "  \"c_" << c.label << "\" [shape=ellipse, label=\"" << c.label << "\""
       << (c.kind == CircleKind::Ancilla ? ", style=dashed" : "") << "];\n";
  for (const auto& d : g.dots())
    os << "  \"d_" << d.id << "\" [shape=point, width=0.15];\n";
  for (const auto& d : g.dots())
    for (const auto& l : d.legs) {
      os << "  \"c_" << l.mode << "\" -> \"d_" << d.id << "\" [color=\"" << color(l.state) << "\"";
      double ph = std::arg(l.amplitude);
      if (std::abs(ph) > 1e-9) os << ", label=\"" << ph << "\"";
      os << "];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace sculpt
