// Linear-optical circuit IR: wires, elements, validation, dual-rail
// conversion, JSON and DOT interchange.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sculpt/fock.hpp"

namespace sculpt {

enum class Channel { H, V, Rail0, Rail1 };
enum class Encoding { Polarization, DualRail };

inline const char* to_string(Channel c) {
  switch (c) {
    case Channel::H: return "H";
    case Channel::V: return "V";
    case Channel::Rail0: return "0";
    case Channel::Rail1: return "1";
  }
  return "?";
}

struct WireInfo {
  WireId id;
  std::string location;
  Channel channel = Channel::H;
};

// Elements. All act in place on the wires they name.

struct Source {
  WireId wire;
  unsigned photons = 1;
};

/// a†_H -> (a†_H + a†_V)/√2, a†_V -> (a†_H - a†_V)/√2; underlined: images swapped.
struct Hwp {
  WireId h, v;
  bool underline = false;
};

/// H transmitted, V reflected, no phase.
struct Pbs {
  WireId top_h, top_v, bottom_h, bottom_v;
};

/// Balanced two-wire splitter: a† -> (a† + b†)/√2, b† -> (a† - b†)/√2.
struct Bs {
  WireId a, b;
};

enum class MultiportRole { AncillaSplit, Subtractor };

/// n-location Fourier interferometer U_jk = exp(2πi jk/n)/√n, applied per channel.
/// ports[k] lists the wires of location k in channel order.
struct Multiport {
  std::vector<std::vector<WireId>> ports;
  MultiportRole role = MultiportRole::Subtractor;
  std::size_t n() const { return ports.size(); }
};

/// Wire permutation: each (from, to) moves the content of `from` onto `to`.
struct Swap {
  std::vector<std::pair<WireId, WireId>> moves;
};

/// Exchanges each return wire with the given output wire of `mode`.
struct ReturnMerge {
  std::string mode;
  std::vector<std::pair<WireId, WireId>> moves;
};

/// Photon-number-resolving detectors post-selected on `count` photons in total.
struct DetectorGroup {
  int id = 0;
  std::vector<WireId> wires;
  unsigned count = 1;
};

using ElementOp = std::variant<Source, Hwp, Pbs, Bs, Multiport, Swap, ReturnMerge, DetectorGroup>;

struct Element {
  std::string stage;
  ElementOp op;
};

inline std::string kind_name(const ElementOp& op) {
  struct V {
    std::string operator()(const Source&) const { return "source"; }
    std::string operator()(const Hwp& h) const { return h.underline ? "hwp_underline" : "hwp"; }
    std::string operator()(const Pbs&) const { return "pbs"; }
    std::string operator()(const Bs&) const { return "bs"; }
    std::string operator()(const Multiport&) const { return "multiport"; }
    std::string operator()(const Swap&) const { return "swap"; }
    std::string operator()(const ReturnMerge&) const { return "return_merge"; }
    std::string operator()(const DetectorGroup&) const { return "detector_group"; }
  };
  return std::visit(V{}, op);
}

/// Every wire an element touches.
inline std::vector<WireId> element_wires(const ElementOp& op) {
  struct V {
    std::vector<WireId> operator()(const Source& s) const { return {s.wire}; }
    std::vector<WireId> operator()(const Hwp& h) const { return {h.h, h.v}; }
    std::vector<WireId> operator()(const Pbs& p) const { return {p.top_h, p.top_v, p.bottom_h, p.bottom_v}; }
    std::vector<WireId> operator()(const Bs& b) const { return {b.a, b.b}; }
    std::vector<WireId> operator()(const Multiport& m) const {
      std::vector<WireId> out;
      for (const auto& p : m.ports) out.insert(out.end(), p.begin(), p.end());
      return out;
    }
    std::vector<WireId> operator()(const Swap& s) const {
      std::vector<WireId> out;
      for (auto [a, b] : s.moves) out.push_back(a);
      return out;
    }
    std::vector<WireId> operator()(const ReturnMerge& r) const {
      std::vector<WireId> out;
      for (auto [a, b] : r.moves) {
        out.push_back(a);
        out.push_back(b);
      }
      return out;
    }
    std::vector<WireId> operator()(const DetectorGroup& d) const { return d.wires; }
  };
  return std::visit(V{}, op);
}

/// One output qubit: the |0>-like (H / rail 0) and |1>-like (V / rail 1) wires.
struct OutputQubit {
  std::string mode;
  WireId zero;
  WireId one;
};

struct Circuit {
  Encoding encoding = Encoding::Polarization;
  std::vector<WireInfo> wires;
  std::vector<Element> elements;
  std::vector<OutputQubit> outputs;
  /// pattern key -> per-output correction label
  std::map<std::string, std::vector<std::string>> feedforward_table;

  const WireInfo& wire(WireId id) const {
    if (id.value >= wires.size()) throw std::out_of_range("unknown wire " + std::to_string(id.value));
    return wires[id.value];
  }

  std::vector<DetectorGroup> detector_groups() const {
    std::vector<DetectorGroup> out;
    for (const auto& e : elements)
      if (auto d = std::get_if<DetectorGroup>(&e.op)) out.push_back(*d);
    return out;
  }

  template <class T>
  std::size_t count() const {
    return std::count_if(elements.begin(), elements.end(),
                         [](const Element& e) { return std::holds_alternative<T>(e.op); });
  }

  std::set<WireId> output_wires() const {
    std::set<WireId> out;
    for (const auto& o : outputs) {
      out.insert(o.zero);
      out.insert(o.one);
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const Circuit& c) {
  std::vector<std::string> diags;
  for (std::size_t i = 0; i < c.wires.size(); ++i)
    if (c.wires[i].id.value != i) diags.push_back("wire table is not indexed by id at " + std::to_string(i));

  auto declared = [&](WireId w) { return w.value < c.wires.size(); };
  std::set<WireId> detected;
  std::set<WireId> seen_in_groups;
  std::set<int> group_ids;

  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    const auto& e = c.elements[i];
    std::string where = "element " + std::to_string(i) + " (" + kind_name(e.op) + ")";
    auto ws = element_wires(e.op);
    for (auto w : ws) {
      if (!declared(w)) diags.push_back(where + " uses undeclared wire " + std::to_string(w.value));
      if (detected.contains(w) && !std::holds_alternative<DetectorGroup>(e.op))
        diags.push_back(where + " acts on wire " + std::to_string(w.value) + " after it was detected");
    }
    std::set<WireId> uniq(ws.begin(), ws.end());
    if (uniq.size() != ws.size() && !std::holds_alternative<Swap>(e.op))
      diags.push_back(where + " names a wire twice");

    if (auto m = std::get_if<Multiport>(&e.op)) {
      if (m->n() < 2) diags.push_back(where + " has fewer than 2 ports");
      for (const auto& p : m->ports)
        if (p.size() != m->ports.front().size()) diags.push_back(where + " has ragged ports");
    }
    if (auto s = std::get_if<Swap>(&e.op)) {
      std::set<WireId> from, to;
      for (auto [a, b] : s->moves) {
        from.insert(a);
        to.insert(b);
      }
      if (from != to || from.size() != s->moves.size()) diags.push_back(where + " is not a permutation");
    }
    if (auto d = std::get_if<DetectorGroup>(&e.op)) {
      if (!group_ids.insert(d->id).second) diags.push_back(where + " reuses group id " + std::to_string(d->id));
      for (auto w : d->wires) {
        if (!seen_in_groups.insert(w).second)
          diags.push_back("detector groups overlap on wire " + std::to_string(w.value));
        detected.insert(w);
      }
    }
  }
  for (const auto& o : c.outputs) {
    if (!declared(o.zero) || !declared(o.one)) diags.push_back("output '" + o.mode + "' uses undeclared wire");
    if (detected.contains(o.zero) || detected.contains(o.one))
      diags.push_back("output '" + o.mode + "' overlaps a detector");
  }
  return diags;
}

// ---------------------------------------------------------------------------
// Dual rail

/// PBS -> V-wire exchange, HWP -> BS on the location's two rails.
inline Circuit to_dual_rail(const Circuit& c) {
  if (c.encoding == Encoding::DualRail) throw std::invalid_argument("to_dual_rail: circuit is already dual-rail");
  Circuit out = c;
  out.encoding = Encoding::DualRail;
  for (auto& w : out.wires) w.channel = w.channel == Channel::H ? Channel::Rail0 : Channel::Rail1;
  out.elements.clear();
  for (const auto& e : c.elements) {
    if (auto h = std::get_if<Hwp>(&e.op)) {
      if (h->underline) out.elements.push_back({e.stage, Swap{{{h->h, h->v}, {h->v, h->h}}}});
      out.elements.push_back({e.stage, Bs{h->h, h->v}});
    } else if (auto p = std::get_if<Pbs>(&e.op)) {
      out.elements.push_back({e.stage, Swap{{{p->top_v, p->bottom_v}, {p->bottom_v, p->top_v}}}});
    } else {
      out.elements.push_back(e);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::json ids(const std::vector<WireId>& ws) {
  auto j = nlohmann::json::array();
  for (auto w : ws) j.push_back(w.value);
  return j;
}

inline nlohmann::json moves_json(const std::vector<std::pair<WireId, WireId>>& ms) {
  auto j = nlohmann::json::array();
  for (auto [a, b] : ms) j.push_back({a.value, b.value});
  return j;
}

inline WireId wire_from(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw CircuitError(where + ": expected a wire id");
  return WireId{j.get<std::uint32_t>()};
}

inline std::vector<WireId> wires_from(const nlohmann::json& j, const std::string& where, std::size_t n = 0) {
  if (!j.is_array()) throw CircuitError(where + ": expected an array of wire ids");
  if (n && j.size() != n) throw CircuitError(where + ": expected " + std::to_string(n) + " wires");
  std::vector<WireId> out;
  for (const auto& x : j) out.push_back(wire_from(x, where));
  return out;
}

inline std::vector<std::pair<WireId, WireId>> moves_from(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw CircuitError(where + ": expected an array of moves");
  std::vector<std::pair<WireId, WireId>> out;
  for (const auto& m : j) {
    auto p = wires_from(m, where, 2);
    out.push_back({p[0], p[1]});
  }
  return out;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw CircuitError(where + "." + key + ": missing");
  return j.at(key);
}

}  // namespace detail

inline nlohmann::json element_to_json(const Element& e) {
  nlohmann::json j;
  j["kind"] = kind_name(e.op);
  j["stage"] = e.stage;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Source>) {
          j["wire"] = op.wire.value;
          j["photons"] = op.photons;
        } else if constexpr (std::is_same_v<T, Hwp>) {
          j["wires"] = detail::ids({op.h, op.v});
        } else if constexpr (std::is_same_v<T, Pbs>) {
          j["wires"] = detail::ids({op.top_h, op.top_v, op.bottom_h, op.bottom_v});
        } else if constexpr (std::is_same_v<T, Bs>) {
          j["wires"] = detail::ids({op.a, op.b});
        } else if constexpr (std::is_same_v<T, Multiport>) {
          j["n"] = op.n();
          j["role"] = op.role == MultiportRole::AncillaSplit ? "ancilla_split" : "subtractor";
          j["ports"] = nlohmann::json::array();
          for (const auto& p : op.ports) j["ports"].push_back(detail::ids(p));
        } else if constexpr (std::is_same_v<T, Swap>) {
          j["moves"] = detail::moves_json(op.moves);
        } else if constexpr (std::is_same_v<T, ReturnMerge>) {
          j["mode"] = op.mode;
          j["moves"] = detail::moves_json(op.moves);
        } else if constexpr (std::is_same_v<T, DetectorGroup>) {
          j["id"] = op.id;
          j["wires"] = detail::ids(op.wires);
          j["count"] = op.count;
        }
      },
      e.op);
  return j;
}

inline Element element_from_json(const nlohmann::json& j, const std::string& where) {
  using detail::field;
  if (!j.is_object()) throw CircuitError(where + ": expected an object");
  auto kind = field(j, "kind", where).get<std::string>();
  Element e;
  e.stage = j.value("stage", "");
  if (kind == "source") {
    e.op = Source{detail::wire_from(field(j, "wire", where), where + ".wire"),
                  field(j, "photons", where).get<unsigned>()};
  } else if (kind == "hwp" || kind == "hwp_underline") {
    auto w = detail::wires_from(field(j, "wires", where), where + ".wires", 2);
    e.op = Hwp{w[0], w[1], kind == "hwp_underline"};
  } else if (kind == "pbs") {
    auto w = detail::wires_from(field(j, "wires", where), where + ".wires", 4);
    e.op = Pbs{w[0], w[1], w[2], w[3]};
  } else if (kind == "bs") {
    auto w = detail::wires_from(field(j, "wires", where), where + ".wires", 2);
    e.op = Bs{w[0], w[1]};
  } else if (kind == "multiport") {
    Multiport m;
    auto role = field(j, "role", where).get<std::string>();
    if (role == "ancilla_split") m.role = MultiportRole::AncillaSplit;
    else if (role == "subtractor") m.role = MultiportRole::Subtractor;
    else throw CircuitError(where + ".role: unknown role '" + role + "'");
    for (const auto& p : field(j, "ports", where)) m.ports.push_back(detail::wires_from(p, where + ".ports"));
    if (j.contains("n") && j["n"].get<std::size_t>() != m.n()) throw CircuitError(where + ".n: disagrees with ports");
    e.op = std::move(m);
  } else if (kind == "swap") {
    e.op = Swap{detail::moves_from(field(j, "moves", where), where + ".moves")};
  } else if (kind == "return_merge") {
    e.op = ReturnMerge{field(j, "mode", where).get<std::string>(),
                       detail::moves_from(field(j, "moves", where), where + ".moves")};
  } else if (kind == "detector_group") {
    e.op = DetectorGroup{field(j, "id", where).get<int>(),
                         detail::wires_from(field(j, "wires", where), where + ".wires"),
                         field(j, "count", where).get<unsigned>()};
  } else {
    throw CircuitError(where + ".kind: unknown element kind '" + kind + "'");
  }
  return e;
}

inline nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json j;
  j["encoding"] = c.encoding == Encoding::Polarization ? "polarization" : "dual_rail";
  j["wires"] = nlohmann::json::array();
  for (const auto& w : c.wires)
    j["wires"].push_back({{"id", w.id.value}, {"mode", w.location}, {"channel", to_string(w.channel)}});
  j["elements"] = nlohmann::json::array();
  for (const auto& e : c.elements) j["elements"].push_back(element_to_json(e));
  j["detector_groups"] = nlohmann::json::array();
  for (const auto& d : c.detector_groups())
    j["detector_groups"].push_back({{"id", d.id}, {"wires", detail::ids(d.wires)}, {"count", d.count}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : c.outputs)
    j["outputs"].push_back({{"mode", o.mode}, {"wires", detail::ids({o.zero, o.one})}});
  if (!c.feedforward_table.empty()) j["feedforward"] = c.feedforward_table;
  return j;
}

inline std::string serialize_circuit(const Circuit& c) { return circuit_to_json(c).dump(2); }

inline Circuit circuit_from_json(const nlohmann::json& j) {
  using detail::field;
  try {
    if (!j.is_object()) throw CircuitError("circuit: expected an object");
    Circuit c;
    auto enc = j.value("encoding", "polarization");
    if (enc == "polarization") c.encoding = Encoding::Polarization;
    else if (enc == "dual_rail") c.encoding = Encoding::DualRail;
    else throw CircuitError("circuit.encoding: unknown encoding '" + enc + "'");

    const auto& jw = field(j, "wires", "circuit");
    for (std::size_t i = 0; i < jw.size(); ++i) {
      std::string where = "circuit.wires[" + std::to_string(i) + "]";
      WireInfo w;
      w.id = detail::wire_from(field(jw[i], "id", where), where + ".id");
      w.location = field(jw[i], "mode", where).get<std::string>();
      auto ch = field(jw[i], "channel", where).get<std::string>();
      if (ch == "H") w.channel = Channel::H;
      else if (ch == "V") w.channel = Channel::V;
      else if (ch == "0") w.channel = Channel::Rail0;
      else if (ch == "1") w.channel = Channel::Rail1;
      else throw CircuitError(where + ".channel: unknown channel '" + ch + "'");
      c.wires.push_back(std::move(w));
    }
    const auto& je = field(j, "elements", "circuit");
    for (std::size_t i = 0; i < je.size(); ++i)
      c.elements.push_back(element_from_json(je[i], "circuit.elements[" + std::to_string(i) + "]"));
    for (const auto& jo : field(j, "outputs", "circuit")) {
      auto w = detail::wires_from(field(jo, "wires", "circuit.outputs"), "circuit.outputs.wires", 2);
      c.outputs.push_back({field(jo, "mode", "circuit.outputs").get<std::string>(), w[0], w[1]});
    }
    if (j.contains("detector_groups")) {
      auto groups = c.detector_groups();
      const auto& jd = j["detector_groups"];
      if (jd.size() != groups.size()) throw CircuitError("circuit.detector_groups: disagrees with elements");
      for (std::size_t i = 0; i < groups.size(); ++i)
        if (jd[i].value("id", -1) != groups[i].id || detail::wires_from(jd[i]["wires"], "circuit.detector_groups") != groups[i].wires)
          throw CircuitError("circuit.detector_groups[" + std::to_string(i) + "]: disagrees with elements");
    }
    if (j.contains("feedforward"))
      c.feedforward_table = j["feedforward"].get<std::map<std::string, std::vector<std::string>>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError(std::string("circuit: ") + e.what());
  }
}

inline Circuit parse_circuit(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CircuitError(std::string("circuit: malformed JSON: ") + e.what());
  }
  return circuit_from_json(j);
}

// ---------------------------------------------------------------------------
// DOT: one node per element, one edge per wire hop between consecutive elements.

inline std::string circuit_to_dot(const Circuit& c) {
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n";
  std::map<WireId, std::string> last;
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    const auto& e = c.elements[i];
    std::string node = "e" + std::to_string(i);
    std::string label = kind_name(e.op);
    if (auto m = std::get_if<Multiport>(&e.op)) label += " " + std::to_string(m->n());
    if (auto d = std::get_if<DetectorGroup>(&e.op)) label += " #" + std::to_string(d->id);
    os << "  " << node << " [label=\"" << label << "\"";
    if (std::holds_alternative<DetectorGroup>(e.op)) os << ", shape=doublecircle";
    if (std::holds_alternative<Source>(e.op)) os << ", shape=circle";
    os << "];\n";
    for (auto w : element_wires(e.op)) {
      auto it = last.find(w);
      if (it != last.end() && it->second != node)
        os << "  " << it->second << " -> " << node << " [label=\"" << c.wire(w).location << "/"
           << to_string(c.wire(w).channel) << "\"];\n";
      last[w] = node;
    }
    if (auto s = std::get_if<Swap>(&e.op))
      for (auto [a, b] : s->moves) last[b] = node;
  }
  for (const auto& o : c.outputs) {
    os << "  \"out_" << o.mode << "\" [shape=plaintext, label=\"qubit " << o.mode << "\"];\n";
    for (auto w : {o.zero, o.one})
      if (last.contains(w)) os << "  " << last[w] << " -> \"out_" << o.mode << "\";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace sculpt
