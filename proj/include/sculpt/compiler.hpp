// Lowering of an EPM sculpting bigraph to a polarization-encoded circuit.
//
// Stages, in emission order:
//   prepare          sources (H,V per main mode, H per ancilla) and one HWP each
//   divide           split PBS per main mode; Fourier port per ancilla of out-degree > 1
//   route            one Swap carrying every edge's wires into its dot's port locations
//   subtract.split   per-dot HWP/PBS stages separating the returned photon from the tap
//   subtract.detect  tap mixing and one DetectorGroup (count 1) per dot
//   merge            returned photons moved onto a fresh output location per main mode
//
// Locations own an H and a V wire with ids 2*loc and 2*loc+1. Main modes come first,
// then ancillas, then fresh locations in the order they are created.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/bigraph.hpp"
#include "sculpt/circuit.hpp"

namespace sculpt {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Location {
  WireId h, v;
};

class CircuitBuilder {
 public:
  Location location(const std::string& name) {
    Location loc{WireId{std::uint32_t(c_.wires.size())}, WireId{std::uint32_t(c_.wires.size() + 1)}};
    c_.wires.push_back({loc.h, name, Channel::H});
    c_.wires.push_back({loc.v, name, Channel::V});
    return loc;
  }

  void emit(const std::string& stage, ElementOp op) { c_.elements.push_back({stage, std::move(op)}); }
  void hwp(const std::string& stage, Location l, bool underline = false) { emit(stage, Hwp{l.h, l.v, underline}); }
  void pbs(const std::string& stage, Location top, Location bottom) {
    emit(stage, Pbs{top.h, top.v, bottom.h, bottom.v});
  }
  void multiport(const std::string& stage, const std::vector<Location>& locs, MultiportRole role) {
    Multiport m;
    m.role = role;
    for (auto l : locs) m.ports.push_back({l.h, l.v});
    emit(stage, std::move(m));
  }

  Circuit& circuit() { return c_; }

 private:
  Circuit c_;
};

/// Where a main mode's returned photons end up before the merge.
struct Returns {
  std::optional<WireId> plus, minus;
};

inline bool is_plus(const InternalState& s) { return s.approx(InternalState::plus()); }
inline bool is_minus(const InternalState& s) { return s.approx(InternalState::minus()); }

}  // namespace detail

/// Two main legs with orthogonal internal states (one +, one -) and equal weight.
inline bool uses_optimized_subtractor(const SculptingBigraph& g, const Dot& d) {
  if (d.legs.size() != 2) return false;
  const auto &a = d.legs[0], &b = d.legs[1];
  if (g.kind_of(a.mode) != CircleKind::Main || g.kind_of(b.mode) != CircleKind::Main) return false;
  if (a.mode == b.mode) return false;
  bool pm = (detail::is_plus(a.state) && detail::is_minus(b.state)) ||
            (detail::is_minus(a.state) && detail::is_plus(b.state));
  return pm && std::abs(std::abs(a.amplitude) - std::abs(b.amplitude)) < kTolerance;
}

inline Circuit compile(const SculptingBigraph& g) {
  using namespace detail;
  if (!is_epm(g)) {
    std::string names;
    for (const auto& c : non_epm_circles(g)) names += (names.empty() ? "" : ", ") + c;
    throw CompileError("compile: graph is not EPM (offending circle: " + names + ")");
  }
  for (const auto& d : g.dots()) {
    for (const auto& l : d.legs) {
      bool main = g.kind_of(l.mode) == CircleKind::Main;
      if (main && !is_plus(l.state) && !is_minus(l.state))
        throw CompileError("compile: dot " + std::to_string(d.id) + ": main leg from '" + l.mode +
                           "' is neither |+> nor |->");
      if (!main && !l.state.approx(InternalState::zero()))
        throw CompileError("compile: dot " + std::to_string(d.id) + ": ancilla leg from '" + l.mode +
                           "' is not |0>");
      if (std::abs(std::abs(l.amplitude) - std::abs(d.legs.front().amplitude)) > kTolerance)
        throw CompileError("compile: dot " + std::to_string(d.id) +
                           " has unequal leg weights; no Fourier subtractor realizes it");
      // the element set has no phase shifter: only relative signs survive
      if (std::abs(std::imag(l.amplitude / d.legs.front().amplitude)) > kTolerance)
        throw CompileError("compile: dot " + std::to_string(d.id) + ": leg from '" + l.mode +
                           "' has a relative phase other than 0 or pi");
    }
  }

  CircuitBuilder b;
  const int n = g.n_main();

  std::map<std::string, Location> home;
  for (const auto& c : g.circles()) home[c.label] = b.location(c.label);

  // prepare
  for (const auto& c : g.circles()) {
    Location l = home[c.label];
    b.emit("prepare", Source{l.h, 1});
    if (c.kind == CircleKind::Main) b.emit("prepare", Source{l.v, 1});
  }
  for (const auto& c : g.circles()) b.hwp("prepare", home[c.label]);

  // divide: where each edge's photons sit afterwards
  std::map<EdgeRef, Location> edge_loc;
  for (int j = 1; j <= n; ++j) {
    auto label = SculptingBigraph::main_label(j);
    Location lower = b.location(label + ".2");
    b.pbs("divide", home[label], lower);
    for (EdgeRef e : g.edges_from(label)) edge_loc[e] = is_plus(g.leg(e).state) ? home[label] : lower;
  }
  for (const auto& a : g.ancillas()) {
    auto edges = g.edges_from(a);
    std::vector<Location> outs{home[a]};
    for (std::size_t k = 1; k < edges.size(); ++k) outs.push_back(b.location(a + "." + std::to_string(k + 1)));
    if (outs.size() > 1) b.multiport("divide", outs, MultiportRole::AncillaSplit);
    for (std::size_t k = 0; k < edges.size(); ++k) edge_loc[edges[k]] = outs[k];
  }

  // route
  std::map<EdgeRef, Location> port;
  Swap route;
  for (std::size_t di = 0; di < g.dots().size(); ++di) {
    const auto& d = g.dots()[di];
    for (std::size_t k = 0; k < d.legs.size(); ++k) {
      EdgeRef e{di, k};
      Location p = b.location("d" + std::to_string(d.id) + ".p" + std::to_string(k + 1));
      Location from = edge_loc.at(e);
      for (auto [x, y] : {std::pair{from.h, p.h}, std::pair{from.v, p.v}}) {
        route.moves.push_back({x, y});
        route.moves.push_back({y, x});
      }
      port[e] = p;
    }
  }
  b.emit("route", std::move(route));

  // subtract
  std::map<std::string, Returns> returns;
  struct Pending {
    int id;
    std::vector<Location> taps;
    bool optimized;
    Location det;
  };
  std::vector<Pending> pending;
  for (std::size_t di = 0; di < g.dots().size(); ++di) {
    const auto& d = g.dots()[di];
    const std::string tag = "d" + std::to_string(d.id);
    if (uses_optimized_subtractor(g, d)) {
      std::size_t ip = is_plus(d.legs[0].state) ? 0 : 1;
      Location top = port[{di, ip}], bottom = port[{di, 1 - ip}];
      b.hwp("subtract.split", top);
      b.hwp("subtract.split", bottom);
      b.pbs("subtract.split", top, bottom);
      returns[d.legs[ip].mode].plus = top.h;
      returns[d.legs[1 - ip].mode].minus = top.v;
      pending.push_back({d.id, {bottom}, true, b.location(tag + ".det")});
      continue;
    }
    std::vector<Location> taps;
    for (std::size_t k = 0; k < d.legs.size(); ++k) {
      const Leg& leg = d.legs[k];
      Location p = port[{di, k}];
      if (g.kind_of(leg.mode) == CircleKind::Ancilla) {
        taps.push_back(p);
        continue;
      }
      Location t = b.location(tag + ".t" + std::to_string(k + 1));
      b.hwp("subtract.split", p);
      b.pbs("subtract.split", p, t);
      if (is_plus(leg.state)) {
        returns[leg.mode].plus = p.h;
        b.hwp("subtract.split", t, true);
        taps.push_back(t);
      } else {
        returns[leg.mode].minus = t.v;
        b.hwp("subtract.split", p);
        taps.push_back(p);
      }
    }
    pending.push_back({d.id, taps, false, {}});
  }
  for (const auto& p : pending) {
    if (p.optimized) {
      Location tap = p.taps.front();
      b.hwp("subtract.detect", tap);
      b.pbs("subtract.detect", tap, p.det);
      b.emit("subtract.detect", DetectorGroup{p.id, {tap.h, p.det.v}, 1});
      continue;
    }
    if (p.taps.size() > 1) b.multiport("subtract.detect", p.taps, MultiportRole::Subtractor);
    DetectorGroup group{p.id, {}, 1};
    for (auto t : p.taps) {
      b.hwp("subtract.detect", t);
      group.wires.push_back(t.h);
    }
    b.emit("subtract.detect", std::move(group));
  }

  // merge
  std::vector<OutputQubit> outputs;
  for (int j = 1; j <= n; ++j) {
    auto label = SculptingBigraph::main_label(j);
    const Returns& r = returns[label];
    if (!r.plus || !r.minus) throw CompileError("compile: mode '" + label + "' lacks a returned photon");
    Location out = b.location(label + ".out");
    b.emit("merge", ReturnMerge{label, {{*r.plus, out.h}, {*r.minus, out.v}}});
    outputs.push_back({label, out.h, out.v});
  }
  b.circuit().outputs = std::move(outputs);
  return std::move(b.circuit());
}

}  // namespace sculpt
