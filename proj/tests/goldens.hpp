#pragma once

// Stage-by-stage states of the three worked examples, written out by hand as
// creation polynomials on the compiled circuit's wires. Each check returns the
// names of the steps that disagree.

#include "sculpt/sculpt.hpp"
#include "support.hpp"

namespace oracle {

using namespace sculpt;

inline std::uint32_t wire(const Circuit& c, const std::string& loc, Channel ch) {
  for (const auto& w : c.wires)
    if (w.location == loc && w.channel == ch) return w.id.value;
  throw std::runtime_error("no wire " + loc);
}

struct Names {
  const Circuit& c;
  static constexpr double h = 0.70710678118654752440;
  Poly H(const std::string& l) const { return Poly::linear({{wire(c, l, Channel::H), 1.0}}); }
  Poly V(const std::string& l) const { return Poly::linear({{wire(c, l, Channel::V), 1.0}}); }
  Poly D(const std::string& l) const { return Poly::linear({{wire(c, l, Channel::H), h}, {wire(c, l, Channel::V), h}}); }
  Poly A(const std::string& l) const { return Poly::linear({{wire(c, l, Channel::H), h}, {wire(c, l, Channel::V), -h}}); }
};

inline std::map<std::string, FockState> snapshots(const Circuit& c) {
  std::map<std::string, FockState> out;
  PropagateOptions opt;
  opt.observer = [&](const std::string& stage, const FockState& s) { out[stage] = s; };
  propagate(c, opt);
  return out;
}

// residual for the pattern where every subtractor fires its first detector
inline FockState first_detector_residual(const Circuit& c) {
  auto groups = c.detector_groups();
  for (const auto& o : run_heralded(c)) {
    std::map<WireId, unsigned> m(o.pattern.begin(), o.pattern.end());
    bool all = true;
    for (const auto& g : groups) all = all && m[g.wires.front()] == 1;
    if (all) return o.residual;
  }
  return {};
}

struct StepCheck {
  std::vector<std::string> failed;
  void operator()(const std::string& step, const FockState& got, const FockState& want) {
    if (!approx_equal(got, want)) failed.push_back(step);
  }
};

inline std::string num(int j) { return std::to_string(j); }

inline std::vector<std::string> ghz_golden_failures(int n) {
  auto c = compile(preset(PresetKind::GHZ, n));
  auto st = snapshots(c);
  Names w{c};
  auto dot = [](int j) { return "d" + std::to_string(j); };
  auto prev = [n](int j) { return j == 1 ? n : j - 1; };  // dot holding mode j's |-> leg

  Poly s1 = Poly::one(), s2 = Poly::one(), s3 = Poly::one(), s4 = Poly::one();
  for (int j = 1; j <= n; ++j) {
    s1 = s1 * w.D(num(j)) * w.A(num(j));
    s2 = s2 * (w.H(num(j)).pow(2) - w.V(num(j) + ".2").pow(2));
    s3 = s3 * (w.H(dot(j) + ".p1").pow(2) - w.V(dot(prev(j)) + ".p2").pow(2));
    std::string top = dot(j) + ".p1", bot = dot(j) + ".p2";
    std::string ptop = dot(prev(j)) + ".p1", pbot = dot(prev(j)) + ".p2";
    s4 = s4 * ((w.H(top) + w.V(bot)).pow(2) - (w.H(pbot) - w.V(ptop)).pow(2));
  }
  StepCheck check;
  check("prepare", st["prepare"], s1.on_vacuum());
  check("divide", st["divide"], s2.scaled(std::pow(2.0, -n)).on_vacuum());
  check("route", st["route"], s3.scaled(std::pow(2.0, -n)).on_vacuum());
  check("subtract.split", st["subtract.split"], s4.scaled(std::pow(2.0, -2 * n)).on_vacuum());

  // one photon on each subtractor's lower port
  FockState kept = st["subtract.split"];
  for (int j = 1; j <= n; ++j) {
    std::string bot = dot(j) + ".p2";
    kept = project_count(kept, {WireId{wire(c, bot, Channel::H)}, WireId{wire(c, bot, Channel::V)}}, 1).state;
  }
  Poly a = Poly::one(), b = Poly::one();
  for (int j = 1; j <= n; ++j) {
    a = a * w.H(dot(j) + ".p1") * w.V(dot(j) + ".p2");
    b = b * w.H(dot(j) + ".p2") * w.V(dot(j) + ".p1");
  }
  check("postselected", kept, (a + b).scaled(std::pow(2.0, -n)).on_vacuum());

  Poly hh = Poly::one(), vv = Poly::one();
  for (int j = 1; j <= n; ++j) {
    hh = hh * w.H(num(j) + ".out");
    vv = vv * w.V(num(j) + ".out");
  }
  check("final", first_detector_residual(c), (hh + vv).scaled(Names::h).on_vacuum());
  return check.failed;
}

inline std::vector<std::string> w_golden_failures(int n) {
  auto c = compile(preset(PresetKind::W, n));
  auto st = snapshots(c);
  Names w{c};
  auto d = [](int j) { return "d" + std::to_string(j); };
  auto xout = [](int k) { return k == 1 ? std::string("X") : "X." + std::to_string(k); };
  const std::string last = d(n + 1);

  Poly s1 = w.D("X"), s2 = Poly::one(), s3 = Poly::one(), s4 = Poly::one(), anc2, anc3;
  for (int j = 1; j <= n; ++j) {
    s1 = s1 * w.D(num(j)) * w.A(num(j));
    s2 = s2 * (w.H(num(j)).pow(2) - w.V(num(j) + ".2").pow(2));
    s3 = s3 * (w.H(d(j) + ".p1").pow(2) - w.V(last + ".p" + num(j)).pow(2));
    s4 = s4 * ((w.H(d(j) + ".p1") + w.D(d(j) + ".t1")).pow(2) - (w.D(last + ".p" + num(j)) - w.V(last + ".t" + num(j))).pow(2));
    anc2 = anc2 + w.D(xout(j));
    anc3 = anc3 + w.D(d(j) + ".p2");
  }
  const double pre = 1 / (std::pow(2.0, n) * std::sqrt(double(n)));
  StepCheck check;
  check("prepare", st["prepare"], s1.on_vacuum());
  check("divide", st["divide"], (s2 * anc2).scaled(pre).on_vacuum());
  check("route", st["route"], (s3 * anc3).scaled(pre).on_vacuum());
  check("subtract.split", st["subtract.split"], (s4 * anc3).scaled(pre / std::pow(2.0, n)).on_vacuum());

  Poly wst;
  for (int k = 1; k <= n; ++k) {
    Poly t = Poly::one();
    for (int j = 1; j <= n; ++j) t = t * (j == k ? w.V(num(j) + ".out") : w.H(num(j) + ".out"));
    wst = wst + t;
  }
  check("final", first_detector_residual(c), wst.scaled(1 / std::sqrt(double(n))).on_vacuum());
  return check.failed;
}

inline std::vector<std::string> type5_golden_failures() {
  auto c = compile(preset(PresetKind::TYPE5, 3));
  auto st = snapshots(c);
  Names w{c};
  Poly mains1 = Poly::one(), mains2 = Poly::one();
  for (int j = 1; j <= 3; ++j) {
    mains1 = mains1 * w.D(num(j)) * w.A(num(j));
    mains2 = mains2 * (w.H(num(j)).pow(2) - w.V(num(j) + ".2").pow(2));
  }
  StepCheck check;
  check("prepare", st["prepare"], (mains1 * w.D("X") * w.D("Y") * w.D("Z")).on_vacuum());

  Poly anc2 = (w.D("X") + w.D("X.2")) * (w.D("Y") + w.D("Y.2") + w.D("Y.3")) * (w.D("Z") + w.D("Z.2") + w.D("Z.3"));
  const double pre = 1 / (24 * std::sqrt(2.0));
  check("divide", st["divide"], (mains2 * anc2).scaled(pre).on_vacuum());

  // dots: 1:[1+,X] 2:[2+,Y] 3:[3+,Z] 4:[Z,1-] 5:[X,Y,2-] 6:[Y,Z,3-]
  Poly anc3 = (w.D("d1.p2") + w.D("d5.p1")) * (w.D("d2.p2") + w.D("d5.p2") + w.D("d6.p1")) *
              (w.D("d3.p2") + w.D("d4.p1") + w.D("d6.p2"));
  Poly s3 = (w.H("d1.p1").pow(2) - w.V("d4.p2").pow(2)) * (w.H("d2.p1").pow(2) - w.V("d5.p3").pow(2)) *
            (w.H("d3.p1").pow(2) - w.V("d6.p3").pow(2));
  check("route", st["route"], (s3 * anc3).scaled(pre).on_vacuum());

  auto split = [&](const std::string& plus_dot, const std::string& minus_port, const std::string& minus_tap) {
    return (w.H(plus_dot + ".p1") + w.D(plus_dot + ".t1")).pow(2) - (w.D(minus_port) - w.V(minus_tap)).pow(2);
  };
  Poly s4 = split("d1", "d4.p2", "d4.t2") * split("d2", "d5.p3", "d5.t3") * split("d3", "d6.p3", "d6.t3");
  check("subtract.split", st["subtract.split"], (s4 * anc3).scaled(1 / (192 * std::sqrt(2.0))).on_vacuum());

  auto H = [&](int j) { return w.H(num(j) + ".out"); };
  auto V = [&](int j) { return w.V(num(j) + ".out"); };
  Poly five = H(1) * H(2) * H(3) + V(1) * H(2) * H(3) + V(1) * H(2) * V(3) + V(1) * V(2) * H(3) + V(1) * V(2) * V(3);
  check("final", first_detector_residual(c), five.scaled(1 / std::sqrt(5.0)).on_vacuum());
  return check.failed;
}

}  // namespace oracle
