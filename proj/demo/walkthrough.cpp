// Walks one preset through the compiled circuit stage by stage and prints the
// state after each stage, then the heralded outcomes.
//
//   walkthrough [ghz|w|type5] [N]

#include <cstdio>
#include <string>

#include "sculpt/sculpt.hpp"

using namespace sculpt;

namespace {

std::string term(const Circuit& c, const Occupation& occ) {
  std::string s;
  for (const auto& [w, n] : occ.entries()) {
    const auto& info = c.wire(w);
    s += " " + info.location + (info.channel == Channel::H ? ".H" : ".V");
    if (n > 1) s += "^" + std::to_string(n);
  }
  return s;
}

void dump(const Circuit& c, const std::string& stage, const FockState& s, std::size_t limit = 8) {
  std::printf("-- %s: %zu terms, norm^2 %.6g\n", stage.c_str(), s.size(), s.norm2());
  std::size_t k = 0;
  for (const auto& [occ, a] : s.terms()) {
    if (k++ == limit) {
      std::printf("   ...\n");
      break;
    }
    std::printf("   %+.5f%+.5fi %s\n", a.real(), a.imag(), term(c, occ).c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string kind = argc > 1 ? argv[1] : "ghz";
  int n = argc > 2 ? std::stoi(argv[2]) : 3;
  PresetKind k = kind == "w" ? PresetKind::W : kind == "type5" ? PresetKind::TYPE5 : PresetKind::GHZ;

  auto g = preset(k, n);
  auto c = compile(g);
  std::printf("%s(%d): %zu elements, %zu PBS, %zu detector groups\n", preset_name(k).c_str(), n, c.elements.size(),
              c.count<Pbs>(), c.detector_groups().size());

  PropagateOptions opt;
  opt.observer = [&](const std::string& stage, const FockState& s) { dump(c, stage, s); };
  propagate(c, opt);

  auto outs = run_heralded(c);
  classify_feedforward(outs, c, target_state(k, n));
  std::printf("\n%zu accepted patterns\n", outs.size());
  for (const auto& o : outs) {
    if (o.cls == OutcomeClass::Failed) continue;
    std::string corr;
    for (const auto& x : o.correction) corr += x + " ";
    std::printf("  %-16s p=%-10s %-16s %s\n", o.key(c).c_str(), rationalize(o.probability).c_str(),
                to_string(o.cls), corr.c_str());
  }
  std::printf("P_ff = %s, P_noff = %s\n", rationalize(success_probability(outs, FeedForward::With)).c_str(),
              rationalize(success_probability(outs, FeedForward::Without)).c_str());
}
