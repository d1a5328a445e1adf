// Exact Fock-space simulation of a Circuit with photon-number-resolving
// post-selection and feed-forward classification.
#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sculpt/circuit.hpp"
#include "sculpt/fock.hpp"
#include "sculpt/qubit.hpp"

namespace sculpt {

/// Images of creation operators: input wire -> sum of c·a†_out.
using LinearMap = std::map<WireId, std::vector<std::pair<WireId, Amplitude>>>;

namespace detail {

/// Applies a creation-operator substitution to every term. Images stay inside the map's wires.
inline FockState apply_linear(const FockState& state, const LinearMap& map) {
  std::map<Occupation, FockState> cache;
  FockState out;
  for (const auto& [occ, amp] : state.terms()) {
    std::vector<Occupation::Entry> touched, rest;
    for (const auto& e : occ.entries()) (map.contains(e.first) ? touched : rest).push_back(e);
    Occupation key(touched);
    auto it = cache.find(key);
    if (it == cache.end()) {
      double fact = 1;
      for (const auto& [w, n] : touched)
        for (unsigned k = 2; k <= n; ++k) fact *= k;
      FockState img = FockState::vacuum().scaled(1.0 / std::sqrt(fact));
      for (const auto& [w, n] : touched)
        for (unsigned k = 0; k < n; ++k) {
          FockState next;
          for (const auto& [o, c] : map.at(w)) next = add_scaled(next, c, create(img, o));
          img = std::move(next);
        }
      it = cache.emplace(key, std::move(img)).first;
    }
    for (const auto& [sub, c] : it->second.terms()) {
      std::vector<Occupation::Entry> merged = rest;
      merged.insert(merged.end(), sub.entries().begin(), sub.entries().end());
      out.add(Occupation(std::move(merged)), amp * c);
    }
  }
  return out;
}

inline Amplitude fourier(std::size_t j, std::size_t k, std::size_t n) {
  return std::polar(1.0 / std::sqrt(double(n)), 2 * std::numbers::pi * double(j * k % n) / double(n));
}

}  // namespace detail

/// Single-photon unitary of an optical element, or nullopt for non-optical elements.
inline std::optional<LinearMap> element_map(const ElementOp& op) {
  const double h = 1.0 / std::numbers::sqrt2;
  if (auto e = std::get_if<Hwp>(&op)) {
    if (!e->underline) return LinearMap{{e->h, {{e->h, h}, {e->v, h}}}, {e->v, {{e->h, h}, {e->v, -h}}}};
    return LinearMap{{e->h, {{e->h, h}, {e->v, -h}}}, {e->v, {{e->h, h}, {e->v, h}}}};
  }
  if (auto e = std::get_if<Pbs>(&op))
    return LinearMap{{e->top_h, {{e->top_h, 1.0}}},
                     {e->top_v, {{e->bottom_v, 1.0}}},
                     {e->bottom_h, {{e->bottom_h, 1.0}}},
                     {e->bottom_v, {{e->top_v, 1.0}}}};
  if (auto e = std::get_if<Bs>(&op))
    return LinearMap{{e->a, {{e->a, h}, {e->b, h}}}, {e->b, {{e->a, h}, {e->b, -h}}}};
  if (auto e = std::get_if<Multiport>(&op)) {
    LinearMap m;
    const std::size_t n = e->n();
    for (std::size_t ch = 0; ch < e->ports.front().size(); ++ch)
      for (std::size_t k = 0; k < n; ++k) {
        auto& img = m[e->ports[k][ch]];
        for (std::size_t j = 0; j < n; ++j) img.push_back({e->ports[j][ch], detail::fourier(j, k, n)});
      }
    return m;
  }
  return std::nullopt;
}

inline FockState apply_element(const FockState& state, const ElementOp& op) {
  if (auto m = element_map(op)) return detail::apply_linear(state, *m);
  if (auto s = std::get_if<Source>(&op)) {
    FockState out = state;
    for (unsigned k = 0; k < s->photons; ++k) out = create(out, s->wire).scaled(1.0 / std::sqrt(double(k + 1)));
    return out;
  }
  if (auto s = std::get_if<Swap>(&op)) {
    std::map<WireId, WireId> perm(s->moves.begin(), s->moves.end());
    return relabel(state, perm);
  }
  if (auto r = std::get_if<ReturnMerge>(&op)) {
    std::map<WireId, WireId> perm;
    for (auto [from, to] : r->moves) {
      perm[from] = to;
      perm[to] = from;
    }
    return relabel(state, perm);
  }
  return state;  // DetectorGroup: measured at the end of propagation
}

struct PropagateOptions {
  /// Drop the components rejected by each detector group as soon as it is reached.
  bool postselect = true;
  /// Called with the state after the last element of every stage.
  std::function<void(const std::string& stage, const FockState&)> observer;
};

inline FockState propagate(const Circuit& c, const PropagateOptions& opt = {}) {
  FockState s = FockState::vacuum();
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    const auto& e = c.elements[i];
    if (auto d = std::get_if<DetectorGroup>(&e.op); d && opt.postselect) {
      s = project_count(s, std::set<WireId>(d->wires.begin(), d->wires.end()), d->count).state;
    } else {
      s = apply_element(s, e.op);
    }
    bool stage_ends = i + 1 == c.elements.size() || c.elements[i + 1].stage != e.stage;
    if (stage_ends && opt.observer) opt.observer(e.stage, s);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Heralding

enum class OutcomeClass { Unclassified, IdentityCorrect, Correctable, Failed };

inline const char* to_string(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::Unclassified: return "unclassified";
    case OutcomeClass::IdentityCorrect: return "identity";
    case OutcomeClass::Correctable: return "correctable";
    case OutcomeClass::Failed: return "failed";
  }
  return "?";
}

struct HeraldOutcome {
  std::vector<std::pair<WireId, unsigned>> pattern;  ///< every detector wire, zeros included
  double probability = 0;
  FockState residual;  ///< normalized, detector wires removed
  std::vector<std::string> correction;
  double fidelity = 0;
  OutcomeClass cls = OutcomeClass::Unclassified;

  /// Counts per group separated by '|', e.g. "10|01".
  std::string key(const Circuit& c) const {
    std::string k;
    std::map<WireId, unsigned> counts(pattern.begin(), pattern.end());
    bool first = true;
    for (const auto& g : c.detector_groups()) {
      if (!first) k += '|';
      first = false;
      for (auto w : g.wires) k += std::to_string(counts[w]);
    }
    return k;
  }
};

/// Every accepted detector pattern with its conditional state. Patterns are
/// the photon-count assignments on the detector wires that meet every group's
/// requirement; those of zero probability are omitted. Ordered by pattern.
inline std::vector<HeraldOutcome> run_heralded(const Circuit& c) {
  auto diags = validate(c);
  if (!diags.empty()) throw CircuitError("run_heralded: invalid circuit: " + diags.front());

  std::vector<WireId> det_wires;
  for (const auto& g : c.detector_groups()) det_wires.insert(det_wires.end(), g.wires.begin(), g.wires.end());
  std::set<WireId> det_set(det_wires.begin(), det_wires.end());

  FockState final_state = propagate(c);

  std::map<std::vector<unsigned>, FockState> by_pattern;
  for (const auto& [occ, amp] : final_state.terms()) {
    std::vector<unsigned> counts;
    counts.reserve(det_wires.size());
    for (auto w : det_wires) counts.push_back(occ.count(w));
    std::vector<Occupation::Entry> rest;
    for (const auto& e : occ.entries())
      if (!det_set.contains(e.first)) rest.push_back(e);
    // Projecting the detectors onto a definite pattern: the detected photons'
    // normalization is absorbed into the amplitude (|n> is already normalized).
    by_pattern[counts].add(Occupation(std::move(rest)), amp);
  }

  std::vector<HeraldOutcome> out;
  for (auto& [counts, residual] : by_pattern) {
    double p = residual.norm2();
    if (p < 1e-20) continue;
    HeraldOutcome o;
    for (std::size_t i = 0; i < det_wires.size(); ++i) o.pattern.push_back({det_wires[i], counts[i]});
    o.probability = p;
    o.residual = residual.normalized();
    out.push_back(std::move(o));
  }
  return out;
}

/// Distribution over all detector patterns without post-selection.
inline std::map<std::vector<unsigned>, double> pattern_distribution(const Circuit& c) {
  std::vector<WireId> det_wires;
  for (const auto& g : c.detector_groups()) det_wires.insert(det_wires.end(), g.wires.begin(), g.wires.end());
  FockState s = propagate(c, {.postselect = false, .observer = {}});
  std::map<std::vector<unsigned>, double> dist;
  for (const auto& [occ, amp] : s.terms()) {
    std::vector<unsigned> counts;
    for (auto w : det_wires) counts.push_back(occ.count(w));
    dist[counts] += std::norm(amp);
  }
  return dist;
}

/// Reads the output qubits (zero wire = bit 0) in the encoding's diagonal basis.
inline std::optional<QubitState> residual_qubits(const Circuit& c, const FockState& residual) {
  const int n = int(c.outputs.size());
  std::map<WireId, std::pair<int, int>> role;
  for (int q = 0; q < n; ++q) {
    role[c.outputs[q].zero] = {q, 0};
    role[c.outputs[q].one] = {q, 1};
  }
  QubitState s(n, Basis::Diagonal);
  for (const auto& [occ, amp] : residual.terms()) {
    std::vector<int> seen(n, 0);
    std::size_t index = 0;
    for (const auto& [w, cnt] : occ.entries()) {
      auto it = role.find(w);
      if (it == role.end()) return std::nullopt;
      seen[it->second.first] += int(cnt);
      if (it->second.second) index |= std::size_t{1} << (n - 1 - it->second.first);
    }
    for (int v : seen)
      if (v != 1) return std::nullopt;
    s.amplitudes[index] += amp;
  }
  return s.normalized();
}

// ---------------------------------------------------------------------------
// Feed-forward

/// Per-qubit correction: X^flip followed by diag(1, exp(2πi·phase/order)).
struct LocalCorrection {
  bool flip = false;
  int phase = 0;
  int order = 2;

  std::string label() const {
    std::string s = flip ? "X" : "";
    if (phase == 0) return flip ? s : "I";
    if (2 * phase == order) return s + "Z";
    return s + "R(" + std::to_string(phase) + "/" + std::to_string(order) + ")";
  }
};

inline double fidelity_raw(const QubitState& a, const QubitState& b) {
  Amplitude s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return std::norm(s);
}

inline QubitState apply_corrections(const QubitState& psi, const std::vector<LocalCorrection>& cs) {
  const int n = psi.n_qubits;
  QubitState out(n, psi.basis);
  std::size_t mask = 0;
  for (int q = 0; q < n; ++q)
    if (cs[q].flip) mask |= std::size_t{1} << (n - 1 - q);
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    Amplitude a = psi.amplitudes[i ^ mask];
    for (int q = 0; q < n; ++q)
      if (QubitState::bit(i, q, n) && cs[q].phase)
        a *= std::polar(1.0, 2 * std::numbers::pi * cs[q].phase / cs[q].order);
    out.amplitudes[i] = a;
  }
  return out;
}

/// Smallest correction (identity preferred) taking `psi` to `target` up to global phase.
inline std::optional<std::vector<LocalCorrection>> find_correction(const QubitState& psi, const QubitState& target,
                                                                   int order, double tol = kTolerance) {
  const int n = psi.n_qubits;
  if (target.n_qubits != n) return std::nullopt;
  const double mag_tol = 1e-6;
  const double step = 2 * std::numbers::pi / order;

  std::vector<std::size_t> masks(psi.dim());
  std::iota(masks.begin(), masks.end(), 0);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });

  for (std::size_t mask : masks) {
    std::vector<Amplitude> flipped(psi.dim());
    bool magnitudes_match = true;
    for (std::size_t i = 0; i < psi.dim() && magnitudes_match; ++i) {
      flipped[i] = psi.amplitudes[i ^ mask];
      magnitudes_match = std::abs(std::abs(flipped[i]) - std::abs(target.amplitudes[i])) < mag_tol;
    }
    if (!magnitudes_match) continue;

    // ratio_i = target_i / flipped_i must equal g·Π_q w^(m_q b_q(i)).
    std::vector<int> phase(n, -1);
    bool consistent = true;
    for (std::size_t i = 0; i < psi.dim() && consistent; ++i) {
      if (std::abs(target.amplitudes[i]) < mag_tol) continue;
      for (int q = 0; q < n && consistent; ++q) {
        std::size_t j = i ^ (std::size_t{1} << (n - 1 - q));
        if (QubitState::bit(i, q, n) == 0 || std::abs(target.amplitudes[j]) < mag_tol) continue;
        Amplitude rho = (target.amplitudes[i] / flipped[i]) / (target.amplitudes[j] / flipped[j]);
        int m = int(std::lround(std::arg(rho) / step));
        m = ((m % order) + order) % order;
        if (std::abs(rho - std::polar(1.0, m * step)) > 1e-6) consistent = false;
        else if (phase[q] == -1) phase[q] = m;
        else if (phase[q] != m) consistent = false;
      }
    }
    if (!consistent) continue;

    std::vector<int> free;
    for (int q = 0; q < n; ++q)
      if (phase[q] == -1) free.push_back(q);
    std::size_t combos = 1;
    for (std::size_t k = 0; k < free.size(); ++k) combos *= order;
    for (std::size_t combo = 0; combo < combos; ++combo) {
      std::size_t rem = combo;
      std::vector<LocalCorrection> cs(n);
      for (int q = 0; q < n; ++q) cs[q] = {bool((mask >> (n - 1 - q)) & 1u), phase[q] == -1 ? 0 : phase[q], order};
      for (int q : free) {
        cs[q].phase = int(rem % order);
        rem /= order;
      }
      if (fidelity_raw(target, apply_corrections(psi, cs)) >= 1 - tol) return cs;
    }
  }
  return std::nullopt;
}

/// lcm of 2 and every multiport size: the phase alphabet the corrections need.
inline int correction_phase_order(const Circuit& c) {
  int order = 2;
  for (const auto& e : c.elements)
    if (auto m = std::get_if<Multiport>(&e.op)) order = std::lcm(order, int(m->n()));
  return order;
}

/// Fills correction, fidelity and class of every outcome against `target`.
inline void classify_feedforward(std::vector<HeraldOutcome>& outcomes, const Circuit& c, const QubitState& target,
                                 int order = 0, unsigned threads = 1) {
  if (order <= 0) order = correction_phase_order(c);
  const QubitState tgt = target.in_basis(Basis::Diagonal).normalized();
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& o = outcomes[i];
      o.correction.clear();
      auto q = residual_qubits(c, o.residual);
      if (!q || q->n_qubits != tgt.n_qubits) {
        o.cls = OutcomeClass::Failed;
        o.fidelity = 0;
        continue;
      }
      double f0 = fidelity_raw(tgt, *q);
      if (f0 >= 1 - kTolerance) {
        o.cls = OutcomeClass::IdentityCorrect;
        o.fidelity = f0;
        o.correction.assign(q->n_qubits, "I");
        continue;
      }
      if (auto cs = find_correction(*q, tgt, order)) {
        o.cls = OutcomeClass::Correctable;
        o.fidelity = fidelity_raw(tgt, apply_corrections(*q, *cs));
        for (const auto& x : *cs) o.correction.push_back(x.label());
      } else {
        o.cls = OutcomeClass::Failed;
        o.fidelity = f0;
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(outcomes.size())));
  if (threads == 1) {
    work(0, outcomes.size());
    return;
  }
  std::vector<std::jthread> pool;
  std::size_t chunk = (outcomes.size() + threads - 1) / threads;
  for (std::size_t b = 0; b < outcomes.size(); b += chunk)
    pool.emplace_back(work, b, std::min(outcomes.size(), b + chunk));
}

enum class FeedForward { With, Without };

inline double success_probability(const std::vector<HeraldOutcome>& outcomes, FeedForward mode) {
  double p = 0;
  for (const auto& o : outcomes) {
    if (o.cls == OutcomeClass::IdentityCorrect) p += o.probability;
    else if (o.cls == OutcomeClass::Correctable && mode == FeedForward::With) p += o.probability;
  }
  return p;
}

/// Records each successful pattern's corrections in the circuit's feed-forward table.
inline void attach_feedforward(Circuit& c, const std::vector<HeraldOutcome>& outcomes) {
  c.feedforward_table.clear();
  for (const auto& o : outcomes)
    if (o.cls == OutcomeClass::IdentityCorrect || o.cls == OutcomeClass::Correctable)
      c.feedforward_table[o.key(c)] = o.correction;
}

}  // namespace sculpt
