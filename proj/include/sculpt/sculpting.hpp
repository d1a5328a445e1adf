// Algebraic sculpting oracle. Mode m (main modes first, then ancillas) owns
// wires 2m (internal state 0) and 2m+1 (internal state 1).
#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "sculpt/bigraph.hpp"
#include "sculpt/fock.hpp"
#include "sculpt/qubit.hpp"

namespace sculpt {

inline WireId mode_wire(std::size_t mode, int internal) {
  return WireId{static_cast<std::uint32_t>(2 * mode + internal)};
}

/// |Sym_N>|Anc_K>
inline FockState initial_state(int n, int k) {
  if (n < 1 || k < 0) throw std::invalid_argument("initial_state: need N >= 1 and K >= 0");
  std::vector<Occupation::Entry> entries;
  for (int j = 0; j < n; ++j) {
    entries.push_back({mode_wire(j, 0), 1});
    entries.push_back({mode_wire(j, 1), 1});
  }
  for (int a = 0; a < k; ++a) entries.push_back({mode_wire(n + a, 0), 1});
  return FockState::basis(Occupation(std::move(entries)));
}

/// a_psi = conj(alpha) a_0 + conj(beta) a_1 on one spatial mode.
inline FockState annihilate_internal(const FockState& s, std::size_t mode, const InternalState& psi) {
  FockState out;
  if (psi.alpha != Amplitude{}) out = add_scaled(out, std::conj(psi.alpha), annihilate(s, mode_wire(mode, 0)));
  if (psi.beta != Amplitude{}) out = add_scaled(out, std::conj(psi.beta), annihilate(s, mode_wire(mode, 1)));
  return out;
}

inline FockState apply_dot(const SculptingBigraph& g, const Dot& dot, const FockState& s) {
  FockState out;
  for (const auto& leg : dot.legs)
    out = add_scaled(out, leg.amplitude, annihilate_internal(s, g.circle_index(leg.mode), leg.state));
  return out;
}

/// Applies the dots in `order` (indices into g.dots()).
inline FockState apply_sculpting(const SculptingBigraph& g, const std::vector<std::size_t>& order) {
  if (g.n_main() < 1) return FockState{};
  FockState s = initial_state(g.n_main(), g.n_ancilla());
  for (std::size_t d : order) s = apply_dot(g, g.dots().at(d), s);
  return s;
}

/// Unnormalized |Psi>_fin.
inline FockState apply_sculpting(const SculptingBigraph& g) {
  std::vector<std::size_t> order(g.dots().size());
  std::iota(order.begin(), order.end(), 0);
  return apply_sculpting(g, order);
}

/// Exactly one boson per main mode and none elsewhere, in every term.
inline bool no_bunching_check(const FockState& state, int n) {
  for (const auto& [occ, amp] : state.terms()) {
    std::vector<unsigned> per_mode(n, 0);
    for (const auto& [w, c] : occ.entries()) {
      std::size_t mode = w.value / 2;
      if (mode >= std::size_t(n)) return false;
      per_mode[mode] += c;
    }
    for (unsigned c : per_mode)
      if (c != 1) return false;
  }
  return true;
}

/// Final state assembled from the perfect matchings.
inline FockState pm_predict(const SculptingBigraph& g) {
  if (!is_epm(g)) throw GraphError("pm_predict: graph is not EPM");
  FockState total;
  for (const auto& m : perfect_matchings(g)) {
    Amplitude coef = 1.0;
    std::vector<std::vector<std::pair<WireId, Amplitude>>> factors;
    for (EdgeRef e : m) {
      const Leg& leg = g.leg(e);
      coef *= leg.amplitude;
      std::size_t mode = g.circle_index(leg.mode);
      if (g.kind_of(leg.mode) == CircleKind::Main) {
        // a_psi a†_0 a†_1 |vac> = conj(alpha) a†_1 + conj(beta) a†_0
        factors.push_back({{mode_wire(mode, 1), std::conj(leg.state.alpha)},
                           {mode_wire(mode, 0), std::conj(leg.state.beta)}});
      } else {
        coef *= std::conj(leg.state.alpha);
      }
    }
    total = add_scaled(total, 1.0, product_of_creations(factors, coef));
  }
  return total;
}

struct QubitExtraction {
  QubitState state;   ///< normalized
  double norm2 = 0;   ///< squared norm of the input before normalization
};

/// Reads one qubit per main mode out of a no-bunching Fock state.
inline QubitExtraction to_qubit_state(const FockState& state, int n, Basis basis = Basis::Diagonal) {
  if (!no_bunching_check(state, n))
    throw std::invalid_argument("to_qubit_state: state has bunched or ancilla-occupied terms");
  QubitState comp(n, Basis::Computational);
  for (const auto& [occ, amp] : state.terms()) {
    std::size_t index = 0;
    for (const auto& [w, c] : occ.entries()) {
      int q = int(w.value / 2);
      if (w.value % 2) index |= std::size_t{1} << (n - 1 - q);
    }
    comp.amplitudes[index] += amp;
  }
  QubitExtraction out;
  out.norm2 = comp.norm2();
  out.state = comp.in_basis(basis).normalized();
  return out;
}

}  // namespace sculpt
