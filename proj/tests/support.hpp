// Independent reference computations used by the tests. Nothing here calls
// into the algebra it is used to check beyond plain data containers.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "sculpt/sculpt.hpp"

namespace oracle {

using sculpt::Amplitude;
using sculpt::WireId;

/// Commuting polynomial in creation operators: monomial exponents -> coefficient.
struct Poly {
  std::map<std::map<std::uint32_t, unsigned>, Amplitude> terms;

  static Poly one(Amplitude c = 1.0) {
    Poly p;
    p.terms[{}] = c;
    return p;
  }

  /// c_1 a†_{w_1} + c_2 a†_{w_2} + ...
  static Poly linear(std::initializer_list<std::pair<std::uint32_t, Amplitude>> xs) {
    Poly p;
    for (auto [w, c] : xs) p.terms[{{w, 1u}}] += c;
    return p;
  }

  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : terms)
      for (const auto& [m2, c2] : o.terms) {
        auto m = m1;
        for (auto [w, e] : m2) m[w] += e;
        r.terms[m] += c1 * c2;
      }
    return r;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) r.terms[m] += c;
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * one(-1.0); }
  Poly scaled(Amplitude c) const { return *this * one(c); }
  Poly pow(unsigned k) const {
    Poly r = one();
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Acting on |vac>: a†^n|vac> = sqrt(n!) |n>.
  sculpt::FockState on_vacuum() const {
    sculpt::FockState s;
    for (const auto& [m, c] : terms) {
      double f = 1;
      std::vector<sculpt::Occupation::Entry> e;
      for (auto [w, n] : m) {
        for (unsigned k = 2; k <= n; ++k) f *= k;
        e.push_back({WireId{w}, n});
      }
      s.add(sculpt::Occupation(e), c * std::sqrt(f));
    }
    return s;
  }
};

/// Termwise equality after removing one global phase.
inline bool equal_up_to_phase(const sculpt::FockState& a, const sculpt::FockState& b, double tol = 1e-9) {
  Amplitude ov = sculpt::inner(a, b);
  if (std::abs(ov) < 1e-15) return a.is_zero() && b.is_zero();
  Amplitude ph = ov / std::abs(ov);
  return sculpt::approx_equal(a.scaled(ph), b, tol);
}

// ---------------------------------------------------------------------------
// Dense sculpting: occupation vectors indexed by 2*mode + internal.

using Dense = std::map<std::vector<unsigned>, Amplitude>;

inline Dense dense_sculpt(const sculpt::SculptingBigraph& g) {
  const auto circles = g.circles();
  std::vector<unsigned> init(2 * circles.size(), 0);
  for (int j = 0; j < g.n_main(); ++j) init[2 * j] = init[2 * j + 1] = 1;
  for (std::size_t a = g.n_main(); a < circles.size(); ++a) init[2 * a] = 1;
  Dense s{{init, 1.0}};
  for (const auto& d : g.dots()) {
    Dense next;
    for (const auto& [occ, amp] : s)
      for (const auto& leg : d.legs) {
        std::size_t m = g.circle_index(leg.mode);
        Amplitude comp[2] = {std::conj(leg.state.alpha), std::conj(leg.state.beta)};
        for (int i = 0; i < 2; ++i) {
          if (comp[i] == Amplitude{} || occ[2 * m + i] == 0) continue;
          auto o = occ;
          double f = std::sqrt(double(o[2 * m + i]));
          o[2 * m + i] -= 1;
          next[o] += amp * leg.amplitude * comp[i] * f;
        }
      }
    s.clear();
    for (auto& [o, a] : next)
      if (std::abs(a) > 1e-13) s[o] = a;
  }
  return s;
}

inline sculpt::FockState dense_to_fock(const Dense& d) {
  sculpt::FockState s;
  for (const auto& [occ, amp] : d) {
    std::vector<sculpt::Occupation::Entry> e;
    for (std::size_t w = 0; w < occ.size(); ++w)
      if (occ[w]) e.push_back({WireId{std::uint32_t(w)}, occ[w]});
    s.add(sculpt::Occupation(e), amp);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Perfect matchings by subset enumeration.

inline std::vector<std::vector<sculpt::EdgeRef>> brute_force_matchings(const sculpt::SculptingBigraph& g) {
  std::vector<sculpt::EdgeRef> edges;
  for (std::size_t d = 0; d < g.dots().size(); ++d)
    for (std::size_t l = 0; l < g.dots()[d].legs.size(); ++l) edges.push_back({d, l});
  const auto circles = g.circles();
  std::vector<std::vector<sculpt::EdgeRef>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    std::vector<int> dot_use(g.dots().size(), 0), circ_use(circles.size(), 0);
    std::vector<sculpt::EdgeRef> chosen;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (mask >> i & 1u) {
        chosen.push_back(edges[i]);
        dot_use[edges[i].dot]++;
        circ_use[g.circle_index(g.leg(edges[i]).mode)]++;
      }
    bool ok = std::all_of(dot_use.begin(), dot_use.end(), [](int x) { return x == 1; }) &&
              std::all_of(circ_use.begin(), circ_use.end(), [](int x) { return x == 1; });
    if (ok) out.push_back(chosen);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random EPM graphs: N main circles (one +, one - edge each), K ancillas with
// |0> edges to distinct dots, N+K dots each with at least one leg, equal-weight
// legs with random phases.

inline sculpt::SculptingBigraph random_epm_graph(std::mt19937& rng, std::size_t max_edges = 10, bool signs_only = false) {
  using namespace sculpt;
  std::uniform_real_distribution<double> phase(0, 2 * std::numbers::pi);
  for (;;) {
    int n = std::uniform_int_distribution<int>(1, 3)(rng);
    int k = std::uniform_int_distribution<int>(0, 2)(rng);
    int dots = n + k;
    std::vector<std::vector<std::pair<std::string, InternalState>>> legs(dots);
    std::size_t edge_count = 0;
    std::uniform_int_distribution<int> pick(0, dots - 1);
    bool fail = false;
    for (int j = 1; j <= n; ++j) {
      if (dots < 2) {
        fail = true;
        break;
      }
      int a = pick(rng), b;
      do b = pick(rng);
      while (b == a);
      legs[a].push_back({std::to_string(j), InternalState::plus()});
      legs[b].push_back({std::to_string(j), InternalState::minus()});
      edge_count += 2;
    }
    std::vector<std::string> anc;
    for (int a = 0; a < k; ++a) {
      std::string label(1, char('X' + a));
      anc.push_back(label);
      int d = std::uniform_int_distribution<int>(1, dots)(rng);
      std::vector<int> ids(dots);
      std::iota(ids.begin(), ids.end(), 0);
      std::shuffle(ids.begin(), ids.end(), rng);
      for (int i = 0; i < d; ++i) legs[ids[i]].push_back({label, InternalState::zero()});
      edge_count += d;
    }
    if (fail || edge_count > max_edges) continue;
    if (std::any_of(legs.begin(), legs.end(), [](const auto& l) { return l.empty(); })) continue;
    std::vector<Dot> ds;
    for (int i = 0; i < dots; ++i) {
      Dot d{i + 1, {}};
      double w = 1.0 / std::sqrt(double(legs[i].size()));
      for (auto& [m, s] : legs[i])
        d.legs.push_back({m, s, signs_only ? (rng() % 2 ? w : -w) : std::polar(w, phase(rng))});
      ds.push_back(std::move(d));
    }
    return SculptingBigraph(n, anc, std::move(ds));
  }
}

inline sculpt::FockState random_state(std::mt19937& rng, std::uint32_t wires, unsigned photons, int terms) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::uint32_t> w(0, wires - 1);
  sculpt::FockState s;
  for (int t = 0; t < terms; ++t) {
    std::vector<sculpt::Occupation::Entry> e;
    for (unsigned p = 0; p < photons; ++p) e.push_back({WireId{w(rng)}, 1u});
    s.add(sculpt::Occupation(e), {g(rng), g(rng)});
  }
  return s.normalized();
}

// ---------------------------------------------------------------------------
// Whole-circuit single-photon matrix and permanent amplitudes.

inline Eigen::MatrixXcd element_matrix(const sculpt::ElementOp& op, std::size_t n_wires) {
  using namespace sculpt;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n_wires, n_wires);
  const double h = 1 / std::sqrt(2.0);
  auto set2 = [&](WireId a, WireId b, Amplitude aa, Amplitude ba, Amplitude ab, Amplitude bb) {
    // columns are inputs
    u(a.value, a.value) = aa;
    u(b.value, a.value) = ba;
    u(a.value, b.value) = ab;
    u(b.value, b.value) = bb;
  };
  if (auto e = std::get_if<Hwp>(&op)) {
    if (e->underline) set2(e->h, e->v, h, -h, h, h);
    else set2(e->h, e->v, h, h, h, -h);
  } else if (auto e = std::get_if<Bs>(&op)) {
    set2(e->a, e->b, h, h, h, -h);
  } else if (auto e = std::get_if<Pbs>(&op)) {
    set2(e->top_v, e->bottom_v, 0, 1, 1, 0);
  } else if (auto e = std::get_if<Multiport>(&op)) {
    const std::size_t n = e->n();
    for (std::size_t ch = 0; ch < e->ports[0].size(); ++ch)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          u(e->ports[j][ch].value, e->ports[k][ch].value) =
              std::polar(1 / std::sqrt(double(n)), 2 * std::numbers::pi * double(j * k) / double(n));
  } else if (auto e = std::get_if<Swap>(&op)) {
    for (auto [from, to] : e->moves) u(from.value, from.value) = 0;
    for (auto [from, to] : e->moves) u(to.value, from.value) = 1;
  } else if (auto e = std::get_if<ReturnMerge>(&op)) {
    for (auto [a, b] : e->moves) set2(a, b, 0, 1, 1, 0);
  }
  return u;
}

inline Amplitude permanent(const Eigen::MatrixXcd& m) {
  const int n = int(m.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Amplitude s{};
  do {
    Amplitude t = 1;
    for (int i = 0; i < n; ++i) t *= m(i, p[i]);
    s += t;
  } while (std::next_permutation(p.begin(), p.end()));
  return s;
}

/// <out| U |in> with |in> the circuit's sources; requires every Source to come first.
inline Amplitude circuit_amplitude(const sculpt::Circuit& c, const sculpt::Occupation& out) {
  using namespace sculpt;
  const std::size_t n = c.wires.size();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  std::vector<std::uint32_t> in_photons;
  double norm = 1;
  for (const auto& e : c.elements) {
    if (auto s = std::get_if<Source>(&e.op)) {
      for (unsigned k = 0; k < s->photons; ++k) in_photons.push_back(s->wire.value);
      for (unsigned k = 2; k <= s->photons; ++k) norm *= k;
      continue;
    }
    u = element_matrix(e.op, n) * u;
  }
  std::vector<std::uint32_t> out_photons;
  for (auto [w, k] : out.entries()) {
    for (unsigned i = 0; i < k; ++i) out_photons.push_back(w.value);
    for (unsigned i = 2; i <= k; ++i) norm *= i;
  }
  if (out_photons.size() != in_photons.size()) return 0;
  Eigen::MatrixXcd m(in_photons.size(), in_photons.size());
  for (std::size_t r = 0; r < out_photons.size(); ++r)
    for (std::size_t col = 0; col < in_photons.size(); ++col) m(r, col) = u(out_photons[r], in_photons[col]);
  return permanent(m) / std::sqrt(norm);
}

}  // namespace oracle
