// Target states, fidelity, genuine multipartite entanglement and the
// end-to-end scheme check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sculpt/bigraph.hpp"
#include "sculpt/compiler.hpp"
#include "sculpt/qubit.hpp"
#include "sculpt/sculpting.hpp"
#include "sculpt/simulate.hpp"

namespace sculpt {

/// Diagonal-basis targets: GHZ (|+..+> + |-..->)/sqrt2, W with one |->, Type-5 with five terms.
inline QubitState target_state(PresetKind kind, int n) {
  if (kind == PresetKind::TYPE5 && n != 3) throw std::invalid_argument("target_state: TYPE5 needs N = 3");
  if (n < 2 || n > 16) throw std::invalid_argument("target_state: N must be in [2, 16]");
  QubitState s(n, Basis::Diagonal);
  const std::size_t all = s.dim() - 1;
  switch (kind) {
    case PresetKind::GHZ:
      s.amplitudes[0] = s.amplitudes[all] = 1.0;
      break;
    case PresetKind::W:
      for (int k = 0; k < n; ++k) s.amplitudes[std::size_t{1} << (n - 1 - k)] = 1.0;
      break;
    case PresetKind::TYPE5:
      // |+++> + |-++> + |-+-> + |--+> + |--->
      for (std::size_t i : {0b000, 0b100, 0b101, 0b110, 0b111}) s.amplitudes[i] = 1.0;
      break;
  }
  return s.normalized();
}

inline double fidelity(const QubitState& a, const QubitState& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("fidelity: dimension mismatch");
  QubitState bb = b.in_basis(a.basis);
  Amplitude s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitudes[i]) * bb.amplitudes[i];
  return std::min(1.0, std::norm(s));
}

/// Rank of the state reshaped to (qubits in `mask`) x (the rest).
inline int schmidt_rank(const QubitState& s, std::uint32_t mask, double cutoff = kTolerance) {
  const int n = s.n_qubits;
  std::vector<int> left, right;
  for (int q = 0; q < n; ++q) ((mask >> q) & 1u ? left : right).push_back(q);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index{1} << left.size(), Eigen::Index{1} << right.size());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Eigen::Index r = 0, c = 0;
    for (int q : left) r = (r << 1) | QubitState::bit(i, q, n);
    for (int q : right) c = (c << 1) | QubitState::bit(i, q, n);
    m(r, c) = s.amplitudes[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > cutoff) ++rank;
  return rank;
}

/// Schmidt rank > 1 across every bipartition.
inline bool genuine_entanglement(const QubitState& s) {
  const int n = s.n_qubits;
  if (n < 2) return false;
  QubitState u = s.normalized();
  // qubit 0 always on the right: each bipartition once
  for (std::uint32_t mask = 1; mask < (1u << n) - 1; ++mask) {
    if (mask & 1u) continue;
    if (schmidt_rank(u, mask) < 2) return false;
  }
  return true;
}

/// "num/den" with the smallest den = 2^a 3^b that reproduces p, else a decimal.
inline std::string rationalize(double p, double tol = kTolerance) {
  if (std::abs(p) < tol) return "0";
  std::vector<double> dens;
  for (int b = 0; b <= 6; ++b)
    for (int a = 0; a <= 40; ++a) dens.push_back(std::ldexp(std::pow(3.0, b), a));
  std::sort(dens.begin(), dens.end());
  for (double den : dens) {
    double num = std::round(p * den);
    if (num >= 1 && std::abs(p * den - num) < 1e-6 && std::abs(p - num / den) < tol) {
      if (den == 1) return std::to_string(static_cast<long long>(num));
      return std::to_string(static_cast<long long>(num)) + "/" + std::to_string(static_cast<long long>(den));
    }
  }
  std::ostringstream os;
  os.precision(12);
  os << p;
  return os.str();
}

struct SchemeReport {
  std::string name;
  int n = 0;
  bool epm = false;
  bool no_bunching = false;
  double oracle_target_fidelity = 0;  ///< oracle output vs. named target
  double circuit_fidelity = 1;        ///< worst corrected residual vs. oracle over successful outcomes
  double p_ff = 0;
  double p_noff = 0;
  std::size_t outcomes = 0;
  bool genuine = false;
  double runtime_ms = 0;

  nlohmann::json to_json() const {
    return {{"scheme", name},
            {"n", n},
            {"epm", epm},
            {"no_bunching", no_bunching},
            {"oracle_target_fidelity", oracle_target_fidelity},
            {"circuit_fidelity", circuit_fidelity},
            {"p_ff", p_ff},
            {"p_ff_exact", rationalize(p_ff)},
            {"p_noff", p_noff},
            {"p_noff_exact", rationalize(p_noff)},
            {"outcomes", outcomes},
            {"genuine", genuine},
            {"runtime_ms", runtime_ms}};
  }
};

inline std::string preset_name(PresetKind k) {
  switch (k) {
    case PresetKind::GHZ: return "GHZ";
    case PresetKind::W: return "W";
    case PresetKind::TYPE5: return "TYPE5";
  }
  return "?";
}

/// Oracle + compile + simulate + classify for one graph against a named target.
inline SchemeReport verify_scheme(const SculptingBigraph& g, PresetKind kind, int n, unsigned threads = 1) {
  auto t0 = std::chrono::steady_clock::now();
  SchemeReport r;
  r.name = preset_name(kind);
  r.n = n;
  r.epm = is_epm(g);
  FockState fin = apply_sculpting(g);
  r.no_bunching = no_bunching_check(fin, g.n_main());
  QubitState target = target_state(kind, n);
  QubitState oracle = r.no_bunching ? to_qubit_state(fin, g.n_main()).state : target;
  r.oracle_target_fidelity = r.no_bunching ? fidelity(target, oracle) : 0;
  r.genuine = genuine_entanglement(oracle);
  if (r.epm) {
    Circuit c = compile(g);
    auto outs = run_heralded(c);
    classify_feedforward(outs, c, oracle, 0, threads);
    r.outcomes = outs.size();
    r.p_ff = success_probability(outs, FeedForward::With);
    r.p_noff = success_probability(outs, FeedForward::Without);
    for (const auto& o : outs)
      if (o.cls != OutcomeClass::Failed) r.circuit_fidelity = std::min(r.circuit_fidelity, o.fidelity);
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string report_table(const std::vector<SchemeReport>& rs) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %2s  %-3s %-3s %-10s %-10s %-12s %-12s %-3s %9s\n", "scheme", "N", "epm",
                "nb", "F(target)", "F(circuit)", "P_ff", "P_noff", "gme", "ms");
  os << line;
  for (const auto& r : rs) {
    std::snprintf(line, sizeof line, "%-6s %2d  %-3s %-3s %-10.8f %-10.8f %-12s %-12s %-3s %9.1f\n", r.name.c_str(),
                  r.n, r.epm ? "yes" : "no", r.no_bunching ? "yes" : "no", r.oracle_target_fidelity,
                  r.circuit_fidelity, rationalize(r.p_ff).c_str(), rationalize(r.p_noff).c_str(),
                  r.genuine ? "yes" : "no", r.runtime_ms);
    os << line;
  }
  return os.str();
}

}  // namespace sculpt
