#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/fock.hpp"

namespace sculpt {

/// computational: bit 0 = |0>, 1 = |1>.  diagonal: bit 0 = |+>, 1 = |->.
enum class Basis { Computational, Diagonal };

/// Dense 2^N amplitude vector. Qubit 0 is the most significant bit.
struct QubitState {
  int n_qubits = 0;
  Basis basis = Basis::Diagonal;
  std::vector<Amplitude> amplitudes;

  QubitState() = default;
  QubitState(int n, Basis b) : n_qubits(n), basis(b), amplitudes(std::size_t{1} << n) {}

  std::size_t dim() const { return amplitudes.size(); }

  static int bit(std::size_t index, int qubit, int n) { return int((index >> (n - 1 - qubit)) & 1u); }

  double norm2() const {
    double s = 0;
    for (auto a : amplitudes) s += std::norm(a);
    return s;
  }

  QubitState normalized() const {
    QubitState out = *this;
    double n = std::sqrt(norm2());
    if (n > 0)
      for (auto& a : out.amplitudes) a /= n;
    return out;
  }

  /// Same state re-expressed in the other single-qubit basis (Hadamard on every qubit).
  QubitState in_basis(Basis target) const {
    if (target == basis) return *this;
    QubitState out(n_qubits, target);
    const double h = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (amplitudes[i] == Amplitude{}) continue;
      for (std::size_t o = 0; o < dim(); ++o) {
        double f = 1.0;
        for (int q = 0; q < n_qubits; ++q)
          f *= (bit(i, q, n_qubits) & bit(o, q, n_qubits)) ? -h : h;
        out.amplitudes[o] += f * amplitudes[i];
      }
    }
    return out;
  }

  /// Label like "|-++>" or "|011>".
  static std::string ket(std::size_t index, int n, Basis b) {
    std::string s = "|";
    for (int q = 0; q < n; ++q) {
      int v = bit(index, q, n);
      s += b == Basis::Diagonal ? (v ? '-' : '+') : (v ? '1' : '0');
    }
    return s + ">";
  }
};

}  // namespace sculpt
