// Sparse second-quantized bosonic state algebra.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sculpt {

using Amplitude = std::complex<double>;

/// Amplitudes with magnitude below this are never stored.
inline constexpr double kDropout = 1e-12;
/// Default absolute tolerance for state comparisons.
inline constexpr double kTolerance = 1e-9;

/// Opaque identifier of one optical wire.
struct WireId {
  std::uint32_t value = 0;
  friend auto operator<=>(const WireId&, const WireId&) = default;
};

/// Sorted sparse occupation vector; zero counts are never stored.
class Occupation {
 public:
  using Entry = std::pair<WireId, unsigned>;

  Occupation() = default;
  explicit Occupation(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    for (const auto& [w, n] : entries) {
      if (n == 0) continue;
      if (!entries_.empty() && entries_.back().first == w)
        entries_.back().second += n;
      else
        entries_.push_back({w, n});
    }
  }

  unsigned count(WireId w) const {
    auto it = find(w);
    return it != entries_.end() && it->first == w ? it->second : 0;
  }

  /// Copy with the count on `w` replaced by `n`.
  Occupation with(WireId w, unsigned n) const {
    Occupation out = *this;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), w,
                               [](const Entry& e, WireId x) { return e.first < x; });
    if (it != out.entries_.end() && it->first == w) {
      if (n == 0)
        out.entries_.erase(it);
      else
        it->second = n;
    } else if (n != 0) {
      out.entries_.insert(it, {w, n});
    }
    return out;
  }

  unsigned total() const {
    unsigned t = 0;
    for (const auto& e : entries_) t += e.second;
    return t;
  }

  unsigned total_on(const std::set<WireId>& wires) const {
    unsigned t = 0;
    for (const auto& [w, n] : entries_)
      if (wires.contains(w)) t += n;
    return t;
  }

  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

  friend auto operator<=>(const Occupation&, const Occupation&) = default;
  friend bool operator==(const Occupation&, const Occupation&) = default;

 private:
  std::vector<Entry>::const_iterator find(WireId w) const {
    return std::lower_bound(entries_.begin(), entries_.end(), w,
                            [](const Entry& e, WireId x) { return e.first < x; });
  }

  std::vector<Entry> entries_;
};

/// Superposition of occupation vectors. The empty map is the zero state.
class FockState {
 public:
  using Terms = std::map<Occupation, Amplitude>;

  FockState() = default;

  static FockState vacuum() {
    FockState s;
    s.terms_.emplace(Occupation{}, Amplitude{1.0, 0.0});
    return s;
  }
  static FockState basis(const Occupation& occ, Amplitude amp = 1.0) {
    FockState s;
    s.add(occ, amp);
    return s;
  }

  /// Accumulates `amp` onto `occ`, dropping the term if it cancels.
  void add(const Occupation& occ, Amplitude amp) {
    auto [it, inserted] = terms_.try_emplace(occ, amp);
    if (!inserted) it->second += amp;
    if (std::abs(it->second) < kDropout) terms_.erase(it);
  }

  Amplitude amplitude(const Occupation& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? Amplitude{} : it->second;
  }

  double norm2() const {
    double n = 0;
    for (const auto& [_, a] : terms_) n += std::norm(a);
    return n;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }

  std::set<WireId> support() const {
    std::set<WireId> out;
    for (const auto& [occ, _] : terms_)
      for (const auto& [w, n] : occ.entries()) out.insert(w);
    return out;
  }

  FockState scaled(Amplitude c) const {
    FockState out;
    for (const auto& [occ, a] : terms_) out.add(occ, c * a);
    return out;
  }

  FockState normalized() const {
    double n = std::sqrt(norm2());
    return n == 0 ? *this : scaled(1.0 / n);
  }

 private:
  Terms terms_;
};

inline FockState create(const FockState& state, WireId w) {
  FockState out;
  for (const auto& [occ, amp] : state.terms()) {
    unsigned n = occ.count(w);
    out.add(occ.with(w, n + 1), amp * std::sqrt(double(n + 1)));
  }
  return out;
}

inline FockState annihilate(const FockState& state, WireId w) {
  FockState out;
  for (const auto& [occ, amp] : state.terms()) {
    unsigned n = occ.count(w);
    if (n == 0) continue;
    out.add(occ.with(w, n - 1), amp * std::sqrt(double(n)));
  }
  return out;
}

/// a + c·b
inline FockState add_scaled(const FockState& a, Amplitude c, const FockState& b) {
  FockState out = a;
  if (c == Amplitude{}) return out;
  for (const auto& [occ, amp] : b.terms()) out.add(occ, c * amp);
  return out;
}

/// ⟨a|b⟩
inline Amplitude inner(const FockState& a, const FockState& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  Amplitude s{};
  for (const auto& [occ, amp] : small.terms()) {
    Amplitude other = large.amplitude(occ);
    if (other == Amplitude{}) continue;
    s += &small == &a ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return s;
}

struct Projection {
  FockState state;
  double probability = 0;
};

/// Component with exactly `n` photons summed over `wires`.
inline Projection project_count(const FockState& state, const std::set<WireId>& wires,
                                unsigned n) {
  Projection p;
  for (const auto& [occ, amp] : state.terms())
    if (occ.total_on(wires) == n) p.state.add(occ, amp);
  p.probability = p.state.norm2();
  return p;
}

/// Re-keys every occupation through `perm`. Wires absent from the map are fixed.
inline FockState relabel(const FockState& state, const std::map<WireId, WireId>& perm) {
  std::set<WireId> images;
  for (const auto& [from, to] : perm) images.insert(to);
  if (images.size() != perm.size())
    throw std::invalid_argument("relabel: permutation is not injective");
  for (const auto& [from, to] : perm)
    if (!perm.contains(to))
      throw std::invalid_argument("relabel: permutation does not close over its wires");

  FockState out;
  for (const auto& [occ, amp] : state.terms()) {
    std::vector<Occupation::Entry> entries;
    entries.reserve(occ.entries().size());
    for (const auto& [w, n] : occ.entries()) {
      auto it = perm.find(w);
      entries.push_back({it == perm.end() ? w : it->second, n});
    }
    out.add(Occupation(std::move(entries)), amp);
  }
  return out;
}

/// Termwise comparison with absolute tolerance.
inline bool approx_equal(const FockState& a, const FockState& b, double tol = kTolerance) {
  for (const auto& [occ, amp] : a.terms())
    if (std::abs(amp - b.amplitude(occ)) > tol) return false;
  for (const auto& [occ, amp] : b.terms())
    if (std::abs(amp - a.amplitude(occ)) > tol) return false;
  return true;
}

/// Builds Π_i (Σ_k c_ik a†_{w_ik}) |vac⟩ from a list of creation polynomials.
inline FockState product_of_creations(
    const std::vector<std::vector<std::pair<WireId, Amplitude>>>& factors,
    Amplitude prefactor = 1.0) {
  FockState s = FockState::vacuum().scaled(prefactor);
  for (const auto& factor : factors) {
    FockState next;
    for (const auto& [w, c] : factor) next = add_scaled(next, c, create(s, w));
    s = std::move(next);
  }
  return s;
}

}  // namespace sculpt
