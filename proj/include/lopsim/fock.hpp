/**
 * Copyright 2026 The lopsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace lopsim {

using complex = std::complex<double>;

/// Amplitudes below this magnitude are dropped when a state is pruned.
inline constexpr double kPruneEps = 1e-15;
/// Tolerance for normalization checks.
inline constexpr double kNormTol = 1e-10;
/// General comparison tolerance for exact-arithmetic quantities.
inline constexpr double kCompareTol = 1e-10;

enum class Pol : std::uint8_t { H = 0, V = 1 };

/// Photon occupation of a single path mode, split by polarization.
struct ModeOcc {
  std::uint8_t h = 0;
  std::uint8_t v = 0;

  friend auto operator<=>(const ModeOcc&, const ModeOcc&) = default;
  int total() const { return int(h) + int(v); }
};

/// Canonical basis label: one ModeOcc per path mode.
using OccupationKey = std::vector<ModeOcc>;

struct OccupationKeyHash {
  std::size_t operator()(const OccupationKey& key) const {
    // FNV-1a over the packed (h,v) bytes.
    std::size_t h = 1469598103934665603ull;
    for (const ModeOcc& m : key) {
      h = (h ^ m.h) * 1099511628211ull;
      h = (h ^ m.v) * 1099511628211ull;
    }
    return h;
  }
};

inline int total_photons(const OccupationKey& key) {
  int n = 0;
  for (const ModeOcc& m : key) n += m.total();
  return n;
}

inline int photons_of(const OccupationKey& key, Pol p) {
  int n = 0;
  for (const ModeOcc& m : key) n += (p == Pol::H) ? m.h : m.v;
  return n;
}

namespace detail {

inline double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(32, 1.0);
    for (int i = 1; i < 32; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

/// sqrt(prod_m h_m! v_m!) -- normalization of the Fock basis monomial.
inline double sqrt_occupation_factorial(const OccupationKey& key) {
  double f = 1.0;
  for (const ModeOcc& m : key) f *= factorial(m.h) * factorial(m.v);
  return std::sqrt(f);
}

}  // namespace detail

/// Sparse multimode dual-polarization bosonic state.
///
/// Immutable by convention once built: every operation returns a new state.
class FockState {
 public:
  using TermMap = std::unordered_map<OccupationKey, complex, OccupationKeyHash>;

  explicit FockState(std::size_t mode_count) : mode_count_(mode_count) {}

  std::size_t mode_count() const { return mode_count_; }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  void add_term(const OccupationKey& key, complex amp) {
    if (key.size() != mode_count_)
      throw std::invalid_argument("FockState::add_term: key has wrong mode count");
    auto [it, inserted] = terms_.try_emplace(key, amp);
    if (!inserted) it->second += amp;
  }

  complex amplitude(const OccupationKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? complex{0.0, 0.0} : it->second;
  }

  void prune(double eps = kPruneEps) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) < eps)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [key, amp] : terms_) s += std::norm(amp);
    return s;
  }

  bool is_normalized(double tol = kNormTol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  FockState normalized() const {
    const double n2 = norm_squared();
    if (n2 <= 0.0)
      throw std::invalid_argument("FockState::normalized: zero state");
    FockState out(mode_count_);
    const double inv = 1.0 / std::sqrt(n2);
    for (const auto& [key, amp] : terms_) out.terms_.emplace(key, amp * inv);
    return out;
  }

  FockState scaled(complex factor) const {
    FockState out(mode_count_);
    for (const auto& [key, amp] : terms_) out.terms_.emplace(key, amp * factor);
    return out;
  }

  /// Terms sorted by canonical key order, for deterministic output.
  std::vector<std::pair<OccupationKey, complex>> sorted_terms() const {
    std::vector<std::pair<OccupationKey, complex>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      const OccupationKey& ka = a.first;
      const OccupationKey& kb = b.first;
      for (std::size_t i = 0; i < ka.size(); ++i) {
        if (ka[i].h != kb[i].h) return ka[i].h < kb[i].h;
        if (ka[i].v != kb[i].v) return ka[i].v < kb[i].v;
      }
      return false;
    });
    return v;
  }

 private:
  std::size_t mode_count_;
  TermMap terms_;
};

/// Single-photon polarization qubit amplitudes, |alpha|^2+|beta|^2 = 1.
struct InputQubit {
  complex alpha;
  complex beta;

  InputQubit(complex a, complex b) : alpha(a), beta(b) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTol)
      throw std::invalid_argument("InputQubit: amplitudes are not normalized");
  }
};

inline FockState vacuum(std::size_t mode_count) {
  if (mode_count == 0)
    throw std::invalid_argument("vacuum: mode_count must be >= 1");
  FockState s(mode_count);
  s.add_term(OccupationKey(mode_count), complex{1.0, 0.0});
  return s;
}

inline FockState apply_creation(const FockState& s, std::size_t mode, Pol p) {
  if (mode >= s.mode_count())
    throw std::invalid_argument("apply_creation: mode index out of range");
  FockState out(s.mode_count());
  for (const auto& [key, amp] : s.terms()) {
    OccupationKey k = key;
    std::uint8_t& c = (p == Pol::H) ? k[mode].h : k[mode].v;
    c = static_cast<std::uint8_t>(c + 1);
    out.add_term(k, amp * std::sqrt(double(c)));
  }
  return out;
}

inline FockState tensor(const FockState& a, const FockState& b) {
  FockState out(a.mode_count() + b.mode_count());
  for (const auto& [ka, aa] : a.terms()) {
    for (const auto& [kb, ab] : b.terms()) {
      OccupationKey k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      out.add_term(k, aa * ab);
    }
  }
  out.prune();
  return out;
}

inline complex inner_product(const FockState& a, const FockState& b) {
  if (a.mode_count() != b.mode_count())
    throw std::invalid_argument("inner_product: mode counts differ");
  // Iterate the smaller map.
  const FockState& small = a.term_count() <= b.term_count() ? a : b;
  const FockState& large = a.term_count() <= b.term_count() ? b : a;
  const bool swapped = &small == &b;
  complex s{0.0, 0.0};
  for (const auto& [key, amp] : small.terms()) {
    const complex other = large.amplitude(key);
    if (!swapped)
      s += std::conj(amp) * other;  // small == a
    else
      s += std::conj(other) * amp;  // small == b
  }
  return s;
}

inline double fidelity(const FockState& a, const FockState& b) {
  if (!a.is_normalized() || !b.is_normalized())
    throw std::invalid_argument("fidelity: inputs must be normalized");
  return std::norm(inner_product(a, b));
}

/// Single-mode polarization qubit state alpha|H> + beta|V>.
inline FockState polarization_qubit_state(const InputQubit& q) {
  FockState s(1);
  s.add_term({ModeOcc{1, 0}}, q.alpha);
  s.add_term({ModeOcc{0, 1}}, q.beta);
  s.prune();
  return s;
}

/// Single-rail (dual-rail half) qubit state alpha|0> + beta|1>, photon in the H slot.
inline FockState single_rail_qubit_state(const InputQubit& q) {
  FockState s(1);
  s.add_term({ModeOcc{0, 0}}, q.alpha);
  s.add_term({ModeOcc{1, 0}}, q.beta);
  s.prune();
  return s;
}

}  // namespace lopsim
