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

#include <numbers>
#include <span>

#include "lopsim/fock.hpp"

namespace lopsim {

enum class PolSelect { H, V, Both };

/// Linear optical element as a 2M x 2M unitary on creation operators.
///
/// Row/column order is (H of mode 0, V of mode 0, H of mode 1, ...).
/// Column k holds the image of operator k: c_k^dag -> sum_l U[l][k] c_l^dag,
/// so "apply U then W" composes as the matrix product W * U.
class ModeUnitary {
 public:
  explicit ModeUnitary(std::size_t mode_count)
      : mode_count_(mode_count), m_(4 * mode_count * mode_count) {}

  static ModeUnitary identity(std::size_t mode_count) {
    ModeUnitary u(mode_count);
    for (std::size_t i = 0; i < u.dim(); ++i) u.at(i, i) = 1.0;
    return u;
  }

  std::size_t mode_count() const { return mode_count_; }
  std::size_t dim() const { return 2 * mode_count_; }

  complex& at(std::size_t row, std::size_t col) { return m_[row * dim() + col]; }
  const complex& at(std::size_t row, std::size_t col) const {
    return m_[row * dim() + col];
  }

  static std::size_t op_index(std::size_t mode, Pol p) {
    return 2 * mode + (p == Pol::V ? 1 : 0);
  }

  ModeUnitary adjoint() const {
    ModeUnitary u(mode_count_);
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = 0; c < dim(); ++c) u.at(c, r) = std::conj(at(r, c));
    return u;
  }

  bool is_unitary(double tol = kNormTol) const {
    const ModeUnitary p = adjoint() * (*this);
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = 0; c < dim(); ++c) {
        const complex expect = (r == c) ? complex{1.0, 0.0} : complex{0.0, 0.0};
        if (std::abs(p.at(r, c) - expect) > tol) return false;
      }
    return true;
  }

  friend ModeUnitary operator*(const ModeUnitary& a, const ModeUnitary& b) {
    if (a.dim() != b.dim())
      throw std::invalid_argument("ModeUnitary multiply: dimension mismatch");
    ModeUnitary out(a.mode_count_);
    for (std::size_t r = 0; r < a.dim(); ++r)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const complex arc = a.at(r, k);
        if (arc == complex{0.0, 0.0}) continue;
        for (std::size_t c = 0; c < a.dim(); ++c) out.at(r, c) += arc * b.at(k, c);
      }
    return out;
  }

 private:
  std::size_t mode_count_;
  std::vector<complex> m_;
};

/// Discrete Fourier transform over an explicit list of modes, identical on the
/// H and V blocks. fourier_on({m_0..m_n}): operator of the k-th listed mode
/// maps to sum_l w^{kl}/sqrt(n+1) times the l-th listed mode, w = e^{i2pi/(n+1)}.
inline ModeUnitary fourier_on(const std::vector<std::size_t>& modes,
                              std::size_t total_modes) {
  const std::size_t m = modes.size();
  if (m < 2) throw std::invalid_argument("fourier_on: need at least two modes");
  ModeUnitary u = ModeUnitary::identity(total_modes);
  const double inv = 1.0 / std::sqrt(double(m));
  for (std::size_t i : modes) {
    for (Pol p : {Pol::H, Pol::V}) {
      const std::size_t d = ModeUnitary::op_index(i, p);
      u.at(d, d) = 0.0;
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      const double phase = 2.0 * std::numbers::pi * double(k) * double(l) / double(m);
      const complex entry = std::polar(inv, phase);
      for (Pol p : {Pol::H, Pol::V})
        u.at(ModeUnitary::op_index(modes[l], p), ModeUnitary::op_index(modes[k], p)) =
            entry;
    }
  }
  return u;
}

/// Fourier transform over modes 0..n of a device with total_modes path modes.
inline ModeUnitary fourier(std::size_t n, std::size_t total_modes = 0) {
  if (n < 1) throw std::invalid_argument("fourier: n must be >= 1");
  if (total_modes == 0) total_modes = n + 1;
  std::vector<std::size_t> modes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) modes[i] = i;
  return fourier_on(modes, total_modes);
}

/// Non-polarizing beam splitter: rotation [cos, sin; -sin, cos] between two
/// modes, applied to both polarization blocks.
inline ModeUnitary beam_splitter(double theta, std::size_t mode_a,
                                 std::size_t mode_b, std::size_t total_modes) {
  if (mode_a == mode_b)
    throw std::invalid_argument("beam_splitter: modes must differ");
  ModeUnitary u = ModeUnitary::identity(total_modes);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (Pol p : {Pol::H, Pol::V}) {
    const std::size_t ia = ModeUnitary::op_index(mode_a, p);
    const std::size_t ib = ModeUnitary::op_index(mode_b, p);
    u.at(ia, ia) = c;
    u.at(ia, ib) = s;
    u.at(ib, ia) = -s;
    u.at(ib, ib) = c;
  }
  return u;
}

/// Phase shifter e^{i phi} on the selected polarization rows of one mode.
inline ModeUnitary phase_shifter(double phi, std::size_t mode, PolSelect sel,
                                 std::size_t total_modes) {
  if (mode >= total_modes)
    throw std::invalid_argument("phase_shifter: mode index out of range");
  ModeUnitary u = ModeUnitary::identity(total_modes);
  const complex e = std::polar(1.0, phi);
  if (sel == PolSelect::H || sel == PolSelect::Both) {
    const std::size_t i = ModeUnitary::op_index(mode, Pol::H);
    u.at(i, i) = e;
  }
  if (sel == PolSelect::V || sel == PolSelect::Both) {
    const std::size_t i = ModeUnitary::op_index(mode, Pol::V);
    u.at(i, i) = e;
  }
  return u;
}

/// Polarization rotator on one mode: |H> -> cos|H> + sin|V>, |V> -> -sin|H> + cos|V>.
inline ModeUnitary polarization_rotator(double theta, std::size_t mode,
                                        std::size_t total_modes) {
  if (mode >= total_modes)
    throw std::invalid_argument("polarization_rotator: mode index out of range");
  ModeUnitary u = ModeUnitary::identity(total_modes);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::size_t ih = ModeUnitary::op_index(mode, Pol::H);
  const std::size_t iv = ModeUnitary::op_index(mode, Pol::V);
  u.at(ih, ih) = c;
  u.at(ih, iv) = -s;
  u.at(iv, ih) = s;
  u.at(iv, iv) = c;
  return u;
}

/// Polarizing beam splitter: H components transmit, V components swap modes.
inline ModeUnitary polarizing_beam_splitter(std::size_t mode_a, std::size_t mode_b,
                                            std::size_t total_modes) {
  if (mode_a == mode_b)
    throw std::invalid_argument("polarizing_beam_splitter: modes must differ");
  ModeUnitary u = ModeUnitary::identity(total_modes);
  const std::size_t va = ModeUnitary::op_index(mode_a, Pol::V);
  const std::size_t vb = ModeUnitary::op_index(mode_b, Pol::V);
  u.at(va, va) = 0.0;
  u.at(vb, vb) = 0.0;
  u.at(va, vb) = 1.0;
  u.at(vb, va) = 1.0;
  return u;
}

/// Homomorphic action of a mode unitary on a Fock state.
///
/// Each basis monomial is expanded photon by photon through the operator
/// substitution c_k^dag -> sum_l U[l][k] c_l^dag, with the sqrt(n!) basis
/// normalization restored at the end. Exact up to floating point.
inline FockState apply(const FockState& s, const ModeUnitary& u) {
  if (u.dim() != 2 * s.mode_count())
    throw std::invalid_argument("apply: unitary dimension does not match state");
  const std::size_t dim = u.dim();

  // Column nonzeros: images of each creation operator.
  std::vector<std::vector<std::pair<std::size_t, complex>>> col(dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (std::abs(u.at(r, c)) > 0.0) col[c].emplace_back(r, u.at(r, c));

  using Map = std::unordered_map<OccupationKey, complex, OccupationKeyHash>;
  FockState out(s.mode_count());
  Map mono, next;
  for (const auto& [key, amp] : s.terms()) {
    mono.clear();
    mono.emplace(OccupationKey(s.mode_count()),
                 amp / detail::sqrt_occupation_factorial(key));
    for (std::size_t m = 0; m < key.size(); ++m) {
      for (Pol p : {Pol::H, Pol::V}) {
        const int count = (p == Pol::H) ? key[m].h : key[m].v;
        const auto& images = col[ModeUnitary::op_index(m, p)];
        for (int rep = 0; rep < count; ++rep) {
          next.clear();
          for (const auto& [k, coeff] : mono) {
            for (const auto& [row, entry] : images) {
              OccupationKey nk = k;
              const std::size_t tm = row / 2;
              if (row % 2 == 0)
                nk[tm].h = static_cast<std::uint8_t>(nk[tm].h + 1);
              else
                nk[tm].v = static_cast<std::uint8_t>(nk[tm].v + 1);
              auto [it, inserted] = next.try_emplace(std::move(nk), coeff * entry);
              if (!inserted) it->second += coeff * entry;
            }
          }
          mono.swap(next);
        }
      }
    }
    for (const auto& [k, coeff] : mono)
      out.add_term(k, coeff * detail::sqrt_occupation_factorial(k));
  }
  out.prune();
  return out;
}

}  // namespace lopsim
