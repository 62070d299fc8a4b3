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

#include <array>
#include <numbers>
#include <optional>

#include "lopsim/measurement.hpp"
#include "lopsim/optics.hpp"

namespace lopsim {

enum class Encoding { DualRailKlm, Polarization };

inline const char* encoding_name(Encoding e) {
  return e == Encoding::DualRailKlm ? "klm" : "pol";
}

struct AncillaSpec {
  int n = 1;
  Encoding encoding = Encoding::Polarization;
};

/// Fast path for phase shifters: multiplies each term by
/// e^{i phi * count} with count the photons of the selected polarizations
/// in one mode. Identical to apply(s, phase_shifter(...)).
inline FockState apply_count_phase(const FockState& s, std::size_t mode, double phi,
                                   PolSelect sel) {
  FockState out(s.mode_count());
  for (const auto& [k, a] : s.terms()) {
    int c = 0;
    if (sel == PolSelect::V || sel == PolSelect::Both) c += k[mode].v;
    if (sel == PolSelect::H || sel == PolSelect::Both) c += k[mode].h;
    out.add_term(k, a * std::polar(1.0, phi * double(c)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Teleporting-state builders
// ---------------------------------------------------------------------------

/// Polarization teleporting ancilla over 2n modes:
/// (1/sqrt(n+1)) sum_j |V>^j |H>^{n-j} |H>^j |V>^{n-j}, one photon per mode.
inline FockState build_t_n(int n) {
  if (n < 1) throw std::invalid_argument("build_t_n: n must be >= 1");
  FockState s(std::size_t(2 * n));
  const double amp = 1.0 / std::sqrt(double(n + 1));
  for (int j = 0; j <= n; ++j) {
    OccupationKey k(std::size_t(2 * n));
    for (int m = 0; m < n; ++m) {
      if (m < j)
        k[std::size_t(m)].v = 1;
      else
        k[std::size_t(m)].h = 1;
      if (m < j)
        k[std::size_t(n + m)].h = 1;
      else
        k[std::size_t(n + m)].v = 1;
    }
    s.add_term(k, complex{amp, 0.0});
  }
  return s;
}

/// Dual-rail teleporting ancilla over 2n single-rail modes:
/// (1/sqrt(n+1)) sum_j |1>^j |0>^{n-j} |0>^j |1>^{n-j}, n photons total,
/// carried in the H slots.
inline FockState build_t_n_klm(int n) {
  if (n < 1) throw std::invalid_argument("build_t_n_klm: n must be >= 1");
  FockState s(std::size_t(2 * n));
  const double amp = 1.0 / std::sqrt(double(n + 1));
  for (int j = 0; j <= n; ++j) {
    OccupationKey k(std::size_t(2 * n));
    for (int m = 0; m < n; ++m) {
      if (m < j) k[std::size_t(m)].h = 1;
      if (m >= j) k[std::size_t(n + m)].h = 1;
    }
    s.add_term(k, complex{amp, 0.0});
  }
  return s;
}

/// Gate-teleportation ancilla over 4n modes: two copies of the teleporting
/// state with sign (-1)^{(n-j)(n-i)}, i.e. CSIGN applied across the copies.
inline FockState build_t_prime_n(int n, Encoding enc) {
  if (n < 1) throw std::invalid_argument("build_t_prime_n: n must be >= 1");
  FockState s(std::size_t(4 * n));
  const double amp = 1.0 / double(n + 1);
  auto fill_copy = [&](OccupationKey& k, int base, int j) {
    for (int m = 0; m < n; ++m) {
      auto& front = k[std::size_t(base + m)];
      auto& back = k[std::size_t(base + n + m)];
      if (enc == Encoding::Polarization) {
        if (m < j)
          front.v = 1;
        else
          front.h = 1;
        if (m < j)
          back.h = 1;
        else
          back.v = 1;
      } else {
        if (m < j) front.h = 1;
        if (m >= j) back.h = 1;
      }
    }
  };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      OccupationKey k(std::size_t(4 * n));
      fill_copy(k, 0, j);
      fill_copy(k, 2 * n, i);
      const double sign = ((n - j) * (n - i)) % 2 == 0 ? 1.0 : -1.0;
      s.add_term(k, complex{sign * amp, 0.0});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Near-deterministic teleportation
// ---------------------------------------------------------------------------

enum class TeleportStatus { Success, FailureAllV, FailureAllH, LossDetected };

inline const char* teleport_status_name(TeleportStatus s) {
  switch (s) {
    case TeleportStatus::Success: return "success";
    case TeleportStatus::FailureAllV: return "failure_all_v";
    case TeleportStatus::FailureAllH: return "failure_all_h";
    case TeleportStatus::LossDetected: return "loss_detected";
  }
  return "?";
}

/// Dephasing exponent sum_j j * (r_j + h_j) mod (number of measured modes),
/// evaluated on the reported record.
inline int correction_exponent(const DetectionPattern& pattern) {
  const int modulus = int(pattern.mode_count());
  long long m = 0;
  for (std::size_t j = 0; j < pattern.mode_count(); ++j)
    m += (long long)(j) * pattern.mode_total(j);
  return int(m % modulus);
}

/// Classify a reported record of the n+1 teleporter detectors.
/// k_out receives the selected ancilla output index (1..n) on success.
inline TeleportStatus classify_teleport(const DetectionPattern& reported, int n,
                                        Encoding enc, int& k_out) {
  k_out = 0;
  if (enc == Encoding::Polarization) {
    if (reported.total() != n + 1) return TeleportStatus::LossDetected;
    const int k = reported.v_total();
    if (k == 0) return TeleportStatus::FailureAllH;
    if (k == n + 1) return TeleportStatus::FailureAllV;
    k_out = k;
    return TeleportStatus::Success;
  }
  const int k = reported.total();
  if (k == 0) return TeleportStatus::FailureAllH;
  if (k == n + 1) return TeleportStatus::FailureAllV;
  if (k > n + 1) return TeleportStatus::LossDetected;  // more counts than modes
  k_out = k;
  return TeleportStatus::Success;
}

struct TeleportBranch {
  DetectionPattern true_pattern;
  DetectionPattern reported_pattern;
  double probability = 0.0;
  TeleportStatus status = TeleportStatus::LossDetected;
  int selected_mode = 0;       // k', 1..n, valid on Success
  int correction_exponent = 0; // mod n+1, from the reported record
  /// True conditional state of the n ancilla output modes; on Success the
  /// reported phase correction has been applied to the selected mode.
  FockState output_state{0};
};

struct TeleportResult {
  std::vector<TeleportBranch> branches;
  double truncation_bound = 0.0;
};

/// Joint state |psi>|t_n> of 2n+1 modes for one teleportation.
inline FockState teleport_joint_state(const InputQubit& q, int n, Encoding enc) {
  if (enc == Encoding::Polarization)
    return tensor(polarization_qubit_state(q), build_t_n(n));
  return tensor(single_rail_qubit_state(q), build_t_n_klm(n));
}

/// Full teleportation: Fourier over modes 0..n, photodetection of those
/// modes, classification and phase correction. Exact enumeration over both
/// the true measurement record and the detector-reported record.
inline TeleportResult teleport(const InputQubit& q, int n, Encoding enc,
                               const DetectorModel& detector = DetectorModel{},
                               double prune_eps = 1e-16) {
  if (n < 1) throw std::invalid_argument("teleport: n must be >= 1");
  const bool resolved = (enc == Encoding::Polarization);
  const FockState after =
      apply(teleport_joint_state(q, n, enc), fourier(std::size_t(n), std::size_t(2 * n + 1)));

  std::vector<std::size_t> measured(std::size_t(n + 1));
  for (int i = 0; i <= n; ++i) measured[std::size_t(i)] = std::size_t(i);
  const auto true_branches = enumerate_outcomes(after, measured, resolved);

  TeleportResult result;
  const double pi2 = 2.0 * std::numbers::pi;
  for (const auto& tb : true_branches) {
    const double eps = tb.probability > 0.0 ? prune_eps / tb.probability : prune_eps;
    const auto reported = reported_distribution(tb.pattern, detector, eps);
    result.truncation_bound += tb.probability * reported.dropped_mass;
    for (const auto& rb : reported.branches) {
      TeleportBranch out;
      out.true_pattern = tb.pattern;
      out.reported_pattern = rb.pattern;
      out.probability = tb.probability * rb.probability;
      out.status = classify_teleport(rb.pattern, n, enc, out.selected_mode);
      if (out.status == TeleportStatus::Success) {
        out.correction_exponent = correction_exponent(rb.pattern);
        const std::size_t mode = std::size_t(out.selected_mode - 1);
        const double phi = pi2 * double(out.correction_exponent) / double(n + 1);
        const PolSelect sel =
            (enc == Encoding::Polarization) ? PolSelect::V : PolSelect::Both;
        out.output_state = apply_count_phase(tb.conditional_state, mode, phi, sel);
      } else {
        out.output_state = tb.conditional_state;
      }
      result.branches.push_back(std::move(out));
    }
  }
  return result;
}

/// Reference output after a success reported as k': the teleported qubit in
/// output slot k'-1, the other output modes in their heralded states.
inline FockState teleport_success_reference(const InputQubit& q, int n, int k,
                                            Encoding enc) {
  if (k < 1 || k > n)
    throw std::invalid_argument("teleport_success_reference: bad output index");
  FockState s{std::size_t(n)};
  OccupationKey base(std::size_t(n), ModeOcc{});
  for (int m = 0; m < n; ++m) {
    if (m == k - 1) continue;
    if (enc == Encoding::Polarization) {
      if (m < k - 1)
        base[std::size_t(m)].h = 1;
      else
        base[std::size_t(m)].v = 1;
    } else {
      if (m >= k) base[std::size_t(m)].h = 1;
    }
  }
  OccupationKey kh = base, kv = base;
  if (enc == Encoding::Polarization) {
    kh[std::size_t(k - 1)].h = 1;
    kv[std::size_t(k - 1)].v = 1;
  } else {
    kv[std::size_t(k - 1)].h = 1;  // |1> component; |0> leaves the slot empty
  }
  s.add_term(kh, q.alpha);
  s.add_term(kv, q.beta);
  s.prune();
  return s;
}

// ---------------------------------------------------------------------------
// CSIGN via double teleportation
// ---------------------------------------------------------------------------

struct CsignBranch {
  DetectionPattern true_a, true_b;
  DetectionPattern reported_a, reported_b;
  double probability = 0.0;
  TeleportStatus status_a = TeleportStatus::LossDetected;
  TeleportStatus status_b = TeleportStatus::LossDetected;
  int k_a = 0, k_b = 0;
  int exponent_a = 0, exponent_b = 0;
  bool success() const {
    return status_a == TeleportStatus::Success && status_b == TeleportStatus::Success;
  }
  /// Conditional state of the 2n unmeasured ancilla output modes
  /// (copy-1 outputs first); corrections applied on double success.
  FockState output_state{0};
};

namespace detail {

inline DetectionPattern slice_pattern(const DetectionPattern& p,
                                      const std::vector<std::size_t>& positions) {
  DetectionPattern out;
  out.polarization_resolved = p.polarization_resolved;
  for (std::size_t j : positions) {
    if (p.polarization_resolved) {
      out.counts.push_back(p.counts[2 * j]);
      out.counts.push_back(p.counts[2 * j + 1]);
    } else {
      out.counts.push_back(p.counts[j]);
    }
  }
  return out;
}

}  // namespace detail

/// CSIGN on a two-mode input state by teleporting both modes through
/// |t'_n>. The input carries qubit A in mode 0 and qubit B in mode 1.
inline std::vector<CsignBranch> csign(const FockState& input, int n, Encoding enc,
                                      const DetectorModel& detector = DetectorModel{},
                                      double prune_eps = 1e-16) {
  if (n < 1) throw std::invalid_argument("csign: n must be >= 1");
  if (input.mode_count() != 2)
    throw std::invalid_argument("csign: input must be a two-mode state");
  const bool resolved = (enc == Encoding::Polarization);
  const std::size_t total = std::size_t(4 * n + 2);

  FockState joint = tensor(input, build_t_prime_n(n, enc));

  std::vector<std::size_t> fa{0}, fb{1};
  for (int i = 0; i < n; ++i) {
    fa.push_back(std::size_t(2 + i));
    fb.push_back(std::size_t(2 * n + 2 + i));
  }
  joint = apply(joint, fourier_on(fb, total) * fourier_on(fa, total));

  std::vector<std::size_t> measured = fa;
  measured.insert(measured.end(), fb.begin(), fb.end());
  std::sort(measured.begin(), measured.end());
  // Positions of the teleporter detectors inside the sorted measured list.
  std::vector<std::size_t> pos_a{0}, pos_b{1};
  for (int j = 1; j <= n; ++j) {
    pos_a.push_back(std::size_t(1 + j));
    pos_b.push_back(std::size_t(n + 1 + j));
  }

  const auto true_branches = enumerate_outcomes(joint, measured, resolved);
  const double pi2 = 2.0 * std::numbers::pi;
  const PolSelect sel = resolved ? PolSelect::V : PolSelect::Both;

  std::vector<CsignBranch> out;
  for (const auto& tb : true_branches) {
    const double eps = tb.probability > 0.0 ? prune_eps / tb.probability : prune_eps;
    const auto reported = reported_distribution(tb.pattern, detector, eps);
    for (const auto& rb : reported.branches) {
      CsignBranch b;
      b.true_a = detail::slice_pattern(tb.pattern, pos_a);
      b.true_b = detail::slice_pattern(tb.pattern, pos_b);
      b.reported_a = detail::slice_pattern(rb.pattern, pos_a);
      b.reported_b = detail::slice_pattern(rb.pattern, pos_b);
      b.probability = tb.probability * rb.probability;
      b.status_a = classify_teleport(b.reported_a, n, enc, b.k_a);
      b.status_b = classify_teleport(b.reported_b, n, enc, b.k_b);
      if (b.success()) {
        b.exponent_a = correction_exponent(b.reported_a);
        b.exponent_b = correction_exponent(b.reported_b);
        // Beyond the per-teleporter dephasing corrections, the ancilla sign
        // structure leaves local Z factors that depend on the partner's
        // selected slot: Z^{n-k_b} on output A and Z^{n-k_a} on output B.
        const double za = pi2 * b.exponent_a / double(n + 1) +
                          std::numbers::pi * double(n - b.k_b);
        const double zb = pi2 * b.exponent_b / double(n + 1) +
                          std::numbers::pi * double(n - b.k_a);
        FockState s =
            apply_count_phase(tb.conditional_state, std::size_t(b.k_a - 1), za, sel);
        b.output_state =
            apply_count_phase(s, std::size_t(n + b.k_b - 1), zb, sel);
      } else {
        b.output_state = tb.conditional_state;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimal CSIGN setup: |t'_1> ancilla and two balanced beam splitters
// ---------------------------------------------------------------------------

/// Minimal four-photon CSIGN. Input qubits A, B in modes 0, 1; ancilla |t'_1>
/// occupies modes 2..5 (its modes 1..4). A mixes with ancilla mode 1 and B
/// with ancilla mode 4; modes 2 and 3 of the ancilla carry the output.
/// With number_resolving = false, classification uses only click/no-click
/// per detector (a click is a reported count >= 1).
inline std::vector<CsignBranch> csign_minimal(
    const FockState& input, const FockState& ancilla,
    const DetectorModel& detector = DetectorModel{}, bool number_resolving = true,
    double prune_eps = 1e-16) {
  if (input.mode_count() != 2)
    throw std::invalid_argument("csign_minimal: input must be a two-mode state");
  if (ancilla.mode_count() != 4)
    throw std::invalid_argument("csign_minimal: ancilla must be a four-mode state");

  FockState joint = tensor(input, ancilla);
  joint = apply(joint, fourier_on({1, 5}, 6) * fourier_on({0, 2}, 6));

  // Measured modes sorted: 0,1,2,5. Teleporter A detectors at j=0 -> mode 0,
  // j=1 -> mode 2; teleporter B at j=0 -> mode 1, j=1 -> mode 5.
  const std::vector<std::size_t> pos_a{0, 2}, pos_b{1, 3};
  const auto true_branches = enumerate_outcomes(joint, {0, 1, 2, 5}, true);

  auto clicks = [](const DetectionPattern& p) {
    DetectionPattern c = p;
    for (int& x : c.counts) x = x > 0 ? 1 : 0;
    return c;
  };
  auto classify_clicks = [](const DetectionPattern& c, int& k_out) {
    // Success iff exactly one V detector and one H detector fired.
    int v = 0, h = 0;
    for (std::size_t j = 0; j < c.mode_count(); ++j) {
      h += c.counts[2 * j];
      v += c.counts[2 * j + 1];
    }
    k_out = 0;
    if (v == 1 && h == 1) {
      k_out = 1;
      return TeleportStatus::Success;
    }
    if (v + h != 2) return TeleportStatus::LossDetected;
    return v == 2 ? TeleportStatus::FailureAllV : TeleportStatus::FailureAllH;
  };

  std::vector<CsignBranch> out;
  for (const auto& tb : true_branches) {
    const double eps = tb.probability > 0.0 ? prune_eps / tb.probability : prune_eps;
    const auto reported = reported_distribution(tb.pattern, detector, eps);
    for (const auto& rb : reported.branches) {
      CsignBranch b;
      b.true_a = detail::slice_pattern(tb.pattern, pos_a);
      b.true_b = detail::slice_pattern(tb.pattern, pos_b);
      b.reported_a = detail::slice_pattern(rb.pattern, pos_a);
      b.reported_b = detail::slice_pattern(rb.pattern, pos_b);
      b.probability = tb.probability * rb.probability;
      if (number_resolving) {
        b.status_a = classify_teleport(b.reported_a, 1, Encoding::Polarization, b.k_a);
        b.status_b = classify_teleport(b.reported_b, 1, Encoding::Polarization, b.k_b);
      } else {
        b.reported_a = clicks(b.reported_a);
        b.reported_b = clicks(b.reported_b);
        b.status_a = classify_clicks(b.reported_a, b.k_a);
        b.status_b = classify_clicks(b.reported_b, b.k_b);
      }
      if (b.success()) {
        b.exponent_a = correction_exponent(b.reported_a);
        b.exponent_b = correction_exponent(b.reported_b);
        // omega = -1 at n = 1; outputs are fixed at positions 0 (mode 3) and
        // 1 (mode 4). Because B mixes with the far ancilla mode, its logical
        // orientation is reversed relative to the ancilla sign structure,
        // which leaves a constant Z on output A.
        FockState s = apply_count_phase(tb.conditional_state, 0,
                                        std::numbers::pi * (b.exponent_a + 1),
                                        PolSelect::V);
        b.output_state = apply_count_phase(s, 1, std::numbers::pi * b.exponent_b,
                                           PolSelect::V);
      } else {
        b.output_state = tb.conditional_state;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HV beam splitter as a two-qubit circuit
// ---------------------------------------------------------------------------

using TwoQubitMatrix = std::array<std::array<complex, 4>, 4>;
using OneQubitMatrix = std::array<std::array<complex, 2>, 2>;

/// The entangling polarization beam-splitter unitary in basis {HH,HV,VH,VV}.
inline TwoQubitMatrix hv_beam_splitter_matrix(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  TwoQubitMatrix m{};
  m[0][0] = complex{1, 0};
  m[1][1] = complex{c, 0};
  m[1][2] = complex{s, 0};
  m[2][1] = complex{-s, 0};
  m[2][2] = complex{c, 0};
  m[3][3] = complex{1, 0};
  return m;
}

struct CircuitOp {
  enum Kind { SingleQubit0, SingleQubit1, Csign } kind;
  OneQubitMatrix u{};  // used for the single-qubit kinds
};

/// Decomposition of hv_beam_splitter_matrix(theta) into single-qubit
/// rotations and CSIGN gates, applied left to right.
inline std::vector<CircuitOp> hv_beam_splitter_circuit(double theta) {
  const complex is2{1.0 / std::sqrt(2.0), 0.0};
  const OneQubitMatrix hadamard{{{is2, is2}, {is2, -is2}}};
  auto ry = [](double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    return OneQubitMatrix{{{complex{c, 0}, complex{-s, 0}},
                           {complex{s, 0}, complex{c, 0}}}};
  };
  // M(theta) = CNOT10 . CRy(2 theta) . CNOT10 with
  // CRy(phi) = (I x Ry(phi/2)) CNOT01 (I x Ry(-phi/2)) CNOT01 and each CNOT
  // expanded through Hadamards around a CSIGN.
  std::vector<CircuitOp> ops;
  auto cnot01 = [&] {  // control qubit 0, target qubit 1
    ops.push_back({CircuitOp::SingleQubit1, hadamard});
    ops.push_back({CircuitOp::Csign, {}});
    ops.push_back({CircuitOp::SingleQubit1, hadamard});
  };
  auto cnot10 = [&] {  // control qubit 1, target qubit 0
    ops.push_back({CircuitOp::SingleQubit0, hadamard});
    ops.push_back({CircuitOp::Csign, {}});
    ops.push_back({CircuitOp::SingleQubit0, hadamard});
  };
  cnot10();
  cnot01();
  ops.push_back({CircuitOp::SingleQubit1, ry(-theta)});
  cnot01();
  ops.push_back({CircuitOp::SingleQubit1, ry(theta)});
  cnot10();
  return ops;
}

/// Multiply out a two-qubit circuit (4x4 oracle for the decomposition).
inline TwoQubitMatrix circuit_to_matrix(const std::vector<CircuitOp>& ops) {
  TwoQubitMatrix m{};
  for (int i = 0; i < 4; ++i) m[i][i] = complex{1, 0};
  auto lift = [](const CircuitOp& op) {
    TwoQubitMatrix g{};
    if (op.kind == CircuitOp::Csign) {
      for (int i = 0; i < 4; ++i) g[i][i] = complex{1, 0};
      g[3][3] = complex{-1, 0};
      return g;
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) {
            const complex entry = (op.kind == CircuitOp::SingleQubit0)
                                      ? op.u[a][c] * (b == d ? 1.0 : 0.0)
                                      : (a == c ? 1.0 : 0.0) * op.u[b][d];
            g[2 * a + b][2 * c + d] = entry;
          }
    return g;
  };
  for (const CircuitOp& op : ops) {
    const TwoQubitMatrix g = lift(op);
    TwoQubitMatrix next{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        for (int k = 0; k < 4; ++k) next[r][c] += g[r][k] * m[k][c];
    m = next;
  }
  return m;
}

// ---------------------------------------------------------------------------
// NS gate, encoder and the |t'_1> preparation chains
// ---------------------------------------------------------------------------

/// Ideal post-selected nonlinear sign gate on one single-rail mode:
/// a0|0> + a1|1> + a2|2> -> a0|0> + a1|1> - a2|2>.
inline FockState ns_gate(const FockState& s, std::size_t mode) {
  if (mode >= s.mode_count())
    throw std::invalid_argument("ns_gate: mode index out of range");
  FockState out(s.mode_count());
  for (const auto& [k, a] : s.terms()) {
    const int c = k[mode].total();
    if (c > 2)
      throw std::invalid_argument("ns_gate: support beyond two photons");
    out.add_term(k, c == 2 ? -a : a);
  }
  return out;
}

inline constexpr double kNsGateSuccessProbability = 0.25;
inline constexpr double kEncoderSuccessProbability = 0.5;

struct PreparedState {
  FockState state{0};
  double success_probability = 0.0;
};

/// |t'_1>_KLM from |01>|01> via two beam splitters and a Mach-Zehnder
/// interferometer with an NS gate in each arm.
inline PreparedState build_t_prime_1_klm_via_ns(
    double ns_success = kNsGateSuccessProbability) {
  FockState s = apply_creation(apply_creation(vacuum(4), 1, Pol::H), 3, Pol::H);
  const double q = std::numbers::pi / 4;
  s = apply(s, beam_splitter(q, 2, 3, 4) * beam_splitter(q, 0, 1, 4));
  // Mach-Zehnder across the two rails carrying the CSIGN-coupled amplitudes.
  s = apply(s, beam_splitter(q, 1, 3, 4));
  s = ns_gate(ns_gate(s, 1), 3);
  s = apply(s, beam_splitter(-q, 1, 3, 4));
  return {s, ns_success * ns_success};
}

/// Deterministic dual-rail to polarization conversion on a mode pair:
/// alpha|10> + beta|01> -> alpha|H> + beta|V>, merging the pair into one mode.
inline FockState dual_rail_to_polarization(const FockState& s, std::size_t mode_a,
                                           std::size_t mode_b) {
  if (mode_a >= s.mode_count() || mode_b >= s.mode_count() || mode_a == mode_b)
    throw std::invalid_argument("dual_rail_to_polarization: bad mode pair");
  FockState out(s.mode_count() - 1);
  for (const auto& [k, a] : s.terms()) {
    const ModeOcc oa = k[mode_a], ob = k[mode_b];
    if (oa.v != 0 || ob.v != 0 || oa.h + ob.h != 1)
      throw std::invalid_argument(
          "dual_rail_to_polarization: pair does not carry a dual-rail qubit");
    OccupationKey nk;
    nk.reserve(out.mode_count());
    for (std::size_t m = 0; m < k.size(); ++m) {
      if (m == mode_b) continue;
      if (m == mode_a)
        nk.push_back(oa.h == 1 ? ModeOcc{1, 0} : ModeOcc{0, 1});
      else
        nk.push_back(k[m]);
    }
    out.add_term(nk, a);
  }
  return out;
}

/// Post-selected quantum encoder: alpha|H> + beta|V> -> alpha|VH> + beta|HV>,
/// splitting one polarization qubit mode into two. Success probability 1/2.
inline PreparedState encoder(const FockState& s, std::size_t mode) {
  if (mode >= s.mode_count())
    throw std::invalid_argument("encoder: mode index out of range");
  FockState out(s.mode_count() + 1);
  for (const auto& [k, a] : s.terms()) {
    const ModeOcc o = k[mode];
    if (o.total() != 1)
      throw std::invalid_argument("encoder: mode does not carry one photon");
    OccupationKey nk;
    nk.reserve(out.mode_count());
    for (std::size_t m = 0; m < k.size(); ++m) {
      if (m == mode) {
        if (o.h == 1) {
          nk.push_back(ModeOcc{0, 1});
          nk.push_back(ModeOcc{1, 0});
        } else {
          nk.push_back(ModeOcc{1, 0});
          nk.push_back(ModeOcc{0, 1});
        }
      } else {
        nk.push_back(k[m]);
      }
    }
    out.add_term(nk, a);
  }
  return {out, kEncoderSuccessProbability};
}

/// Full preparation chain for the polarization |t'_1>: NS-based |t'_1>_KLM
/// followed by the dual-rail-to-polarization encoder on both mode pairs.
/// Compound success probability 1/16 * (1/2)^2 = 1/64.
inline PreparedState build_t_prime_1_polarization(
    double ns_success = kNsGateSuccessProbability) {
  PreparedState klm = build_t_prime_1_klm_via_ns(ns_success);
  // Pair (0,1): converts to one polarization mode, then encodes back to two.
  FockState s = dual_rail_to_polarization(klm.state, 0, 1);
  PreparedState e1 = encoder(s, 0);
  s = dual_rail_to_polarization(e1.state, 2, 3);
  PreparedState e2 = encoder(s, 2);
  return {e2.state, klm.success_probability * e1.success_probability *
                        e2.success_probability};
}

// ---------------------------------------------------------------------------
// Bell pairs -> GHZ -> cluster ancilla
// ---------------------------------------------------------------------------

enum class FusionStatus { Success, Abort, RecycleBellPairs };

inline const char* fusion_status_name(FusionStatus s) {
  switch (s) {
    case FusionStatus::Success: return "success";
    case FusionStatus::Abort: return "abort";
    case FusionStatus::RecycleBellPairs: return "recycle";
  }
  return "?";
}

struct FusionBranch {
  OccupationKey measured_occupation;  // resolved record of the measured modes
  std::vector<int> true_counts;       // photons per detector
  std::vector<int> reported_counts;
  double probability = 0.0;
  FusionStatus status = FusionStatus::Abort;
  FockState raw_state{0};        // conditional state before local corrections
  FockState corrected_state{0};  // after the record-conditioned corrections
};

inline FockState bell_pair_phi_plus() {
  FockState s(2);
  const double a = 1.0 / std::sqrt(2.0);
  s.add_term({ModeOcc{1, 0}, ModeOcc{1, 0}}, complex{a, 0.0});
  s.add_term({ModeOcc{0, 1}, ModeOcc{0, 1}}, complex{a, 0.0});
  return s;
}

/// GHZ generation from two Bell pairs. One mode of each pair meets on a
/// polarizing beam splitter; one output is rotated into the diagonal basis
/// and counted. Exactly one photon heralds a three-mode GHZ state on the
/// remaining modes (mode 1 of the output is the error-prone fusion output:
/// an undetected two-photon event leaves it empty).
inline std::vector<FusionBranch> bell_to_ghz(
    const FockState& pair_1, const FockState& pair_2,
    const DetectorModel& detector = DetectorModel{}, double prune_eps = 1e-16) {
  if (pair_1.mode_count() != 2 || pair_2.mode_count() != 2)
    throw std::invalid_argument("bell_to_ghz: inputs must be two-mode states");
  FockState joint = tensor(pair_1, pair_2);
  joint = apply(joint, polarization_rotator(std::numbers::pi / 4, 1, 4) *
                           polarizing_beam_splitter(1, 2, 4));

  std::vector<FusionBranch> out;
  for (const auto& tb : enumerate_outcomes(joint, {1}, false)) {
    const int l = tb.pattern.counts[0];
    const double eps = tb.probability > 0.0 ? prune_eps / tb.probability : prune_eps;
    const auto reported =
        reported_distribution(DetectionPattern{false, {l}}, detector, eps);
    for (const auto& rb : reported.branches) {
      FusionBranch b;
      b.measured_occupation = tb.measured_occupation;
      b.true_counts = {l};
      b.reported_counts = rb.pattern.counts;
      b.probability = tb.probability * rb.probability;
      b.status = (rb.pattern.counts[0] == 1) ? FusionStatus::Success
                                             : FusionStatus::Abort;
      b.raw_state = tb.conditional_state;
      // Measuring H in the rotated basis flips the sign of the |VVV> half;
      // a pi phase on the V slot of the first remaining mode undoes it.
      if (b.status == FusionStatus::Success && l == 1 &&
          tb.measured_occupation[0].h == 1)
        b.corrected_state =
            apply_count_phase(tb.conditional_state, 0, std::numbers::pi, PolSelect::V);
      else
        b.corrected_state = tb.conditional_state;
      out.push_back(std::move(b));
    }
  }
  return out;
}

/// Ideal GHZ target (|HHH> + |VVV>)/sqrt(2).
inline FockState ghz_state() {
  FockState s(3);
  const double a = 1.0 / std::sqrt(2.0);
  s.add_term({ModeOcc{1, 0}, ModeOcc{1, 0}, ModeOcc{1, 0}}, complex{a, 0.0});
  s.add_term({ModeOcc{0, 1}, ModeOcc{0, 1}, ModeOcc{0, 1}}, complex{a, 0.0});
  return s;
}

/// Cluster-ancilla generation from two GHZ states. The error-prone modes
/// (index 1 of each GHZ) pass through diagonal-basis rotators, a polarizing
/// beam splitter and polarization phase shifters, and are counted. One
/// photon per detector heralds the four-photon ancilla; the corrected state
/// equals |t'_1> after the record-conditioned rotators and phase shifters.
/// Two photons in one detector leave a state reusable as two Bell pairs.
inline std::vector<FusionBranch> ghz_to_cluster(
    const FockState& ghz_1, const FockState& ghz_2,
    const DetectorModel& detector = DetectorModel{}, double prune_eps = 1e-16) {
  if (ghz_1.mode_count() != 3 || ghz_2.mode_count() != 3)
    throw std::invalid_argument("ghz_to_cluster: inputs must be three-mode states");
  const double q = std::numbers::pi / 4;
  FockState joint = tensor(ghz_1, ghz_2);
  joint = apply(joint, polarization_rotator(q, 4, 6) * polarization_rotator(q, 1, 6));
  joint = apply(joint, polarizing_beam_splitter(1, 4, 6));
  joint = apply_count_phase(joint, 1, -q, PolSelect::V);
  joint = apply_count_phase(joint, 4, -q, PolSelect::V);
  joint = apply(joint, polarization_rotator(q, 4, 6) * polarization_rotator(q, 1, 6));

  std::vector<FusionBranch> out;
  for (const auto& tb : enumerate_outcomes(joint, {1, 4}, false)) {
    const std::vector<int> l = tb.pattern.counts;
    const double eps = tb.probability > 0.0 ? prune_eps / tb.probability : prune_eps;
    const auto reported =
        reported_distribution(DetectionPattern{false, l}, detector, eps);
    for (const auto& rb : reported.branches) {
      FusionBranch b;
      b.measured_occupation = tb.measured_occupation;
      b.true_counts = l;
      b.reported_counts = rb.pattern.counts;
      b.probability = tb.probability * rb.probability;
      const int r0 = rb.pattern.counts[0], r1 = rb.pattern.counts[1];
      if (r0 == 1 && r1 == 1)
        b.status = FusionStatus::Success;
      else if ((r0 == 2 && r1 == 0) || (r0 == 0 && r1 == 2))
        b.status = FusionStatus::RecycleBellPairs;
      else
        b.status = FusionStatus::Abort;
      b.raw_state = tb.conditional_state;
      b.corrected_state = tb.conditional_state;
      if (b.status == FusionStatus::Success &&
          tb.measured_occupation[0].total() == 1 &&
          tb.measured_occupation[1].total() == 1) {
        // Same-polarization records carry e^{+-i pi/4} phases, mixed records
        // their conjugates; both convert to |t'_1> with known local elements.
        const bool same = (tb.measured_occupation[0].v == tb.measured_occupation[1].v);
        const double half_pi = std::numbers::pi / 2;
        FockState s = apply(tb.conditional_state,
                            polarization_rotator(half_pi, 2, 4) *
                                polarization_rotator(half_pi, 0, 4));
        s = apply_count_phase(s, 1, same ? -half_pi : half_pi, PolSelect::V);
        s = apply_count_phase(s, 3, same ? -half_pi : half_pi, PolSelect::V);
        b.corrected_state = s;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

/// The four-term state heralded by the same-polarization success records of
/// ghz_to_cluster, before local corrections.
inline FockState cluster_intermediate_state() {
  FockState s(4);
  const double q = std::numbers::pi / 4;
  auto key = [](int a, int b) {
    auto occ = [](int x) { return x == 0 ? ModeOcc{1, 0} : ModeOcc{0, 1}; };
    return OccupationKey{occ(a), occ(a), occ(b), occ(b)};
  };
  s.add_term(key(0, 0), std::polar(0.5, q));
  s.add_term(key(0, 1), std::polar(0.5, -q));
  s.add_term(key(1, 0), std::polar(0.5, -q));
  s.add_term(key(1, 1), std::polar(0.5, q));
  return s;
}

}  // namespace lopsim
