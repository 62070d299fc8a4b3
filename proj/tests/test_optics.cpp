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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "lopsim/optics.hpp"

using namespace lopsim;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

FockState photon(std::size_t modes, std::size_t mode, Pol p) {
  return apply_creation(vacuum(modes), mode, p);
}

bool states_equal(const FockState& a, const FockState& b, double tol = 1e-12) {
  if (a.mode_count() != b.mode_count()) return false;
  FockState diff = a;
  for (const auto& [k, amp] : b.terms()) diff.add_term(k, -amp);
  diff.prune(tol);
  return diff.term_count() == 0;
}

/// Random unitary on a small number of modes, via Gram-Schmidt on a random
/// complex matrix (independent oracle for composition/unitarity properties).
ModeUnitary random_unitary(std::size_t modes, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t d = 2 * modes;
  std::vector<std::vector<complex>> cols(d, std::vector<complex>(d));
  for (auto& c : cols)
    for (auto& x : c) x = complex{g(rng), g(rng)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      complex proj{0.0, 0.0};
      for (std::size_t r = 0; r < d; ++r) proj += std::conj(cols[j][r]) * cols[i][r];
      for (std::size_t r = 0; r < d; ++r) cols[i][r] -= proj * cols[j][r];
    }
    double n = 0.0;
    for (const complex& x : cols[i]) n += std::norm(x);
    for (complex& x : cols[i]) x /= std::sqrt(n);
  }
  ModeUnitary u(modes);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) u.at(r, c) = cols[c][r];
  return u;
}

FockState random_state(std::size_t modes, int max_photons, std::mt19937& rng) {
  std::uniform_int_distribution<int> occ(0, max_photons);
  std::normal_distribution<double> g(0.0, 1.0);
  FockState s(modes);
  for (int t = 0; t < 4; ++t) {
    OccupationKey k(modes);
    int budget = max_photons;
    for (auto& m : k) {
      m.h = std::uint8_t(std::min(budget, occ(rng) % 2));
      budget -= m.h;
      m.v = std::uint8_t(std::min(budget, occ(rng) % 2));
      budget -= m.v;
    }
    s.add_term(k, complex{g(rng), g(rng)});
  }
  return s.normalized();
}

}  // namespace

TEST_CASE("fourier(1) is the balanced splitter") {
  const ModeUnitary f = fourier(1);
  for (Pol p : {Pol::H, Pol::V}) {
    const std::size_t i0 = ModeUnitary::op_index(0, p);
    const std::size_t i1 = ModeUnitary::op_index(1, p);
    CHECK(std::abs(f.at(i0, i0) - complex{kInvSqrt2, 0.0}) < 1e-12);
    CHECK(std::abs(f.at(i0, i1) - complex{kInvSqrt2, 0.0}) < 1e-12);
    CHECK(std::abs(f.at(i1, i0) - complex{kInvSqrt2, 0.0}) < 1e-12);
    CHECK(std::abs(f.at(i1, i1) - complex{-kInvSqrt2, 0.0}) < 1e-12);
  }
  // No polarization mixing.
  CHECK(std::abs(f.at(ModeUnitary::op_index(0, Pol::H),
                      ModeUnitary::op_index(1, Pol::V))) < 1e-15);
}

TEST_CASE("fourier magnitudes and unitarity") {
  const ModeUnitary f = fourier(2);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t l = 0; l < 3; ++l)
      CHECK(std::abs(f.at(ModeUnitary::op_index(l, Pol::H),
                          ModeUnitary::op_index(m, Pol::H))) ==
            doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  for (std::size_t n = 1; n <= 4; ++n) CHECK(fourier(n).is_unitary(1e-12));
}

TEST_CASE("beam splitter conventions") {
  CHECK(states_equal(apply(photon(2, 0, Pol::H), beam_splitter(0.0, 0, 1, 2)),
                     photon(2, 0, Pol::H)));

  // theta = pi/4 spreads a single photon across both modes.
  const FockState split =
      apply(photon(2, 0, Pol::H), beam_splitter(kPi / 4, 0, 1, 2));
  CHECK(std::abs(std::abs(split.amplitude({ModeOcc{1, 0}, ModeOcc{0, 0}})) -
                 kInvSqrt2) < 1e-12);
  CHECK(std::abs(std::abs(split.amplitude({ModeOcc{0, 0}, ModeOcc{1, 0}})) -
                 kInvSqrt2) < 1e-12);

  // |01> -> cos|01> + sin|10>.
  const double theta = 0.3;
  const FockState out = apply(photon(2, 1, Pol::H), beam_splitter(theta, 0, 1, 2));
  CHECK(std::abs(out.amplitude({ModeOcc{0, 0}, ModeOcc{1, 0}}) -
                 complex{std::cos(theta), 0.0}) < 1e-12);
  CHECK(std::abs(out.amplitude({ModeOcc{1, 0}, ModeOcc{0, 0}}) -
                 complex{std::sin(theta), 0.0}) < 1e-12);

  CHECK_THROWS_AS(beam_splitter(0.1, 1, 1, 2), std::invalid_argument);
}

TEST_CASE("Hong-Ou-Mandel cancellation at the balanced splitter") {
  // Oracle by hand: (a^dag + b^dag)(a^dag - b^dag)/2 = (a^dag^2 - b^dag^2)/2,
  // so the (1,1) output key vanishes.
  const FockState in = apply_creation(photon(2, 0, Pol::H), 1, Pol::H);
  const FockState out = apply(in, beam_splitter(kPi / 4, 0, 1, 2));
  CHECK(std::abs(out.amplitude({ModeOcc{1, 0}, ModeOcc{1, 0}})) < 1e-12);
  CHECK(std::abs(std::abs(out.amplitude({ModeOcc{2, 0}, ModeOcc{0, 0}})) -
                 kInvSqrt2) < 1e-12);
  CHECK(std::abs(std::abs(out.amplitude({ModeOcc{0, 0}, ModeOcc{2, 0}})) -
                 kInvSqrt2) < 1e-12);
}

TEST_CASE("phase shifter acts per photon on the selected rows") {
  CHECK(states_equal(
      apply(photon(1, 0, Pol::V), phase_shifter(0.0, 0, PolSelect::Both, 1)),
      photon(1, 0, Pol::V)));

  const FockState q = polarization_qubit_state(InputQubit(0.6, 0.8));
  const FockState flipped = apply(q, phase_shifter(kPi, 0, PolSelect::V, 1));
  CHECK(std::abs(flipped.amplitude({ModeOcc{1, 0}}) - complex{0.6, 0.0}) < 1e-12);
  CHECK(std::abs(flipped.amplitude({ModeOcc{0, 1}}) - complex{-0.8, 0.0}) < 1e-12);

  // Two photons pick up the phase twice.
  const FockState two =
      apply_creation(apply_creation(vacuum(1), 0, Pol::V), 0, Pol::V);
  const FockState shifted = apply(two, phase_shifter(kPi / 2, 0, PolSelect::V, 1));
  CHECK(std::abs(shifted.amplitude({ModeOcc{0, 2}}) -
                 complex{-std::sqrt(2.0), 0.0}) < 1e-12);
}

TEST_CASE("polarization rotator") {
  CHECK(states_equal(apply(photon(1, 0, Pol::H), polarization_rotator(0.0, 0, 1)),
                     photon(1, 0, Pol::H)));

  const FockState swapped =
      apply(photon(1, 0, Pol::H), polarization_rotator(kPi / 2, 0, 1));
  CHECK(std::abs(std::abs(swapped.amplitude({ModeOcc{0, 1}})) - 1.0) < 1e-12);

  const FockState diag =
      apply(photon(1, 0, Pol::H), polarization_rotator(kPi / 4, 0, 1));
  CHECK(std::abs(diag.amplitude({ModeOcc{1, 0}}) - complex{kInvSqrt2, 0.0}) < 1e-12);
  CHECK(std::abs(diag.amplitude({ModeOcc{0, 1}}) - complex{kInvSqrt2, 0.0}) < 1e-12);
}

TEST_CASE("polarizing beam splitter transmits H, reflects V") {
  const ModeUnitary pbs = polarizing_beam_splitter(0, 1, 2);
  CHECK(states_equal(apply(photon(2, 0, Pol::H), pbs), photon(2, 0, Pol::H)));
  CHECK(states_equal(apply(photon(2, 0, Pol::V), pbs), photon(2, 1, Pol::V)));
  // Involution.
  const ModeUnitary ident = pbs * pbs;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(std::abs(ident.at(r, c) - (r == c ? complex{1.0, 0.0} : complex{})) <
            1e-15);
  CHECK_THROWS_AS(polarizing_beam_splitter(0, 0, 2), std::invalid_argument);
}

TEST_CASE("apply preserves norm, photon number and polarization totals") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const FockState s = random_state(3, 3, rng);
    const ModeUnitary u = random_unitary(3, rng);
    REQUIRE(u.is_unitary(1e-10));
    const FockState out = apply(s, u);
    CHECK(out.norm_squared() == doctest::Approx(s.norm_squared()).epsilon(1e-10));

    // Photon number conservation, per input term.
    for (const auto& [k, amp] : s.terms()) {
      FockState single(3);
      single.add_term(k, complex{1.0, 0.0});
      for (const auto& [ok, oamp] : apply(single, u).terms())
        CHECK(total_photons(ok) == total_photons(k));
    }
  }

  // Polarization-preserving unitaries conserve per-polarization totals.
  const FockState mixed =
      apply_creation(apply_creation(vacuum(3), 0, Pol::H), 1, Pol::V);
  for (const ModeUnitary& u :
       {fourier(2), beam_splitter(0.7, 0, 2, 3), phase_shifter(0.4, 1, PolSelect::V, 3)}) {
    for (const auto& [k, amp] : apply(mixed, u).terms()) {
      CHECK(photons_of(k, Pol::H) == 1);
      CHECK(photons_of(k, Pol::V) == 1);
    }
  }
}

TEST_CASE("composition homomorphism: apply(apply(s,U),W) = apply(s, W*U)") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const FockState s = random_state(2, 2, rng);
    const ModeUnitary u = random_unitary(2, rng);
    const ModeUnitary w = random_unitary(2, rng);
    const FockState two_step = apply(apply(s, u), w);
    const FockState one_step = apply(s, w * u);
    CHECK(states_equal(two_step, one_step, 1e-10));
  }
}

TEST_CASE("apply of identity and dimension checking") {
  const FockState s = polarization_qubit_state(InputQubit(0.6, complex{0.0, 0.8}));
  CHECK(states_equal(apply(s, ModeUnitary::identity(1)), s));
  CHECK_THROWS_AS(apply(s, ModeUnitary::identity(2)), std::invalid_argument);
}
