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

#include <random>

#include "lopsim/fock.hpp"

using namespace lopsim;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

FockState h_photon() { return apply_creation(vacuum(1), 0, Pol::H); }
FockState v_photon() { return apply_creation(vacuum(1), 0, Pol::V); }

FockState plus_state() {
  return polarization_qubit_state(InputQubit(kInvSqrt2, kInvSqrt2));
}

}  // namespace

TEST_CASE("vacuum is the single all-zero unit term") {
  const FockState v2 = vacuum(2);
  CHECK(v2.term_count() == 1);
  CHECK(v2.amplitude(OccupationKey{ModeOcc{0, 0}, ModeOcc{0, 0}}) ==
        complex{1.0, 0.0});
  CHECK(vacuum(5).norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inner_product(vacuum(2), vacuum(2)).real() ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(vacuum(0), std::invalid_argument);
}

TEST_CASE("apply_creation follows the bosonic sqrt(n+1) convention") {
  const FockState v = apply_creation(vacuum(1), 0, Pol::V);
  CHECK(std::abs(v.amplitude({ModeOcc{0, 1}}) - complex{1.0, 0.0}) < 1e-15);

  const FockState two = apply_creation(apply_creation(vacuum(1), 0, Pol::V), 0, Pol::V);
  CHECK(std::abs(two.amplitude({ModeOcc{0, 2}}) - complex{std::sqrt(2.0), 0.0}) <
        1e-14);

  CHECK_THROWS_AS(apply_creation(vacuum(2), 3, Pol::H), std::invalid_argument);
}

TEST_CASE("matrix element <n+1|a^dag|n> = sqrt(n+1)") {
  FockState n_state = vacuum(1);
  for (int n = 0; n < 6; ++n) {
    const FockState raised = apply_creation(n_state, 0, Pol::H);
    FockState np1 = vacuum(1);
    for (int i = 0; i <= n; ++i) np1 = apply_creation(np1, 0, Pol::H);
    np1 = np1.normalized();
    const complex elem =
        inner_product(np1, raised) / std::sqrt(n_state.norm_squared());
    CHECK(std::abs(elem - complex{std::sqrt(double(n + 1)), 0.0}) < 1e-12);
    n_state = raised;
  }
}

TEST_CASE("tensor concatenates keys and multiplies amplitudes") {
  const FockState hv = tensor(h_photon(), v_photon());
  CHECK(hv.mode_count() == 2);
  CHECK(std::abs(hv.amplitude({ModeOcc{1, 0}, ModeOcc{0, 1}}) - complex{1.0, 0.0}) <
        1e-15);

  // Tensor with a zero-mode unit state is the identity.
  FockState unit(0);
  unit.add_term({}, complex{1.0, 0.0});
  const FockState x = plus_state();
  const FockState same = tensor(x, unit);
  CHECK(same.mode_count() == x.mode_count());
  for (const auto& [k, a] : x.terms()) CHECK(std::abs(same.amplitude(k) - a) < 1e-15);
}

TEST_CASE("norm multiplicativity under tensor") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    FockState a(2), b(1);
    for (int t = 0; t < 3; ++t) {
      a.add_term({ModeOcc{std::uint8_t(t % 2), std::uint8_t(t / 2)}, ModeOcc{1, 0}},
                 complex{u(rng), u(rng)});
      b.add_term({ModeOcc{std::uint8_t(t), 0}}, complex{u(rng), u(rng)});
    }
    CHECK(tensor(a, b).norm_squared() ==
          doctest::Approx(a.norm_squared() * b.norm_squared()).epsilon(1e-12));
  }
}

TEST_CASE("tensor associativity, term by term") {
  const FockState a = plus_state();
  const FockState b = v_photon();
  const FockState c = tensor(h_photon(), h_photon());
  const FockState left = tensor(tensor(a, b), c);
  const FockState right = tensor(a, tensor(b, c));
  CHECK(left.term_count() == right.term_count());
  for (const auto& [k, amp] : left.terms())
    CHECK(std::abs(right.amplitude(k) - amp) < 1e-15);
}

TEST_CASE("inner product orthogonality and positivity") {
  CHECK(std::abs(inner_product(h_photon(), v_photon())) < 1e-15);

  FockState s(1);
  s.add_term({ModeOcc{1, 0}}, complex{0.3, 0.4});
  s.add_term({ModeOcc{0, 1}}, complex{-0.5, 0.1});
  const complex self = inner_product(s, s);
  CHECK(self.imag() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(self.real() == doctest::Approx(s.norm_squared()).epsilon(1e-14));

  CHECK_THROWS_AS(inner_product(vacuum(1), vacuum(2)), std::invalid_argument);
}

TEST_CASE("fidelity basics") {
  const FockState h = h_photon();
  const FockState v = v_photon();
  CHECK(fidelity(h, h) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(h, v) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(fidelity(h, plus_state()) == doctest::Approx(0.5).epsilon(1e-12));

  FockState unnorm(1);
  unnorm.add_term({ModeOcc{1, 0}}, complex{2.0, 0.0});
  CHECK_THROWS_AS(fidelity(unnorm, h), std::invalid_argument);
}

TEST_CASE("term accumulation is insertion-order independent") {
  std::vector<std::pair<OccupationKey, complex>> entries = {
      {{ModeOcc{1, 0}, ModeOcc{0, 1}}, {0.25, 0.0}},
      {{ModeOcc{0, 1}, ModeOcc{1, 0}}, {0.0, -0.5}},
      {{ModeOcc{1, 0}, ModeOcc{0, 1}}, {0.25, 0.0}},
      {{ModeOcc{2, 0}, ModeOcc{0, 0}}, {1e-16, 0.0}},
  };
  FockState fwd(2), rev(2);
  for (const auto& [k, a] : entries) fwd.add_term(k, a);
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    rev.add_term(it->first, it->second);
  fwd.prune();
  rev.prune();
  CHECK(fwd.term_count() == rev.term_count());
  for (const auto& [k, a] : fwd.terms()) CHECK(std::abs(rev.amplitude(k) - a) < 1e-18);
  // The below-epsilon entry was pruned.
  CHECK(fwd.amplitude({ModeOcc{2, 0}, ModeOcc{0, 0}}) == complex{0.0, 0.0});
}

TEST_CASE("InputQubit validates normalization") {
  CHECK_NOTHROW(InputQubit(kInvSqrt2, complex{0.0, kInvSqrt2}));
  CHECK_THROWS_AS(InputQubit(1.0, 1.0), std::invalid_argument);
}
