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

#include <cstdint>
#include <random>
#include <stdexcept>

#include "lopsim/protocols.hpp"

namespace lopsim {

inline constexpr double kErrorFidelityThreshold = 1.0 - 1e-9;
inline constexpr double kMaxTruncationBound = 1e-9;

/// Raised when the pruned probability mass exceeds the accuracy budget.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(double bound)
      : std::runtime_error("truncation bound exceeds the accuracy budget"),
        truncation_bound(bound) {}
  double truncation_bound;
};

struct ErrorReport {
  Encoding encoding = Encoding::Polarization;
  int n = 1;
  double eta = 1.0;
  double dark_mean = 0.0;
  InputQubit input{1.0, 0.0};
  double p_success = 0.0;  // reported success with the correct output state
  double p_f = 0.0;        // detected failure (including detected loss)
  double p_nde = 0.0;      // reported success with a wrong output state
  double p_e = 0.0;        // p_nde / (1 - p_f)
  double truncation_bound = 0.0;
};

namespace detail {

/// Per-true-branch grader: fidelity of the phase-corrected conditional state
/// against the teleported reference, memoized over (k', exponent).
class SuccessGrader {
 public:
  SuccessGrader(const FockState& conditional, const InputQubit& q, int n,
                Encoding enc)
      : cond_(&conditional), q_(q), n_(n), enc_(enc),
        memo_(std::size_t(n) * std::size_t(n + 1), -1.0) {}

  double fidelity(int k, int m) const {
    if (k < 1 || k > n_) return 0.0;  // no valid output slot to select
    double& slot = memo_[std::size_t(k - 1) * std::size_t(n_ + 1) + std::size_t(m)];
    if (slot >= 0.0) return slot;
    OccupationKey kh(std::size_t(n_), ModeOcc{});
    OccupationKey kv(std::size_t(n_), ModeOcc{});
    for (int mm = 0; mm < n_; ++mm) {
      if (mm == k - 1) continue;
      ModeOcc herald{};
      if (enc_ == Encoding::Polarization)
        herald = mm < k - 1 ? ModeOcc{1, 0} : ModeOcc{0, 1};
      else if (mm >= k)
        herald = ModeOcc{1, 0};
      kh[std::size_t(mm)] = herald;
      kv[std::size_t(mm)] = herald;
    }
    if (enc_ == Encoding::Polarization) {
      kh[std::size_t(k - 1)] = ModeOcc{1, 0};
      kv[std::size_t(k - 1)] = ModeOcc{0, 1};
    } else {
      kv[std::size_t(k - 1)] = ModeOcc{1, 0};
    }
    const complex phase =
        std::polar(1.0, 2.0 * std::numbers::pi * double(m) / double(n_ + 1));
    const complex overlap = std::conj(q_.alpha) * cond_->amplitude(kh) +
                            std::conj(q_.beta) * phase * cond_->amplitude(kv);
    slot = std::norm(overlap);
    return slot;
  }

 private:
  const FockState* cond_;
  InputQubit q_;
  int n_;
  Encoding enc_;
  mutable std::vector<double> memo_;
};

/// Summary of one reported record for grading: detected failure, or
/// success-classified with a selected slot and correction exponent.
struct Grading {
  bool detected_failure = false;
  int k = 0;
  int m = 0;
};

inline Grading grade_reported(const DetectionPattern& reported, int n, Encoding enc) {
  Grading g;
  if (enc == Encoding::Polarization) {
    if (reported.total() != n + 1) {
      g.detected_failure = true;  // some detector certainly failed
      return g;
    }
    const int v = reported.v_total();
    if (v == 0 || v == n + 1) {
      g.detected_failure = true;
      return g;
    }
    g.k = v;
  } else {
    const int k = reported.total();
    if (k == 0 || k == n + 1) {
      g.detected_failure = true;
      return g;
    }
    g.k = k;  // k > n + 1 stays success-classified and always grades wrong
  }
  g.m = correction_exponent(reported);
  return g;
}

}  // namespace detail

/// Exact detected-failure / non-detected-error analysis of one teleportation.
inline ErrorReport analyze_teleport(const InputQubit& q, int n, Encoding enc,
                                    const DetectorModel& detector,
                                    double prune_eps = 1e-16,
                                    double max_truncation = kMaxTruncationBound) {
  if (n < 1 || n > 6) throw std::invalid_argument("analyze_teleport: n must be in [1,6]");
  ErrorReport r;
  r.encoding = enc;
  r.n = n;
  r.eta = detector.eta;
  r.dark_mean = detector.dark_mean;
  r.input = q;

  const bool resolved = (enc == Encoding::Polarization);
  const FockState after =
      apply(teleport_joint_state(q, n, enc), fourier(std::size_t(n), std::size_t(2 * n + 1)));
  std::vector<std::size_t> measured(std::size_t(n + 1));
  for (int i = 0; i <= n; ++i) measured[std::size_t(i)] = std::size_t(i);

  for (const auto& tb : enumerate_outcomes(after, measured, resolved)) {
    const detail::SuccessGrader grader(tb.conditional_state, q, n, enc);
    const double eps = tb.probability > 0.0 ? prune_eps / tb.probability : prune_eps;
    const auto reported = reported_distribution(tb.pattern, detector, eps);
    r.truncation_bound += tb.probability * reported.dropped_mass;
    for (const auto& rb : reported.branches) {
      const double p = tb.probability * rb.probability;
      const detail::Grading g = detail::grade_reported(rb.pattern, n, enc);
      if (g.detected_failure) {
        r.p_f += p;
      } else if (grader.fidelity(g.k, g.m) < kErrorFidelityThreshold) {
        r.p_nde += p;
      } else {
        r.p_success += p;
      }
    }
  }
  if (r.truncation_bound > max_truncation) throw PrecisionError(r.truncation_bound);
  r.p_e = r.p_f < 1.0 ? r.p_nde / (1.0 - r.p_f) : 0.0;
  return r;
}

struct SweepGrid {
  std::vector<Encoding> encodings;
  std::vector<int> ns;
  std::vector<double> etas;
  std::vector<double> darks;
};

/// One report per grid point, in deterministic
/// encoding -> n -> eta -> dark order.
inline std::vector<ErrorReport> sweep(const SweepGrid& grid, const InputQubit& input,
                                      double prune_eps = 1e-16,
                                      double max_truncation = kMaxTruncationBound) {
  std::vector<ErrorReport> out;
  for (Encoding enc : grid.encodings)
    for (int n : grid.ns)
      for (double eta : grid.etas)
        for (double dark : grid.darks)
          out.push_back(analyze_teleport(input, n, enc, DetectorModel{eta, dark},
                                         prune_eps, max_truncation));
  return out;
}

struct SlopeReport {
  double slope = 0.0;
  double p_e_at_reference = 0.0;  // p_e at dark mean 1e-7
  std::vector<std::pair<double, double>> points;  // (dark mean, p_e)
};

/// Least-squares fit of log p_e against log dark-count mean.
inline SlopeReport dark_scaling_probe(Encoding enc, int n, double eta,
                                      const std::vector<double>& darks,
                                      const InputQubit& input) {
  if (darks.size() < 2)
    throw std::invalid_argument("dark_scaling_probe: need at least two dark values");
  double lo = darks[0], hi = darks[0];
  for (double d : darks) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo > 0.0) || hi / lo < 10.0)
    throw std::invalid_argument(
        "dark_scaling_probe: dark values must be positive and span a decade");

  SlopeReport r;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (double d : darks) {
    const ErrorReport rep = analyze_teleport(input, n, enc, DetectorModel{eta, d});
    r.points.emplace_back(d, rep.p_e);
    if (rep.p_e <= 0.0) continue;
    const double x = std::log(d), y = std::log(rep.p_e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) r.slope = (double(m) * sxy - sx * sy) / (double(m) * sxx - sx * sx);
  r.p_e_at_reference =
      analyze_teleport(input, n, enc, DetectorModel{eta, 1e-7}).p_e;
  return r;
}

// ---------------------------------------------------------------------------
// Monte-Carlo cross-check (never used for acceptance-grade numbers)
// ---------------------------------------------------------------------------

struct MonteCarloReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double p_f_estimate = 0.0, p_f_exact = 0.0, p_f_sigma = 0.0;
  double p_nde_estimate = 0.0, p_nde_exact = 0.0, p_nde_sigma = 0.0;
};

/// Samples the true measurement record exactly and the detector response
/// stochastically (binomial thinning plus Poisson dark counts), then grades
/// each shot with the same classifier as the exact pipeline.
inline MonteCarloReport monte_carlo_check(const InputQubit& q, int n, Encoding enc,
                                          const DetectorModel& detector,
                                          std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("monte_carlo_check: samples == 0");
  const ErrorReport exact = analyze_teleport(q, n, enc, detector);

  const bool resolved = (enc == Encoding::Polarization);
  const FockState after =
      apply(teleport_joint_state(q, n, enc), fourier(std::size_t(n), std::size_t(2 * n + 1)));
  std::vector<std::size_t> measured(std::size_t(n + 1));
  for (int i = 0; i <= n; ++i) measured[std::size_t(i)] = std::size_t(i);
  const auto branches = enumerate_outcomes(after, measured, resolved);

  std::vector<double> cdf;
  cdf.reserve(branches.size());
  double acc = 0.0;
  for (const auto& b : branches) {
    acc += b.probability;
    cdf.push_back(acc);
  }
  std::vector<detail::SuccessGrader> graders;
  graders.reserve(branches.size());
  for (const auto& b : branches)
    graders.emplace_back(b.conditional_state, q, n, enc);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::poisson_distribution<int> dark(detector.dark_mean);
  std::uint64_t failures = 0, errors = 0;
  DetectionPattern reported;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double u = unif(rng) * acc;
    const std::size_t idx = std::size_t(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const auto& b = branches[std::min(idx, branches.size() - 1)];
    reported = b.pattern;
    for (int& c : reported.counts) {
      int k = detector.dark_mean > 0.0 ? dark(rng) : 0;
      if (c > 0 && detector.eta >= 1.0) {
        k += c;
      } else if (c > 0) {
        std::binomial_distribution<int> thin(c, detector.eta);
        k += thin(rng);
      }
      c = k;
    }
    const detail::Grading g = detail::grade_reported(reported, n, enc);
    if (g.detected_failure)
      ++failures;
    else if (graders[idx].fidelity(g.k, g.m) < kErrorFidelityThreshold)
      ++errors;
  }

  MonteCarloReport r;
  r.samples = samples;
  r.seed = seed;
  r.p_f_exact = exact.p_f;
  r.p_nde_exact = exact.p_nde;
  r.p_f_estimate = double(failures) / double(samples);
  r.p_nde_estimate = double(errors) / double(samples);
  r.p_f_sigma = std::sqrt(exact.p_f * (1.0 - exact.p_f) / double(samples));
  r.p_nde_sigma = std::sqrt(exact.p_nde * (1.0 - exact.p_nde) / double(samples));
  return r;
}

}  // namespace lopsim
