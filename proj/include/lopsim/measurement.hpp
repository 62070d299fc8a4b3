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

#include <map>

#include "lopsim/fock.hpp"

namespace lopsim {

/// Per-detector reported photon counts.
///
/// Polarization-resolved patterns carry two detectors per measured mode, laid
/// out as (h_0, r_0, h_1, r_1, ...) with r_j the V-count of mode j. Plain
/// number counting carries one total per measured mode.
struct DetectionPattern {
  bool polarization_resolved = false;
  std::vector<int> counts;

  friend bool operator==(const DetectionPattern&, const DetectionPattern&) = default;

  int total() const {
    int t = 0;
    for (int c : counts) t += c;
    return t;
  }
  /// Total V-count; only meaningful for polarization-resolved patterns.
  int v_total() const {
    int t = 0;
    for (std::size_t i = 1; i < counts.size(); i += 2) t += counts[i];
    return t;
  }
  /// Photons in measured mode j (both detectors when resolved).
  int mode_total(std::size_t j) const {
    return polarization_resolved ? counts[2 * j] + counts[2 * j + 1] : counts[j];
  }
  std::size_t mode_count() const {
    return polarization_resolved ? counts.size() / 2 : counts.size();
  }
};

/// Number-resolving photodetector with quantum efficiency eta and Poisson
/// dark counts of mean dark_mean per gate window. Dark counts beyond d_max
/// are truncated; the lost mass is tracked by callers.
struct DetectorModel {
  double eta = 1.0;
  double dark_mean = 0.0;
  int d_max = 3;

  bool ideal() const { return eta == 1.0 && dark_mean == 0.0; }

  /// Poisson mass beyond d_max, the truncation tail per detector.
  double dark_tail() const {
    double kept = 0.0, term = std::exp(-dark_mean);
    for (int d = 0; d <= d_max; ++d) {
      kept += term;
      term *= dark_mean / double(d + 1);
    }
    return std::max(0.0, 1.0 - kept);
  }
};

inline double dark_count_pmf(const DetectorModel& model, int d) {
  if (d < 0) throw std::invalid_argument("dark_count_pmf: d must be >= 0");
  if (model.dark_mean == 0.0) return d == 0 ? 1.0 : 0.0;
  return std::exp(-model.dark_mean) * std::pow(model.dark_mean, d) /
         detail::factorial(d);
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace detail

/// PMF over reported counts k given l photons present; p[k] = P_D(k|l).
/// Sums to 1 - tail, tail being the truncated dark-count mass.
struct CountPmf {
  std::vector<double> p;
  double tail = 0.0;
};

inline CountPmf detector_confusion(const DetectorModel& model, int l) {
  if (l < 0) throw std::invalid_argument("detector_confusion: l must be >= 0");
  CountPmf pmf;
  pmf.p.assign(std::size_t(l + model.d_max + 1), 0.0);
  for (int k = 0; k <= l + model.d_max; ++k) {
    double s = 0.0;
    for (int d = std::max(0, k - model.d_max); d <= std::min(k, l); ++d) {
      s += dark_count_pmf(model, k - d) * detail::binomial(l, d) *
           std::pow(model.eta, d) * std::pow(1.0 - model.eta, l - d);
    }
    pmf.p[std::size_t(k)] = s;
  }
  pmf.tail = model.dark_tail();
  return pmf;
}

/// One exact measurement branch: the true detection record, its probability
/// and the renormalized state of the unmeasured modes.
struct OutcomeBranch {
  DetectionPattern pattern;       // coarsened per the resolution flag
  OccupationKey measured_occupation;  // full resolved record of measured modes
  double probability = 0.0;
  FockState conditional_state{0};
};

/// Exact enumeration of photodetection outcomes on a set of modes.
///
/// Branches are grouped by the resolved occupation of the measured modes (the
/// physical projective record); the stored pattern drops polarization
/// information when polarization_resolved is false.
inline std::vector<OutcomeBranch> enumerate_outcomes(
    const FockState& state, const std::vector<std::size_t>& measured_modes,
    bool polarization_resolved) {
  for (std::size_t m : measured_modes)
    if (m >= state.mode_count())
      throw std::invalid_argument("enumerate_outcomes: measured mode out of range");

  std::vector<bool> measured(state.mode_count(), false);
  for (std::size_t m : measured_modes) measured[m] = true;

  struct Group {
    FockState rest;
    Group(std::size_t n) : rest(n) {}
  };
  const std::size_t rest_count = state.mode_count() - measured_modes.size();

  std::map<OccupationKey, Group, std::less<>> groups;  // deterministic order
  for (const auto& [key, amp] : state.terms()) {
    OccupationKey mk, rk;
    mk.reserve(measured_modes.size());
    rk.reserve(rest_count);
    for (std::size_t i = 0; i < key.size(); ++i)
      (measured[i] ? mk : rk).push_back(key[i]);
    auto it = groups.find(mk);
    if (it == groups.end()) it = groups.emplace(std::move(mk), Group(rest_count)).first;
    it->second.rest.add_term(rk, amp);
  }

  std::vector<OutcomeBranch> out;
  out.reserve(groups.size());
  for (auto& [mk, g] : groups) {
    OutcomeBranch b;
    b.measured_occupation = mk;
    b.pattern.polarization_resolved = polarization_resolved;
    for (const ModeOcc& m : mk) {
      if (polarization_resolved) {
        b.pattern.counts.push_back(m.h);
        b.pattern.counts.push_back(m.v);
      } else {
        b.pattern.counts.push_back(m.total());
      }
    }
    b.probability = g.rest.norm_squared();
    b.conditional_state = g.rest.normalized();
    out.push_back(std::move(b));
  }
  return out;
}

struct ReportedBranch {
  DetectionPattern pattern;
  double probability = 0.0;
};

struct ReportedDistribution {
  std::vector<ReportedBranch> branches;
  double dropped_mass = 0.0;  // kept + dropped = 1 exactly
};

/// Product distribution of reported patterns over independent detectors,
/// pruning branches whose joint probability falls below prune_eps.
inline ReportedDistribution reported_distribution(const DetectionPattern& true_pattern,
                                                  const DetectorModel& model,
                                                  double prune_eps = 0.0) {
  if (prune_eps < 0.0)
    throw std::invalid_argument("reported_distribution: prune_eps must be >= 0");

  ReportedDistribution dist;
  if (model.ideal()) {
    dist.branches.push_back({true_pattern, 1.0});
    return dist;
  }

  std::vector<CountPmf> pmfs;
  pmfs.reserve(true_pattern.counts.size());
  for (int l : true_pattern.counts) pmfs.push_back(detector_confusion(model, l));

  std::vector<ReportedBranch> frontier;
  frontier.push_back({DetectionPattern{true_pattern.polarization_resolved, {}}, 1.0});
  double kept = 0.0;
  for (const CountPmf& pmf : pmfs) {
    std::vector<ReportedBranch> next;
    next.reserve(frontier.size() * pmf.p.size());
    for (const ReportedBranch& rb : frontier) {
      for (int k = 0; k < int(pmf.p.size()); ++k) {
        const double p = rb.probability * pmf.p[std::size_t(k)];
        if (p < prune_eps || p == 0.0) continue;
        ReportedBranch nb = rb;
        nb.pattern.counts.push_back(k);
        nb.probability = p;
        next.push_back(std::move(nb));
      }
    }
    frontier.swap(next);
  }
  for (const ReportedBranch& rb : frontier) kept += rb.probability;
  dist.branches = std::move(frontier);
  dist.dropped_mass = 1.0 - kept;
  return dist;
}

}  // namespace lopsim
