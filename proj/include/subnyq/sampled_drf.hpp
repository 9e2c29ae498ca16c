// Copyright 2026 The subnyq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/psd.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/waterfill.hpp"

namespace subnyq {

/// Minimal distortion under sampling at f_s and coding at `rate`, together
/// with its split into the sampling MMSE and the waterfilling term.
struct SampledDrfResult {
  double f_s = 0.0;
  double rate = 0.0;
  double distortion = 0.0;
  double mmse_component = 0.0;
  SpectralSet fstar;
  double theta = 0.0;
};

namespace sampled_detail {

/// Carves `needed` measure out of the plateau pieces, symmetrically:
/// pieces straddling the origin shrink toward it, the others keep the part
/// closest to the origin.
inline SpectralSet plateau_slices(const SpectralSet& plateau, double needed) {
  const double total = plateau.measure();
  if (!(total > 0.0) || !(needed > 0.0)) return {};
  const double alpha = std::min(1.0, needed / total);
  std::vector<Interval> out;
  for (const auto& iv : plateau.intervals()) {
    if (iv.lo < 0.0 && iv.hi > 0.0) out.push_back({alpha * iv.lo, alpha * iv.hi});
    else if (iv.lo >= 0.0) out.push_back({iv.lo, iv.lo + alpha * iv.length()});
    else out.push_back({iv.hi - alpha * iv.length(), iv.hi});
  }
  return SpectralSet(std::move(out));
}

}  // namespace sampled_detail

/// Set of measure min(f_s, Landau rate) that captures the most energy of S.
///
/// Found as a superlevel set {S > tau} with tau bisected so the measure
/// equals f_s. When a plateau of S makes the measure jump across f_s, the
/// missing measure is taken symmetrically from the plateau.
template <SpectralDensity S>
SpectralSet optimal_fstar(const S& psd, double f_s) {
  if (!(f_s > 0.0)) throw DomainError("sampling frequency must be positive");
  if (f_s >= psd.landau_rate()) return psd.support();

  constexpr double kMeasureTol = 1e-13;
  double lo = 0.0;  // measure above target
  double hi = psd.ess_sup();  // measure below target
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    auto set = psd.superlevel_set(mid);
    const double m = set.measure();
    if (std::abs(m - f_s) <= kMeasureTol * std::max(1.0, f_s)) return set;
    if (m > f_s) lo = mid;
    else hi = mid;
  }
  auto upper = psd.superlevel_set(hi);
  const double gap = f_s - upper.measure();
  if (gap <= 1e-9) return upper;
  // The level has converged but the measure has not: plateau at tau.
  const auto lower = psd.superlevel_set(lo);
  const auto plateau = set_difference(lower, upper);
  return set_union(upper, sampled_detail::plateau_slices(plateau, gap));
}

/// MMSE of estimating the process from samples at rate f_s with the best
/// pre-sampling system: variance minus the energy on F*(f_s).
template <SpectralDensity S>
double sub_sampling_mmse(const S& psd, double f_s) {
  return psd.variance() - energy_on(psd, optimal_fstar(psd, f_s));
}

template <SpectralDensity S>
SampledDrfResult sampled_drf(const S& psd, double f_s, double rate) {
  SampledDrfResult out;
  out.f_s = f_s;
  out.rate = rate;
  out.fstar = optimal_fstar(psd, f_s);
  out.mmse_component = psd.variance() - energy_on(psd, out.fstar);
  // Once F* holds the whole active set {S > theta} (f_s >= f_DR) the
  // restricted problem is the unrestricted one; solving it that way keeps
  // the curve exactly flat past the critical frequency.
  auto point = theta_from_rate(psd, rate);
  if (psd.superlevel_set(point.theta).measure() > f_s) point = theta_from_rate(psd, rate, out.fstar);
  out.theta = point.theta;
  out.distortion = point.distortion;
  return out;
}

/// Waterfilling term of the decomposition, integral over F* of min{S, theta}.
template <SpectralDensity S>
double waterfilling_term(const S& psd, const SampledDrfResult& r) {
  return quadrature::integrate([&](double f) { return std::min(psd(f), r.theta); }, r.fstar, psd.breakpoints());
}

/// Inverse of sampled_drf in the rate: the smallest rate reaching
/// `distortion` when sampling at f_s. Requires mmse(f_s) < distortion <= variance.
template <SpectralDensity S>
SampledDrfResult sampled_rate(const S& psd, double f_s, double distortion) {
  SampledDrfResult out;
  out.f_s = f_s;
  out.fstar = optimal_fstar(psd, f_s);
  out.mmse_component = psd.variance() - energy_on(psd, out.fstar);
  if (!(distortion > out.mmse_component) || distortion > psd.variance())
    throw DomainError("distortion must lie in (mmse(f_s), variance]");

  auto d_at = [&](double theta) { return waterfill_on(psd, theta, out.fstar).distortion; };
  double lo = 0.0, hi = psd.ess_sup();
  double theta = hi;
  if (distortion < psd.variance()) {
    for (int i = 0; i < 400; ++i) {
      theta = 0.5 * (lo + hi);
      if (!(theta > lo && theta < hi)) break;
      const double d = d_at(theta);
      if (std::abs(d - distortion) <= 1e-14 * std::max(1.0, distortion)) break;
      if (d > distortion) hi = theta;
      else lo = theta;
    }
  }
  const auto point = waterfill_on(psd, theta, out.fstar);
  out.theta = theta;
  out.rate = point.rate;
  out.distortion = point.distortion;
  return out;
}

// ---------------------------------------------------------------------------
// Multibranch uniform sampling.

/// P aliasing-free passbands, one per sampling branch of rate f_s / P.
struct MultibranchPlan {
  int branches = 1;
  double f_s = 0.0;
  double branch_rate = 0.0;
  std::vector<SpectralSet> passbands;

  [[nodiscard]] SpectralSet combined() const {
    SpectralSet all;
    for (const auto& p : passbands) all = set_union(all, p);
    return all;
  }
};

namespace multibranch_detail {

/// Shift indices k of the aliases phi + k*b ranked by S, at most `count`,
/// ignoring aliases where S vanishes. Ties go to the alias nearer the origin.
template <SpectralDensity S>
std::vector<int> ranked_aliases(const S& psd, double phi, double b, int k_min, int k_max, int count) {
  struct Cand {
    int k;
    double s;
    double f;
  };
  std::vector<Cand> c;
  for (int k = k_min; k <= k_max; ++k) {
    const double f = phi + k * b;
    const double s = psd(f);
    if (s > 0.0) c.push_back({k, s, f});
  }
  std::sort(c.begin(), c.end(), [](const Cand& x, const Cand& y) {
    if (x.s != y.s) return x.s > y.s;
    if (std::abs(x.f) != std::abs(y.f)) return std::abs(x.f) < std::abs(y.f);
    return x.f < y.f;
  });
  std::vector<int> out;
  for (int i = 0; i < std::min<int>(count, static_cast<int>(c.size())); ++i) out.push_back(c[i].k);
  return out;
}

}  // namespace multibranch_detail

/// Greedy energy-maximizing filter bank: for every residue phi of the
/// folding modulo b = f_s/P, branch p passes the alias with the p-th largest
/// S(phi + k b). Each passband picks one alias per residue, so it is
/// aliasing-free for rate b; the union tends to F*(f_s) as P grows.
///
/// The residue cell is resolved on `resolution` points, with assignment
/// switches refined by bisection.
template <SpectralDensity S>
MultibranchPlan multibranch_plan(const S& psd, double f_s, int branches, int resolution = 2048) {
  if (!(f_s > 0.0)) throw DomainError("sampling frequency must be positive");
  if (branches < 1) throw DomainError("number of branches must be at least 1");
  if (resolution < 2) throw DomainError("cell resolution must be at least 2");

  MultibranchPlan plan;
  plan.branches = branches;
  plan.f_s = f_s;
  const double b = f_s / branches;
  plan.branch_rate = b;

  int k_min = -branches - 2, k_max = branches + 2;
  const auto supp = psd.support();
  if (supp.is_bounded() && !supp.empty()) {
    const auto h = supp.hull();
    k_min = static_cast<int>(std::floor((h.lo - 0.5 * b) / b)) - 1;
    k_max = static_cast<int>(std::ceil((h.hi + 0.5 * b) / b)) + 1;
  }
  auto assign = [&](double phi) {
    return multibranch_detail::ranked_aliases(psd, phi, b, k_min, k_max, branches);
  };

  const double cell_lo = -0.5 * b;
  const double step = b / resolution;
  std::vector<double> cuts{cell_lo};
  std::vector<std::vector<int>> labels;
  double prev_phi = cell_lo + 0.5 * step;
  auto prev = assign(prev_phi);
  labels.push_back(prev);
  for (int j = 1; j < resolution; ++j) {
    const double phi = cell_lo + (j + 0.5) * step;
    auto cur = assign(phi);
    if (cur != prev) {
      double a = prev_phi, c = phi;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + c);
        if (assign(m) == prev) a = m;
        else c = m;
      }
      cuts.push_back(0.5 * (a + c));
      labels.push_back(cur);
      prev = std::move(cur);
    }
    prev_phi = phi;
  }
  cuts.push_back(cell_lo + b);

  std::vector<std::vector<Interval>> pieces(static_cast<std::size_t>(branches));
  for (std::size_t seg = 0; seg < labels.size(); ++seg) {
    for (std::size_t p = 0; p < labels[seg].size(); ++p) {
      const double shift = labels[seg][p] * b;
      pieces[p].push_back({cuts[seg] + shift, cuts[seg + 1] + shift});
    }
  }
  for (auto& p : pieces) plan.passbands.emplace_back(std::move(p));
  return plan;
}

/// Energy of S captured by all passbands of the plan.
template <SpectralDensity S>
double captured_energy(const S& psd, const MultibranchPlan& plan) {
  double e = 0.0;
  for (const auto& p : plan.passbands) e += energy_on(psd, p);
  return e;
}

/// Distortion of the filter bank: variance minus the waterfilling excess
/// over the union of passbands, at the level that spends `rate`.
template <SpectralDensity S>
double multibranch_drf(const S& psd, const MultibranchPlan& plan, double rate) {
  if (rate == 0.0) return psd.variance();
  return theta_from_rate(psd, rate, plan.combined()).distortion;
}

}  // namespace subnyq
