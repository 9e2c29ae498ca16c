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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "subnyq/noisy.hpp"

namespace subnyq {
namespace {

TEST(EffectivePsd, PointwiseValues) {
  const auto src = NoisySource::white(Psd::rect(0.5), 1.0);
  EXPECT_DOUBLE_EQ(effective_psd(src, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(effective_psd(src, 2.0), 0.0);
  const auto clean = NoisySource::white(Psd::triangle(1.0), 0.0);
  for (double f : {-0.9, -0.2, 0.0, 0.4, 1.3}) EXPECT_DOUBLE_EQ(effective_psd(clean, f), Psd::triangle(1.0)(f));
  EXPECT_THROW(NoisySource::white(Psd::rect(0.5), -1.0), ConfigError);
}

TEST(EffectivePsd, BoundedBySignal) {
  const auto tri = Psd::triangle(1.0);
  const auto src = NoisySource(tri, Psd::gauss_markov(0.5));
  for (double f = -1.2; f <= 1.2; f += 0.01) EXPECT_LE(effective_psd(src, f), tri(f));
}

TEST(EffectivePsd, WhiteSuperlevelMatchesScan) {
  const auto src = NoisySource::white(Psd::triangle(1.0), 0.3);
  const auto& eff = src.effective();
  for (double theta : {0.05, 0.2, 0.5}) {
    // Bisection on the monotone map s -> s^2/(s+n) along f >= 0.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (lo + hi);
      (eff(m) > theta ? lo : hi) = m;
    }
    EXPECT_NEAR(eff.superlevel_set(theta).measure(), 2.0 * lo, 1e-12);
  }
}

TEST(EffectivePsd, ColoredNoiseSuperlevelIsConsistent) {
  const auto src = NoisySource(Psd::triangle(1.0), Psd::tabulated({0.0, 0.2, 0.3, 0.4, 1.0}, {0.0, 0.0, 5.0, 0.0, 0.0}));
  const auto& eff = src.effective();
  // The noise bump at |f| = 0.3 punches a hole into each side.
  const auto set = eff.superlevel_set(0.3);
  EXPECT_EQ(set.size(), 3u);
  for (double f = -1.0; f <= 1.0; f += 0.001) {
    if (std::abs(eff(f) - 0.3) < 1e-6) continue;
    EXPECT_EQ(set.contains(f), eff(f) > 0.3) << f;
  }
}

TEST(DtIdrf, ZeroNoiseIsDirectDrf) {
  const auto tri = Psd::triangle(1.0);
  const auto src = NoisySource::white(tri, 0.0);
  for (double r : {0.3, 1.0, 4.0}) EXPECT_NEAR(dt_idrf(src, r).distortion, drf(tri, r), 1e-8);
}

TEST(DtIdrf, ZeroRateAndLimits) {
  const auto src = NoisySource::white(Psd::gauss_markov(1.0), 0.2);
  EXPECT_NEAR(dt_idrf(src, 0.0).distortion, 1.0, 1e-10);
  EXPECT_NEAR(dt_idrf(src, 60.0).distortion, src.mmse_floor(), 1e-4);
  for (double r : {0.5, 2.0}) EXPECT_GT(dt_idrf(src, r).distortion, drf(src.signal(), r));
}

TEST(DtIdrf, AgreesWithDirectIntegration) {
  // Triangle + white noise 0.25 at R = 1: D = (1 - int S_eff) + int min(S_eff, theta),
  // evaluated here by Simpson on the effective PSD at the solver's theta.
  const auto tri = Psd::triangle(1.0);
  const auto src = NoisySource::white(tri, 0.25);
  const auto p = dt_idrf(src, 1.0);
  auto eff = [&](double f) { return tri(f) * tri(f) / (tri(f) + 0.25); };
  const double power = oracle::simpson(eff, -1.0, 1.0, 40000);
  const double wf = oracle::simpson([&](double f) { return std::min(eff(f), p.theta); }, -1.0, 1.0, 40000);
  EXPECT_NEAR(p.distortion, (1.0 - power) + wf, 1e-8);
  EXPECT_NEAR(oracle::grid_waterfill(eff, -1.0, 1.0, p.theta, 0.0, 400000).rate, 1.0, 1e-6);
}

TEST(NoisySampledDrf, Reductions) {
  const auto tri = Psd::triangle(1.0);
  const auto clean = NoisySource::white(tri, 0.0);
  for (double fs : {0.4, 1.0, 2.5})
    EXPECT_NEAR(noisy_sampled_drf(clean, fs, 1.0).distortion, sampled_drf(tri, fs, 1.0).distortion, 1e-8);

  const auto src = NoisySource::white(tri, 0.5);
  const auto c = noisy_fdr(src, 1.0);
  for (double k : {1.0, 1.3}) EXPECT_NEAR(noisy_sampled_drf(src, k * c.f_dr, 1.0).distortion, dt_idrf(src, 1.0).distortion, 1e-7);

  // Unlimited rate leaves the variance minus the effective energy on F*.
  const auto big = noisy_sampled_drf(src, 0.7, 60.0);
  const double cap = 1.0 - energy_on(src.effective(), optimal_fstar(src.effective(), 0.7));
  EXPECT_NEAR(big.distortion, cap, 1e-6);
  EXPECT_NEAR(big.mmse_component, cap, 1e-12);
}

TEST(NoisySampledDrf, MonotoneInSamplingRateAndRate) {
  const auto src = NoisySource::white(Psd::gauss_markov(1.0), 0.1);
  double prev = 2.0;
  for (double fs = 0.1; fs <= 4.0; fs += 0.2) {
    const double d = noisy_sampled_drf(src, fs, 1.0).distortion;
    EXPECT_LE(d, prev + 1e-12);
    prev = d;
  }
  prev = 2.0;
  for (double r = 0.0; r <= 4.0; r += 0.5) {
    const double d = noisy_sampled_drf(src, 0.8, r).distortion;
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(NoisyFdr, DecreasesWithNoise) {
  const auto tri = Psd::triangle(1.0);
  EXPECT_NEAR(noisy_fdr(NoisySource::white(tri, 0.0), (std::numbers::ln2 - 0.5) / std::numbers::ln2).f_dr, 1.0, 1e-9);
  for (double r : {0.5, 1.0, 2.0}) {
    const double clean = fdr_from_rate(tri, r).f_dr;
    double prev = std::numeric_limits<double>::infinity();
    for (double n : {0.0, 0.1, 0.5, 1.0, 5.0, 50.0}) {
      const double f = noisy_fdr(NoisySource::white(tri, n), r).f_dr;
      EXPECT_LT(f, prev);
      EXPECT_LE(f, clean + 1e-12);
      prev = f;
    }
  }
}

}  // namespace
}  // namespace subnyq
