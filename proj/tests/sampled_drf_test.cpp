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
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "subnyq/sampled_drf.hpp"

namespace subnyq {
namespace {

using std::numbers::pi;

void expect_interval(const SpectralSet& s, double lo, double hi, double tol) {
  ASSERT_EQ(s.size(), 1u) << s;
  EXPECT_NEAR(s.intervals()[0].lo, lo, tol);
  EXPECT_NEAR(s.intervals()[0].hi, hi, tol);
}

Psd bimodal() { return Psd::tabulated({0.0, 0.4, 0.8, 1.2, 1.6, 2.0}, {0.3, 0.2, 0.9, 1.0, 0.5, 0.0}); }

TEST(OptimalFstar, UnimodalModels) {
  expect_interval(optimal_fstar(Psd::triangle(1.0), 1.0), -0.5, 0.5, 1e-12);
  expect_interval(optimal_fstar(Psd::rect(0.5), 2.0), -0.5, 0.5, 0.0);
  expect_interval(optimal_fstar(Psd::gauss_markov(1.0), 2.0 / pi), -1.0 / pi, 1.0 / pi, 1e-12);
  EXPECT_THROW(optimal_fstar(Psd::rect(0.5), 0.0), DomainError);
}

TEST(OptimalFstar, FlatSpectrumUsesPlateauSlices) {
  const auto f = optimal_fstar(Psd::rect(0.5), 0.4);
  EXPECT_NEAR(f.measure(), 0.4, 1e-10);
  EXPECT_TRUE(f.is_symmetric(1e-12));
}

TEST(OptimalFstar, PlateauIsCarvedSymmetrically) {
  const auto p = Psd::tabulated({0.0, 0.2, 0.6, 1.0}, {1.0, 0.5, 0.5, 0.0});
  const auto f = optimal_fstar(p, 0.8);
  EXPECT_NEAR(f.measure(), 0.8, 1e-10);
  EXPECT_TRUE(f.is_symmetric(1e-9));
  EXPECT_NEAR(energy_on(p, f), oracle::grid_best_energy([&](double x) { return p(x); }, -1.0, 1.0, 0.8), 1e-5);
}

TEST(OptimalFstar, NonUnimodalAgainstGridOracle) {
  const auto p = bimodal();
  for (double fs : {0.3, 0.8, 1.5, 2.5, 3.5}) {
    const auto f = optimal_fstar(p, fs);
    EXPECT_LE(f.measure(), fs + 1e-10);
    EXPECT_TRUE(f.is_symmetric(1e-9));
    EXPECT_NEAR(energy_on(p, f), oracle::grid_best_energy([&](double x) { return p(x); }, -2.0, 2.0, fs), 1e-4) << fs;
  }
}

TEST(SubSamplingMmse, Examples) {
  // The tail beyond f_s/2 on each side: 1 - (2/pi) atan(pi f_s / (2 f_0)).
  EXPECT_NEAR(sub_sampling_mmse(Psd::gauss_markov(1.0), 1.0), 1.0 - oracle::gauss_markov_energy(1.0, 0.5), 1e-12);
  EXPECT_NEAR(sub_sampling_mmse(Psd::gauss_markov(1.0), 1.0), 0.360907073, 1e-9);
  EXPECT_NEAR(sub_sampling_mmse(Psd::rect(0.5), 1.0), 0.0, 1e-14);
  EXPECT_NEAR(sub_sampling_mmse(Psd::triangle(1.0), 1.0), 0.25, 1e-13);
}

TEST(SampledDrf, RectClosedForm) {
  const auto p = Psd::rect(0.5);
  EXPECT_NEAR(sampled_drf(p, 0.5, 1.0).distortion, 0.53125, 1e-12);
  EXPECT_NEAR(sampled_drf(p, 2.0, 1.0).distortion, 0.25, 1e-12);
  for (double fs : {0.1, 0.35, 0.9, 1.0, 1.7})
    for (double r : {0.3, 1.0, 3.0}) EXPECT_NEAR(sampled_drf(p, fs, r).distortion, oracle::rect_sampled_drf(0.5, fs, r), 1e-9);
}

TEST(SampledDrf, ZeroRateGivesVariance) {
  for (const auto& p : {Psd::rect(0.5), Psd::triangle(1.0), Psd::gauss_markov(1.0), bimodal()})
    for (double fs : {0.2, 1.0, 5.0}) EXPECT_NEAR(sampled_drf(p, fs, 0.0).distortion, p.variance(), 1e-13);
}

TEST(SampledDrf, InvariantsOnRandomGrid) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> fs_dist(0.05, 4.0), r_dist(0.0, 6.0);
  for (const auto& p : {Psd::triangle(1.0), Psd::gauss_markov(1.0), bimodal()}) {
    for (int i = 0; i < 40; ++i) {
      const double fs = fs_dist(rng), r = r_dist(rng);
      const auto res = sampled_drf(p, fs, r);
      EXPECT_LE(res.fstar.measure(), fs + 1e-10);
      EXPECT_NEAR(res.distortion, res.mmse_component + waterfilling_term(p, res), 1e-8);
      EXPECT_LE(res.mmse_component, res.distortion + 1e-12);
      EXPECT_LE(res.distortion, p.variance() + 1e-12);
      EXPECT_GE(res.distortion, drf(p, r) - 1e-9);
    }
  }
}

TEST(SampledDrf, MonotoneInSamplingRateAndRate) {
  for (const auto& p : {Psd::triangle(1.0), Psd::gauss_markov(1.0)}) {
    double prev = 2.0;
    for (double fs = 0.1; fs <= 4.0; fs += 0.1) {
      const double d = sampled_drf(p, fs, 1.5).distortion;
      EXPECT_LE(d, prev + 1e-12);
      prev = d;
    }
    prev = 2.0;
    for (double r = 0.0; r <= 5.0; r += 0.25) {
      const double d = sampled_drf(p, 0.7, r).distortion;
      EXPECT_LT(d, prev);
      prev = d;
    }
  }
}

TEST(SampledDrf, LargeRateApproachesSamplingMmse) {
  for (const auto& p : {Psd::rect(0.5), Psd::triangle(1.0)})
    for (double fs : {0.3, 0.8, 1.5})
      EXPECT_NEAR(sampled_drf(p, fs, 40.0).distortion, sub_sampling_mmse(p, fs), 1e-6);
}

TEST(SampledRate, InverseOnTriangle) {
  const auto p = Psd::triangle(1.0);
  const auto inv = sampled_rate(p, 0.8, 0.5);
  // D = mmse + 0.8 theta with mmse = 0.36 while theta stays below S on F*.
  EXPECT_NEAR(inv.mmse_component, 0.36, 1e-12);
  EXPECT_NEAR(inv.theta, 0.175, 1e-10);
  EXPECT_NEAR(sampled_drf(p, 0.8, inv.rate).distortion, 0.5, 1e-6);
  EXPECT_THROW(sampled_rate(p, 0.8, 0.3), DomainError);
  EXPECT_THROW(sampled_rate(p, 0.8, 1.5), DomainError);
}

TEST(Multibranch, SingleBranchUnimodal) {
  const auto tri = multibranch_plan(Psd::triangle(1.0), 1.0, 1);
  ASSERT_EQ(tri.passbands.size(), 1u);
  expect_interval(tri.passbands[0], -0.5, 0.5, 1e-12);
  const auto rect = multibranch_plan(Psd::rect(0.5), 1.0, 1);
  expect_interval(rect.passbands[0], -0.5, 0.5, 1e-12);

  const double r = (std::numbers::ln2 - 0.5) / std::numbers::ln2;
  EXPECT_NEAR(multibranch_drf(Psd::triangle(1.0), tri, r), 0.75, 1e-9);
  EXPECT_DOUBLE_EQ(multibranch_drf(Psd::triangle(1.0), tri, 0.0), 1.0);
}

TEST(Multibranch, PassbandsAreAliasingFree) {
  for (const auto& p : {Psd::gauss_markov(1.0), bimodal(), Psd::triangle(1.0)}) {
    for (int branches : {1, 2, 3, 8}) {
      const auto plan = multibranch_plan(p, 1.2, branches);
      EXPECT_DOUBLE_EQ(plan.branch_rate, 1.2 / branches);
      for (const auto& band : plan.passbands) {
        EXPECT_LE(band.measure(), plan.branch_rate + 1e-10);
        EXPECT_TRUE(is_aliasing_free(band, plan.branch_rate));
      }
    }
  }
}

TEST(Multibranch, ConvergesFromAboveAndCapturesMoreEnergy) {
  for (const auto& p : {Psd::gauss_markov(1.0), bimodal()}) {
    const double target = sampled_drf(p, 1.0, 1.0).distortion;
    double prev_d = 2.0, prev_e = 0.0;
    for (int branches : {1, 2, 4, 8, 16, 32}) {
      const auto plan = multibranch_plan(p, 1.0, branches);
      const double d = multibranch_drf(p, plan, 1.0);
      const double e = captured_energy(p, plan);
      EXPECT_GE(d, target - 1e-9);
      EXPECT_LE(d, prev_d + 1e-9);
      EXPECT_GE(e, prev_e - 1e-9);
      prev_d = d;
      prev_e = e;
    }
    EXPECT_LE(prev_d, target * 1.01);
  }
}

TEST(Multibranch, ExtraBranchesHelpForBimodalSpectra) {
  const auto p = bimodal();
  const double one = multibranch_drf(p, multibranch_plan(p, 1.0, 1), 2.0);
  const double four = multibranch_drf(p, multibranch_plan(p, 1.0, 4), 2.0);
  EXPECT_LT(four, one - 1e-3);
}

TEST(Multibranch, RejectsBadArguments) {
  EXPECT_THROW(multibranch_plan(Psd::rect(0.5), 1.0, 0), DomainError);
  EXPECT_THROW(multibranch_plan(Psd::rect(0.5), -1.0, 1), DomainError);
}

}  // namespace
}  // namespace subnyq
