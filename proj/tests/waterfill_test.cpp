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
#include "subnyq/waterfill.hpp"

namespace subnyq {
namespace {

// Triangle f_B = 1 at theta = 0.5: R = (1/2) int_{-1/2}^{1/2} log2((1-|f|)/0.5) df
// = (ln 2 - 1/2) / ln 2 = 0.2786525...
const double kTriangleRate = (std::numbers::ln2 - 0.5) / std::numbers::ln2;

TEST(DrfFromTheta, FlatSpectrum) {
  const auto p = drf_from_theta(Psd::rect(0.5), 0.25);
  EXPECT_NEAR(p.rate, 1.0, 1e-12);
  EXPECT_NEAR(p.distortion, 0.25, 1e-12);
}

TEST(DrfFromTheta, TriangleAgainstClosedForm) {
  const auto p = drf_from_theta(Psd::triangle(1.0), 0.5);
  EXPECT_NEAR(p.rate, kTriangleRate, 1e-12);
  EXPECT_NEAR(p.rate, 0.27866, 1e-5);
  EXPECT_NEAR(p.distortion, 0.75, 1e-12);
}

TEST(DrfFromTheta, AgainstGridOracle) {
  const auto g = Psd::gauss_markov(1.0);
  for (double theta : {0.05, 0.2, 0.6}) {
    const double edge = g.superlevel_set(theta).intervals()[0].hi;
    const auto ref = oracle::grid_waterfill([&](double f) { return g(f); }, -edge, edge, theta, 1.0);
    const auto p = drf_from_theta(g, theta);
    EXPECT_NEAR(p.rate, ref.rate, 1e-8);
    EXPECT_NEAR(p.distortion, ref.distortion, 1e-8);
  }
}

TEST(DrfFromTheta, AtEssSupNothingIsCoded) {
  for (const auto& p : {Psd::rect(0.5), Psd::triangle(2.0), Psd::gauss_markov(0.5)}) {
    const auto w = drf_from_theta(p, p.ess_sup());
    EXPECT_EQ(w.rate, 0.0);
    EXPECT_NEAR(w.distortion, p.variance(), 1e-14);
  }
  EXPECT_THROW(drf_from_theta(Psd::rect(0.5), 0.0), DomainError);
}

TEST(ThetaFromRate, Examples) {
  EXPECT_NEAR(theta_from_rate(Psd::rect(0.5), 1.0).theta, 0.25, 1e-9);
  EXPECT_NEAR(theta_from_rate(Psd::triangle(1.0), kTriangleRate).theta, 0.5, 1e-6);
  // The five-digit rate is off by 7.5e-6 bits; dtheta/dR = -2 ln2 theta / |F| here.
  EXPECT_NEAR(theta_from_rate(Psd::triangle(1.0), 0.27866).theta, 0.5, 1e-5);
  for (const auto& p : {Psd::rect(0.5), Psd::triangle(1.0), Psd::gauss_markov(1.0)}) {
    EXPECT_DOUBLE_EQ(theta_from_rate(p, 0.0).distortion, p.variance());
  }
  EXPECT_THROW(theta_from_rate(Psd::rect(0.5), -1.0), DomainError);
  EXPECT_THROW(theta_from_rate(Psd::rect(0.5), std::numeric_limits<double>::infinity()), DomainError);
}

TEST(ThetaFromRate, RoundTripIsIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& p : {Psd::triangle(1.0), Psd::gauss_markov(1.0), Psd::triangle(0.3),
                        Psd::tabulated({0.0, 0.2, 0.5, 1.0}, {1.0, 0.9, 0.3, 0.0})}) {
    for (int i = 0; i < 40; ++i) {
      const double theta = p.ess_sup() * (0.01 + 0.99 * u(rng));
      const auto fwd = drf_from_theta(p, theta);
      if (fwd.rate == 0.0) continue;
      const auto back = theta_from_rate(p, fwd.rate);
      EXPECT_NEAR(back.theta / theta, 1.0, 1e-6) << p.describe() << " theta=" << theta;
    }
  }
}

TEST(Drf, RectIsExponential) {
  const auto p = Psd::rect(0.5);
  for (double r = 0.0; r <= 10.0; r += 0.25) EXPECT_NEAR(drf(p, r), std::exp2(-r / 0.5), 1e-8) << r;
}

TEST(Drf, StrictlyDecreasingInRate) {
  for (const auto& p : {Psd::triangle(1.0), Psd::gauss_markov(1.0)}) {
    double prev = drf(p, 0.0);
    for (double r = 0.1; r <= 8.0; r += 0.1) {
      const double d = drf(p, r);
      EXPECT_LT(d, prev);
      prev = d;
    }
  }
}

TEST(WaterfillOn, RestrictedDomain) {
  const auto p = Psd::triangle(1.0);
  const SpectralSet band{{-0.4, 0.4}};
  const auto w = waterfill_on(p, 0.3, band);
  // Only the part of {S > theta} inside the band is coded.
  const double excess = oracle::simpson([&](double f) { return std::max(p(f) - 0.3, 0.0); }, -0.4, 0.4);
  EXPECT_NEAR(w.distortion, 1.0 - excess, 1e-10);
  EXPECT_EQ(w.domain, band);

  const auto solved = theta_from_rate(p, w.rate, band);
  EXPECT_NEAR(solved.theta, 0.3, 1e-8);
  EXPECT_THROW(theta_from_rate(p, 1.0, SpectralSet{{3.0, 4.0}}), DomainError);
}

TEST(WaterfillOn, BracketGrowsForLargeRates) {
  // theta ~ 2^{-2R/|F|} underflows the flat start only for extreme rates; a
  // moderate domain at R = 60 still converges.
  const auto p = Psd::gauss_markov(1.0);
  const auto w = theta_from_rate(p, 60.0, SpectralSet{{-2.0, 2.0}});
  EXPECT_NEAR(w.rate, 60.0, 1e-6);
  EXPECT_GT(w.theta, 0.0);
}

}  // namespace
}  // namespace subnyq
