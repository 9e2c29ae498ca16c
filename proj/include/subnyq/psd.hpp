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
#include <charconv>
#include <cmath>
#include <concepts>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/quadrature.hpp"
#include "subnyq/spectral_set.hpp"

namespace subnyq {

/// Anything the waterfilling machinery can run on: a symmetric, nonnegative
/// spectral density with a computable superlevel set.
template <class S>
concept SpectralDensity = requires(const S& s, double f, double theta) {
  { s(f) } -> std::convertible_to<double>;
  { s.superlevel_set(theta) } -> std::same_as<SpectralSet>;
  { s.support() } -> std::convertible_to<SpectralSet>;
  { s.variance() } -> std::convertible_to<double>;
  { s.ess_sup() } -> std::convertible_to<double>;
  { s.landau_rate() } -> std::convertible_to<double>;
  { s.breakpoints() } -> std::convertible_to<std::span<const double>>;
};

enum class PsdKind { Rect, Triangle, GaussMarkov, Tabulated };

namespace models {

/// S(f) = 1/(2 f_B) on |f| <= f_B.
struct Rect {
  double f_b;
};

/// S(f) = (1/f_B) [1 - |f/f_B|]^+.
struct Triangle {
  double f_b;
};

/// S(f) = (1/f_0) / ((pi f / f_0)^2 + 1).
struct GaussMarkov {
  double f_0;
};

/// Piecewise-linear density on a sorted grid, zero off-grid.
struct Tabulated {
  std::vector<double> f;
  std::vector<double> s;
};

}  // namespace models

/// Power spectral density of a real stationary process.
///
/// Immutable after construction. The three analytic models are normalized to
/// unit variance; tabulated densities carry whatever power the table holds.
class Psd {
 public:
  static Psd rect(double f_b) {
    require_positive(f_b, "rect bandwidth f_B");
    return Psd(models::Rect{f_b});
  }
  static Psd triangle(double f_b) {
    require_positive(f_b, "triangle bandwidth f_B");
    return Psd(models::Triangle{f_b});
  }
  static Psd gauss_markov(double f_0) {
    require_positive(f_0, "Gauss-Markov corner f_0");
    return Psd(models::GaussMarkov{f_0});
  }

  /// Builds a tabulated density. A table with f >= 0 throughout is one-sided
  /// and mirrored to S(-f) = S(f); any other table is symmetrized by
  /// averaging S(f) and S(-f) (each linearly interpolated, zero off-grid).
  /// The average is taken at the mirrored grid points, so it is exact when
  /// the table starts and ends at zero.
  static Psd tabulated(std::vector<double> f, std::vector<double> s) {
    if (f.empty() || f.size() != s.size()) throw ConfigError("tabulated PSD: empty grid or size mismatch");
    if (f.size() < 2) throw ConfigError("tabulated PSD: need at least two grid points");
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!std::isfinite(f[i]) || !std::isfinite(s[i])) throw ConfigError("tabulated PSD: non-finite value");
      if (s[i] < 0.0) throw ConfigError("tabulated PSD: negative density");
      if (i > 0 && !(f[i] > f[i - 1])) throw ConfigError("tabulated PSD: frequencies must be strictly increasing");
    }
    models::Tabulated raw{std::move(f), std::move(s)};
    const bool one_sided = raw.f.front() >= 0.0;
    std::vector<double> grid;
    grid.reserve(2 * raw.f.size());
    for (double x : raw.f) {
      grid.push_back(x);
      grid.push_back(-x);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      vals[i] = one_sided ? interpolate(raw, std::abs(grid[i]))
                          : 0.5 * (interpolate(raw, grid[i]) + interpolate(raw, -grid[i]));
    return Psd(models::Tabulated{std::move(grid), std::move(vals)});
  }

  /// Reads a `f,S` CSV file (header required, rows ascending in f).
  static Psd from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open PSD file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_csv_text(buf.str());
  }

  static Psd from_csv_text(std::string_view text) {
    std::vector<double> f, s;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++line_no;
      line = trim(line);
      if (line.empty()) continue;
      if (!header_seen) {
        if (line != "f,S") throw ConfigError("PSD file: expected header `f,S`");
        header_seen = true;
        continue;
      }
      const auto comma = line.find(',');
      if (comma == std::string_view::npos)
        throw ConfigError("PSD file line " + std::to_string(line_no) + ": expected two columns");
      f.push_back(parse_double(trim(line.substr(0, comma)), line_no));
      s.push_back(parse_double(trim(line.substr(comma + 1)), line_no));
    }
    if (!header_seen) throw ConfigError("PSD file: empty");
    return tabulated(std::move(f), std::move(s));
  }

  [[nodiscard]] PsdKind kind() const {
    return std::visit(
        [](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, models::Rect>) return PsdKind::Rect;
          else if constexpr (std::is_same_v<M, models::Triangle>) return PsdKind::Triangle;
          else if constexpr (std::is_same_v<M, models::GaussMarkov>) return PsdKind::GaussMarkov;
          else return PsdKind::Tabulated;
        },
        model_);
  }

  [[nodiscard]] const auto& model() const { return model_; }

  double operator()(double f) const { return eval(f); }

  [[nodiscard]] double eval(double f) const {
    return std::visit(
        [f](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, models::Rect>) {
            return std::abs(f) <= m.f_b ? 0.5 / m.f_b : 0.0;
          } else if constexpr (std::is_same_v<M, models::Triangle>) {
            return std::max(0.0, 1.0 - std::abs(f / m.f_b)) / m.f_b;
          } else if constexpr (std::is_same_v<M, models::GaussMarkov>) {
            const double u = std::numbers::pi * f / m.f_0;
            return (1.0 / m.f_0) / (u * u + 1.0);
          } else {
            return interpolate(m, f);
          }
        },
        model_);
  }

  [[nodiscard]] double variance() const { return variance_; }
  [[nodiscard]] double ess_sup() const { return ess_sup_; }
  /// Lebesgue measure of the support; +inf for Gauss-Markov.
  [[nodiscard]] double landau_rate() const { return support_.measure(); }
  [[nodiscard]] const SpectralSet& support() const { return support_; }
  [[nodiscard]] std::span<const double> breakpoints() const { return breakpoints_; }

  /// Characteristic frequency: f_B for bandlimited models, f_0 for
  /// Gauss-Markov, half the Landau rate for tables.
  [[nodiscard]] double frequency_scale() const {
    return std::visit(
        [this](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, models::GaussMarkov>) return m.f_0;
          else if constexpr (std::is_same_v<M, models::Tabulated>) return 0.5 * landau_rate();
          else return m.f_b;
        },
        model_);
  }

  /// Symmetric and non-increasing on f >= 0.
  [[nodiscard]] bool is_unimodal() const {
    if (const auto* t = std::get_if<models::Tabulated>(&model_)) {
      for (std::size_t i = 0; i + 1 < t->f.size(); ++i)
        if (t->f[i] >= 0.0 && t->s[i + 1] > t->s[i]) return false;
      return true;
    }
    return true;
  }

  /// {f : S(f) > theta}. Analytic for the closed-form models; exact linear
  /// crossings for tables.
  [[nodiscard]] SpectralSet superlevel_set(double theta) const {
    return std::visit(
        [theta](const auto& m) -> SpectralSet {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, models::Rect>) {
            return theta < 0.5 / m.f_b ? SpectralSet::symmetric(m.f_b) : SpectralSet{};
          } else if constexpr (std::is_same_v<M, models::Triangle>) {
            return SpectralSet::symmetric(m.f_b * (1.0 - m.f_b * std::max(theta, 0.0)));
          } else if constexpr (std::is_same_v<M, models::GaussMarkov>) {
            if (theta <= 0.0) return SpectralSet::real_line();
            const double arg = 1.0 / (theta * m.f_0) - 1.0;
            if (!(arg > 0.0)) return {};
            return SpectralSet::symmetric(m.f_0 / std::numbers::pi * std::sqrt(arg));
          } else {
            return tabulated_superlevel(m, theta);
          }
        },
        model_);
  }

  /// Closed-form upper tail integral_a^inf S(f) df, a >= 0.
  [[nodiscard]] double upper_tail(double a) const {
    a = std::abs(a);
    return std::visit(
        [a, this](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, models::Rect>) {
            return a >= m.f_b ? 0.0 : 0.5 * (m.f_b - a) / m.f_b;
          } else if constexpr (std::is_same_v<M, models::Triangle>) {
            const double r = std::max(0.0, 1.0 - a / m.f_b);
            return 0.5 * r * r;
          } else if constexpr (std::is_same_v<M, models::GaussMarkov>) {
            return 0.5 * (1.0 - 2.0 / std::numbers::pi * std::atan(std::numbers::pi * a / m.f_0));
          } else {
            const auto hull = support_.hull();
            if (a >= hull.hi) return 0.0;
            return quadrature::integrate([this](double x) { return eval(x); }, a, hull.hi, breakpoints_);
          }
        },
        model_);
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    std::visit(
        [&os](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, models::Rect>) os << "rect(fb=" << m.f_b << ")";
          else if constexpr (std::is_same_v<M, models::Triangle>) os << "triangle(fb=" << m.f_b << ")";
          else if constexpr (std::is_same_v<M, models::GaussMarkov>) os << "gauss-markov(f0=" << m.f_0 << ")";
          else os << "tabulated(points=" << m.f.size() << ")";
        },
        model_);
    return os.str();
  }

 private:
  using Model = std::variant<models::Rect, models::Triangle, models::GaussMarkov, models::Tabulated>;

  explicit Psd(Model m) : model_(std::move(m)) {
    std::visit(
        [this](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          constexpr double inf = std::numeric_limits<double>::infinity();
          if constexpr (std::is_same_v<M, models::Rect>) {
            variance_ = 1.0;
            ess_sup_ = 0.5 / m.f_b;
            support_ = SpectralSet::symmetric(m.f_b);
            breakpoints_ = {-m.f_b, m.f_b};
          } else if constexpr (std::is_same_v<M, models::Triangle>) {
            variance_ = 1.0;
            ess_sup_ = 1.0 / m.f_b;
            support_ = SpectralSet::symmetric(m.f_b);
            breakpoints_ = {-m.f_b, 0.0, m.f_b};
          } else if constexpr (std::is_same_v<M, models::GaussMarkov>) {
            variance_ = 1.0;
            ess_sup_ = 1.0 / m.f_0;
            support_ = SpectralSet{{-inf, inf}};
          } else {
            double v = 0.0;
            for (std::size_t i = 0; i + 1 < m.f.size(); ++i) v += 0.5 * (m.s[i] + m.s[i + 1]) * (m.f[i + 1] - m.f[i]);
            variance_ = v;
            ess_sup_ = *std::max_element(m.s.begin(), m.s.end());
            support_ = tabulated_superlevel(m, 0.0);
            breakpoints_ = m.f;
          }
        },
        model_);
    if (!(ess_sup_ > 0.0)) throw ConfigError("PSD is identically zero");
  }

  static void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(what) + " must be a positive finite number");
  }

  static double interpolate(const models::Tabulated& t, double x) {
    if (x < t.f.front() || x > t.f.back()) return 0.0;
    const auto it = std::upper_bound(t.f.begin(), t.f.end(), x);
    if (it == t.f.end()) return t.s.back();
    const auto i = static_cast<std::size_t>(it - t.f.begin());
    const double x0 = t.f[i - 1], x1 = t.f[i];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * t.s[i - 1] + w * t.s[i];
  }

  static SpectralSet tabulated_superlevel(const models::Tabulated& t, double theta) {
    std::vector<Interval> pieces;
    for (std::size_t i = 0; i + 1 < t.f.size(); ++i) {
      const double x0 = t.f[i], x1 = t.f[i + 1];
      const double y0 = t.s[i], y1 = t.s[i + 1];
      const bool a = y0 > theta, b = y1 > theta;
      if (a && b) {
        pieces.push_back({x0, x1});
      } else if (a) {
        pieces.push_back({x0, x0 + (y0 - theta) / (y0 - y1) * (x1 - x0)});
      } else if (b) {
        pieces.push_back({x1 - (y1 - theta) / (y1 - y0) * (x1 - x0), x1});
      }
    }
    return SpectralSet(std::move(pieces));
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  static double parse_double(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw ConfigError("PSD file line " + std::to_string(line_no) + ": bad number `" + std::string(s) + "`");
    if (std::isnan(v)) throw ConfigError("PSD file line " + std::to_string(line_no) + ": NaN");
    return v;
  }

  Model model_;
  double variance_ = 0.0;
  double ess_sup_ = 0.0;
  SpectralSet support_;
  std::vector<double> breakpoints_;
};

static_assert(SpectralDensity<Psd>);

/// integral over `set` of S(f) df.
template <SpectralDensity S>
double energy_on(const S& psd, const SpectralSet& set) {
  return quadrature::integrate([&psd](double f) { return psd(f); }, set, psd.breakpoints());
}

/// A periodic sampling set: {offset + k * period : k in Z, offset in offsets}.
class PeriodicSamplingSet {
 public:
  PeriodicSamplingSet(double period, std::vector<double> offsets)
      : period_(period), rate_(1.0 / period), offsets_(std::move(offsets)) {
    if (!(period_ > 0.0) || !std::isfinite(period_)) throw ConfigError("sampling period must be positive");
    if (offsets_.empty()) throw ConfigError("sampling set needs at least one offset per period");
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
      if (!(offsets_[i] >= 0.0 && offsets_[i] < period_)) throw ConfigError("sampling offsets must lie in [0, T)");
      if (i > 0 && !(offsets_[i] > offsets_[i - 1])) throw ConfigError("sampling offsets must be strictly increasing");
    }
  }

  /// Uniform grid Z / f_s.
  static PeriodicSamplingSet uniform(double f_s) {
    PeriodicSamplingSet set(1.0 / f_s, {0.0});
    set.rate_ = f_s;
    return set;
  }

  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] const std::vector<double>& offsets() const { return offsets_; }
  /// Periods per unit time, 1/T.
  [[nodiscard]] double repetition_rate() const { return rate_; }

 private:
  double period_;
  double rate_;
  std::vector<double> offsets_;
};

struct BeurlingDensity {
  double lower;
  double upper;
};

/// Lower and upper Beurling densities. For a periodic set both equal the
/// number of points per period divided by the period.
inline BeurlingDensity beurling_density(const PeriodicSamplingSet& set) {
  const double d = static_cast<double>(set.offsets().size()) * set.repetition_rate();
  return {d, d};
}

}  // namespace subnyq
