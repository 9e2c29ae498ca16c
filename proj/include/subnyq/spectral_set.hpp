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
#include <initializer_list>
#include <limits>
#include <ostream>
#include <vector>

namespace subnyq {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] bool contains(double f) const { return f >= lo && f <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of disjoint closed frequency intervals, kept sorted.
///
/// Degenerate (zero-length) pieces are dropped and touching pieces merged on
/// construction, so two sets describing the same point set compare equal.
class SpectralSet {
 public:
  SpectralSet() = default;
  SpectralSet(std::initializer_list<Interval> pieces) : SpectralSet(std::vector<Interval>(pieces)) {}
  explicit SpectralSet(std::vector<Interval> pieces) : intervals_(std::move(pieces)) { normalize(); }

  static SpectralSet real_line() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return SpectralSet{{-inf, inf}};
  }
  static SpectralSet symmetric(double half_width) {
    if (!(half_width > 0.0)) return {};
    return SpectralSet{{-half_width, half_width}};
  }

  [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }
  [[nodiscard]] bool empty() const { return intervals_.empty(); }
  [[nodiscard]] std::size_t size() const { return intervals_.size(); }

  [[nodiscard]] double measure() const {
    double m = 0.0;
    for (const auto& iv : intervals_) m += iv.length();
    return m;
  }

  [[nodiscard]] bool contains(double f) const {
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [f](const Interval& iv) { return iv.contains(f); });
  }

  [[nodiscard]] bool is_bounded() const {
    return empty() || (std::isfinite(intervals_.front().lo) && std::isfinite(intervals_.back().hi));
  }

  /// Smallest interval containing the set; {0, 0} for the empty set.
  [[nodiscard]] Interval hull() const {
    if (empty()) return {};
    return {intervals_.front().lo, intervals_.back().hi};
  }

  [[nodiscard]] SpectralSet mirrored() const {
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (const auto& iv : intervals_) out.push_back({-iv.hi, -iv.lo});
    return SpectralSet(std::move(out));
  }

  [[nodiscard]] bool is_symmetric(double tol = 1e-12) const {
    const auto m = mirrored();
    if (m.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (std::abs(m.intervals_[i].lo - intervals_[i].lo) > tol ||
          std::abs(m.intervals_[i].hi - intervals_[i].hi) > tol)
        return false;
    }
    return true;
  }

  friend SpectralSet set_union(const SpectralSet& a, const SpectralSet& b) {
    std::vector<Interval> all = a.intervals_;
    all.insert(all.end(), b.intervals_.begin(), b.intervals_.end());
    return SpectralSet(std::move(all));
  }

  friend SpectralSet set_intersection(const SpectralSet& a, const SpectralSet& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const auto& x = a.intervals_[i];
      const auto& y = b.intervals_[j];
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (hi > lo) out.push_back({lo, hi});
      if (x.hi < y.hi) ++i; else ++j;
    }
    return SpectralSet(std::move(out));
  }

  /// a \ b, up to the (measure-zero) boundary points of b.
  friend SpectralSet set_difference(const SpectralSet& a, const SpectralSet& b) {
    std::vector<Interval> out;
    for (const auto& x : a.intervals_) {
      double cursor = x.lo;
      for (const auto& y : b.intervals_) {
        if (y.hi <= cursor) continue;
        if (y.lo >= x.hi) break;
        if (y.lo > cursor) out.push_back({cursor, y.lo});
        cursor = std::max(cursor, y.hi);
        if (cursor >= x.hi) break;
      }
      if (cursor < x.hi) out.push_back({cursor, x.hi});
    }
    return SpectralSet(std::move(out));
  }

  friend double symmetric_difference_measure(const SpectralSet& a, const SpectralSet& b) {
    return set_difference(a, b).measure() + set_difference(b, a).measure();
  }

  friend bool operator==(const SpectralSet&, const SpectralSet&) = default;

  friend std::ostream& operator<<(std::ostream& os, const SpectralSet& s) {
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) os << " U ";
      os << '[' << s.intervals_[i].lo << ", " << s.intervals_[i].hi << ']';
    }
    return os << '}';
  }

 private:
  void normalize() {
    std::erase_if(intervals_, [](const Interval& iv) { return !(iv.hi > iv.lo); });
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    merged.reserve(intervals_.size());
    for (const auto& iv : intervals_) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    intervals_ = std::move(merged);
  }

  std::vector<Interval> intervals_;
};

/// True when the integer shifts of `set` by `period` are pairwise disjoint
/// (up to measure zero), i.e. uniform sampling at 1/period does not alias it.
inline bool is_aliasing_free(const SpectralSet& set, double period, double tol = 1e-10) {
  if (!(period > 0.0)) return false;
  if (!set.is_bounded()) return false;
  if (set.measure() > period + tol) return false;
  // Fold every interval into [0, period) and check the folded pieces do not overlap.
  std::vector<Interval> folded;
  for (const auto& iv : set.intervals()) {
    const double shift = std::floor(iv.lo / period) * period;
    double lo = iv.lo - shift;
    double hi = iv.hi - shift;
    if (hi <= period) {
      folded.push_back({lo, hi});
    } else {
      folded.push_back({lo, period});
      folded.push_back({0.0, hi - period});
    }
  }
  std::sort(folded.begin(), folded.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < folded.size(); ++i) {
    if (folded[i].lo < folded[i - 1].hi - tol) return false;
  }
  return true;
}

}  // namespace subnyq
