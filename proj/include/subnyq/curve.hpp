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

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subnyq/errors.hpp"

// Curve data emitted by the command-line tool: labelled (x, y) series with
// free-form metadata, written as CSV or JSON.

namespace subnyq {

struct CurveSeries {
  std::string label;
  std::string x_name;
  std::string y_name;
  std::vector<std::pair<double, double>> points;
  std::map<std::string, std::string> metadata;

  /// Throws DomainError on a non-finite value or x not strictly increasing.
  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto [x, y] = points[i];
      if (!std::isfinite(x) || !std::isfinite(y))
        throw DomainError("series '" + label + "': non-finite value at point " + std::to_string(i));
      if (i > 0 && !(x > points[i - 1].first))
        throw DomainError("series '" + label + "': x is not strictly increasing");
    }
  }
};

/// `%.12g` without going through the C locale.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

/// `start:stop:step` (or a single value): start, start + step, ... while
/// below stop + step/2.
inline std::vector<double> parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return {parse_number(text)};
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
    throw ConfigError("grid must be start:stop:step");
  const double start = parse_number(text.substr(0, c1));
  const double stop = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = parse_number(text.substr(c2 + 1));
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("grid step must be positive");
  if (stop < start) throw ConfigError("grid stop lies below start");
  if ((stop - start) / step > 1e7) throw ConfigError("grid has too many points");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    double x = start + static_cast<double>(i) * step;
    if (!(x < stop + 0.5 * step)) break;
    if (std::abs(x - stop) <= 1e-9 * step) x = stop;  // absorb accumulated rounding
    out.push_back(x);
  }
  return out;
}

/// One `#` line per series carrying names and metadata, then a single
/// `series,x,y` table.
inline void write_csv(std::ostream& os, const std::vector<CurveSeries>& all) {
  for (const auto& s : all) {
    os << "# series=" << s.label << " x=" << s.x_name << " y=" << s.y_name;
    for (const auto& [k, v] : s.metadata) os << ' ' << k << '=' << v;
    os << '\n';
  }
  os << "series,x,y\n";
  for (const auto& s : all)
    for (const auto& [x, y] : s.points) os << s.label << ',' << format_number(x) << ',' << format_number(y) << '\n';
}

inline nlohmann::json to_json(const std::vector<CurveSeries>& all) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : all) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : s.points) pts.push_back({x, y});
    arr.push_back({{"label", s.label},
                   {"x_name", s.x_name},
                   {"y_name", s.y_name},
                   {"metadata", s.metadata},
                   {"points", std::move(pts)}});
  }
  return {{"series", std::move(arr)}};
}

inline void write_json(std::ostream& os, const std::vector<CurveSeries>& all) { os << to_json(all).dump(2) << '\n'; }

inline std::vector<CurveSeries> read_json(std::string_view text) {
  std::vector<CurveSeries> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("series")) {
      CurveSeries s;
      s.label = j.at("label").get<std::string>();
      s.x_name = j.at("x_name").get<std::string>();
      s.y_name = j.at("y_name").get<std::string>();
      s.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
      for (const auto& p : j.at("points")) s.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed curve JSON: ") + e.what());
  }
  return out;
}

}  // namespace subnyq
