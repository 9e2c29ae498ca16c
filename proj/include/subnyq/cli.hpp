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
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subnyq/curve.hpp"
#include "subnyq/subnyq.hpp"

// Command-line front end. Every subcommand evaluates one operation over a
// grid and prints the resulting curves.

namespace subnyq::cli {

struct Options {
  std::string psd = "rect";
  double fb = 0.5;
  double f0 = 1.0;
  double rate = 1.0;
  double fs = 1.0;
  std::string rate_grid;
  std::string fs_grid;
  std::string noise_var = "0";
  int branches = 0;
  std::optional<double> c0;
  bool exact_sigma_in = false;
  bool closed_form = false;
  bool legacy = false;
  int cells = 4096;
  std::string format = "csv";
  std::string out;
  bool normalize = false;
  std::string figure;
};

inline Psd make_psd(const Options& o) {
  if (o.psd == "rect") return Psd::rect(o.fb);
  if (o.psd == "triangle") return Psd::triangle(o.fb);
  if (o.psd == "gauss-markov") return Psd::gauss_markov(o.f0);
  if (o.psd.rfind("file:", 0) == 0) return Psd::from_csv(o.psd.substr(5));
  throw ConfigError("unknown --psd '" + o.psd + "' (rect, triangle, gauss-markov, file:PATH)");
}

inline std::vector<double> grid_or(const std::string& grid, const std::string& fallback) {
  return parse_grid(grid.empty() ? fallback : grid);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string_view rest = s;
  while (true) {
    const auto c = rest.find(',');
    out.push_back(parse_number(rest.substr(0, c)));
    if (c == std::string_view::npos) break;
    rest.remove_prefix(c + 1);
  }
  return out;
}

inline CurveSeries sweep(std::string label, std::string x_name, std::string y_name, const std::vector<double>& xs,
                         const std::function<double(double)>& f) {
  CurveSeries s{std::move(label), std::move(x_name), std::move(y_name), {}, {}};
  s.points.reserve(xs.size());
  for (double x : xs) s.points.emplace_back(x, f(x));
  return s;
}

/// Rescales the x axis to f_s / (2 f_B) when --normalize is set.
inline void normalize_fs(CurveSeries& s, const Psd& psd, bool on) {
  if (!on) return;
  const double scale = 2.0 * psd.frequency_scale();
  for (auto& p : s.points) p.first /= scale;
  s.x_name = "f_s/(2f_B)";
  s.metadata["x_scale"] = format_number(scale);
}

inline std::string num(double v) { return format_number(v); }

// ---------------------------------------------------------------------------
// Subcommands

inline std::vector<CurveSeries> cmd_drf(const Options& o) {
  const auto psd = make_psd(o);
  auto s = sweep("drf", "R [bits/time]", "D", grid_or(o.rate_grid, "0:4:0.1"), [&](double r) { return drf(psd, r); });
  s.metadata["psd"] = psd.describe();
  return {s};
}

inline std::vector<CurveSeries> cmd_idrf(const Options& o) {
  const auto psd = make_psd(o);
  auto value = [&](double f_s, double r) {
    if (o.branches > 0) return multibranch_drf(psd, multibranch_plan(psd, f_s, o.branches), r);
    return sampled_drf(psd, f_s, r).distortion;
  };
  const std::string label = o.branches > 0 ? "idrf-P" + std::to_string(o.branches) : "idrf";
  CurveSeries s;
  if (!o.fs_grid.empty()) {
    s = sweep(label, "f_s", "D", parse_grid(o.fs_grid), [&](double f_s) { return value(f_s, o.rate); });
    s.metadata["rate"] = num(o.rate);
    normalize_fs(s, psd, o.normalize);
  } else {
    s = sweep(label, "R [bits/time]", "D", grid_or(o.rate_grid, "0:4:0.1"), [&](double r) { return value(o.fs, r); });
    s.metadata["fs"] = num(o.fs);
  }
  s.metadata["psd"] = psd.describe();
  if (o.branches > 0) s.metadata["branches"] = std::to_string(o.branches);
  return {s};
}

inline std::vector<CurveSeries> cmd_mmse(const Options& o) {
  const auto psd = make_psd(o);
  auto s = sweep("mmse", "f_s", "mmse", grid_or(o.fs_grid, "0.05:4:0.05"),
                 [&](double f_s) { return sub_sampling_mmse(psd, f_s); });
  s.metadata["psd"] = psd.describe();
  normalize_fs(s, psd, o.normalize);
  return {s};
}

inline std::vector<CurveSeries> cmd_fdr(const Options& o) {
  const auto psd = make_psd(o);
  const auto rates = grid_or(o.rate_grid, "0.05:4:0.05");
  std::vector<CurveSeries> out;
  out.push_back(sweep("fdr", "R [bits/time]", "f_DR", rates, [&](double r) { return fdr_from_rate(psd, r).f_dr; }));
  out.back().metadata["psd"] = psd.describe();

  auto closed = [&](bool legacy) {
    std::function<double(double, double)> g;
    const double scale = psd.frequency_scale();
    if (psd.kind() == PsdKind::Triangle)
      g = legacy ? closed_form::legacy::triangle_rate : closed_form::triangle_rate;
    else if (psd.kind() == PsdKind::GaussMarkov)
      g = legacy ? closed_form::legacy::gauss_markov_rate : closed_form::gauss_markov_rate;
    else
      throw ConfigError("closed forms exist only for triangle and gauss-markov");
    // The closed forms give R(f_DR); plot them on the same (R, f_DR) axes,
    // dropping points where the legacy form leaves its domain.
    CurveSeries s{legacy ? "legacy" : "closed-form", "R [bits/time]", "f_DR", {}, {}};
    std::size_t dropped = 0;
    for (const auto& pt : out.front().points) {
      const double f = pt.second;
      const double rr = g(scale, f);
      if (!std::isfinite(rr) || (!s.points.empty() && !(rr > s.points.back().first))) {
        ++dropped;
        continue;
      }
      s.points.emplace_back(rr, f);
    }
    s.metadata["psd"] = psd.describe();
    s.metadata["dropped"] = std::to_string(dropped);
    return s;
  };
  if (o.closed_form) out.push_back(closed(false));
  if (o.legacy) out.push_back(closed(true));
  return out;
}

inline std::vector<CurveSeries> cmd_noisy_fdr(const Options& o) {
  const auto psd = make_psd(o);
  const auto rates = grid_or(o.rate_grid, "0.05:4:0.05");
  std::vector<CurveSeries> out;
  for (double n : parse_list(o.noise_var)) {
    const auto src = NoisySource::white(psd, n);
    auto s = sweep("noise=" + num(n), "R [bits/time]", "f_DR", rates, [&](double r) { return noisy_fdr(src, r).f_dr; });
    s.metadata["psd"] = psd.describe();
    s.metadata["noise_var"] = num(n);
    out.push_back(std::move(s));
  }
  return out;
}

inline PcmConfig pcm_config(const Options& o, const Psd& psd) {
  auto c = PcmConfig::for_source(psd, o.rate);
  if (o.c0) c.c0 = *o.c0;
  c.exact_sigma_in = o.exact_sigma_in;
  c.validate();
  return c;
}

inline std::vector<CurveSeries> cmd_pcm(const Options& o) {
  const auto psd = make_psd(o);
  const auto cfg = pcm_config(o, psd);
  auto grid = o.fs_grid.empty() ? parse_grid("0.05:" + num(o.rate) + ":0.05") : parse_grid(o.fs_grid);
  // PCM needs at least one bit per sample.
  const auto clipped = std::erase_if(grid, [&](double f_s) { return f_s > o.rate; });
  auto pcm = sweep("pcm", "f_s", "D", grid, [&](double f_s) { return pcm_distortion(psd, cfg, f_s); });
  auto bound = sweep("idrf", "f_s", "D", grid, [&](double f_s) { return sampled_drf(psd, f_s, o.rate).distortion; });
  const auto best = optimal_pcm_fs(psd, cfg);
  for (auto* s : {&pcm, &bound}) {
    s->metadata["psd"] = psd.describe();
    s->metadata["rate"] = num(o.rate);
  }
  pcm.metadata["c0"] = num(cfg.c0);
  if (clipped > 0) pcm.metadata["clipped_above_rate"] = std::to_string(clipped);
  pcm.metadata["fs_star"] = num(best.f_s_star);
  pcm.metadata["d_star"] = num(best.distortion);
  bound.metadata["f_dr"] = num(fdr_from_rate(psd, o.rate).f_dr);
  normalize_fs(pcm, psd, o.normalize);
  normalize_fs(bound, psd, o.normalize);
  return {pcm, bound};
}

inline std::vector<CurveSeries> cmd_findim(const Options& o) {
  const auto psd = make_psd(o);
  if (o.cells < 2) throw ConfigError("--cells must be at least 2");
  const auto supp = psd.support();
  const Interval band = supp.is_bounded() ? supp.hull() : Interval{-50.0 * psd.frequency_scale(), 50.0 * psd.frequency_scale()};
  const auto disc = discretize_psd(psd, band, o.cells);
  const auto rates = grid_or(o.rate_grid, "0:4:0.1");
  auto oracle = sweep("oracle", "R [bits/time]", "D", rates, [&](double r) { return oracle_drf(disc, r).distortion; });
  auto cont = sweep("continuous", "R [bits/time]", "D", rates, [&](double r) { return drf(psd, r); });
  for (auto* s : {&oracle, &cont}) s->metadata["psd"] = psd.describe();
  oracle.metadata["cells"] = std::to_string(o.cells);
  oracle.metadata["band"] = "[" + num(band.lo) + "," + num(band.hi) + "]";
  return {oracle, cont};
}

// ---------------------------------------------------------------------------
// Figures. Parameters that the figures leave implicit are fixed here and
// reported in the metadata.

inline std::vector<CurveSeries> figure(const std::string& name) {
  const auto rect = Psd::rect(0.5);
  const auto tri = Psd::triangle(1.0);
  const auto gm = Psd::gauss_markov(1.0);

  if (name == "fig1") {
    // D(f_s, R), mmse(f_s) and D_X(R) against f_s for a triangle at R = 1.
    constexpr double r = 1.0;
    const auto fs = parse_grid("0.05:3:0.05");
    const double d_x = drf(tri, r);
    auto a = sweep("idrf", "f_s", "D", fs, [&](double f) { return sampled_drf(tri, f, r).distortion; });
    auto b = sweep("mmse", "f_s", "D", fs, [&](double f) { return sub_sampling_mmse(tri, f); });
    auto c = sweep("drf", "f_s", "D", fs, [&](double) { return d_x; });
    for (auto* s : {&a, &b, &c}) {
      s->metadata["psd"] = tri.describe();
      s->metadata["rate"] = num(r);
    }
    a.metadata["f_dr"] = num(fdr_from_rate(tri, r).f_dr);
    return {a, b, c};
  }
  if (name == "fig6") {
    const auto rates = parse_grid("0.05:6:0.05");
    std::vector<CurveSeries> out;
    for (const auto* p : {&rect, &tri, &gm}) {
      out.push_back(sweep(p->describe(), "R [bits/time]", "f_DR", rates, [&](double r) { return fdr_from_rate(*p, r).f_dr; }));
      out.back().metadata["psd"] = p->describe();
    }
    return out;
  }
  if (name == "fig8") {
    // f_DR against SNR = variance / noise level for a triangle, R = 1 and 2.
    const auto snr_db = parse_grid("-10:30:1");
    std::vector<CurveSeries> out;
    for (double r : {1.0, 2.0}) {
      auto s = sweep("R=" + num(r), "SNR [dB]", "f_DR", snr_db, [&](double db) {
        return noisy_fdr(NoisySource::white(tri, tri.variance() * std::pow(10.0, -db / 10.0)), r).f_dr;
      });
      s.metadata["psd"] = tri.describe();
      s.metadata["rate"] = num(r);
      s.metadata["noise_free_f_dr"] = num(fdr_from_rate(tri, r).f_dr);
      out.push_back(std::move(s));
    }
    return out;
  }
  if (name == "fig11") {
    constexpr double r = 4.0;
    const auto fs = parse_grid("0.05:4:0.05");
    std::vector<CurveSeries> out;
    for (const auto* p : {&rect, &tri, &gm}) {
      const auto cfg = PcmConfig::for_source(*p, r);
      const auto best = optimal_pcm_fs(*p, cfg);
      auto a = sweep("pcm " + p->describe(), "f_s", "D", fs, [&](double f) { return pcm_distortion(*p, cfg, f); });
      auto b = sweep("idrf " + p->describe(), "f_s", "D", fs, [&](double f) { return sampled_drf(*p, f, r).distortion; });
      for (auto* s : {&a, &b}) {
        s->metadata["psd"] = p->describe();
        s->metadata["rate"] = num(r);
        s->metadata["fs_star"] = num(best.f_s_star);
        s->metadata["f_dr"] = num(fdr_from_rate(*p, r).f_dr);
      }
      out.push_back(std::move(a));
      out.push_back(std::move(b));
    }
    return out;
  }
  if (name == "fig12" || name == "fig13") {
    const auto& p = name == "fig12" ? tri : gm;
    const auto rates = parse_grid("0.25:8:0.25");
    auto a = sweep("fs_star", "R [bits/time]", "f_s", rates,
                   [&](double r) { return optimal_pcm_fs(p, PcmConfig::for_source(p, r)).f_s_star; });
    auto b = sweep("f_dr", "R [bits/time]", "f_s", rates, [&](double r) { return fdr_from_rate(p, r).f_dr; });
    for (auto* s : {&a, &b}) s->metadata["psd"] = p.describe();
    return {a, b};
  }
  throw ConfigError("unknown figure '" + name + "' (fig1, fig6, fig8, fig11, fig12, fig13)");
}

// ---------------------------------------------------------------------------

inline void emit(const Options& o, const std::vector<CurveSeries>& series, std::ostream& out) {
  for (const auto& s : series) s.validate();
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file: " + o.out);
  }
  std::ostream& os = o.out.empty() ? out : file;
  if (o.format == "json") write_json(os, series);
  else write_csv(os, series);
}

/// Runs the tool on `args` (without the program name). Returns 0 on
/// success, 2 on argument errors and 1 on numerical failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Distortion-rate analysis of sub-Nyquist sampled Gaussian sources", "subnyq"};
  app.require_subcommand(1);

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--psd", o.psd, "rect | triangle | gauss-markov | file:PATH");
    sub->add_option("--fb", o.fb, "bandwidth of rect / triangle")->check(CLI::PositiveNumber);
    sub->add_option("--f0", o.f0, "corner frequency of gauss-markov")->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output file (default: stdout)");
  };

  auto* drf_cmd = app.add_subcommand("drf", "distortion-rate function D_X(R)");
  add_common(drf_cmd);
  drf_cmd->add_option("--rate-grid", o.rate_grid, "start:stop:step");

  auto* idrf_cmd = app.add_subcommand("idrf", "minimal distortion under sampling at f_s and rate R");
  add_common(idrf_cmd);
  idrf_cmd->add_option("--rate", o.rate)->check(CLI::NonNegativeNumber);
  idrf_cmd->add_option("--fs", o.fs)->check(CLI::PositiveNumber);
  idrf_cmd->add_option("--rate-grid", o.rate_grid);
  idrf_cmd->add_option("--fs-grid", o.fs_grid, "sweep f_s at fixed --rate instead of R");
  idrf_cmd->add_option("--branches", o.branches, "use a P-branch filter bank")->check(CLI::PositiveNumber);
  idrf_cmd->add_flag("--normalize", o.normalize, "plot f_s / (2 f_B)");

  auto* mmse_cmd = app.add_subcommand("mmse", "sampling MMSE against f_s");
  add_common(mmse_cmd);
  mmse_cmd->add_option("--fs-grid", o.fs_grid);
  mmse_cmd->add_flag("--normalize", o.normalize);

  auto* fdr_cmd = app.add_subcommand("fdr", "critical sampling frequency against R");
  add_common(fdr_cmd);
  fdr_cmd->add_option("--rate-grid", o.rate_grid);
  fdr_cmd->add_flag("--closed-form", o.closed_form, "add the analytic R(f_DR) curve");
  fdr_cmd->add_flag("--legacy", o.legacy, "add the legacy closed-form R(f_DR) curve");

  auto* noisy_cmd = app.add_subcommand("noisy-fdr", "critical frequency under additive white noise");
  add_common(noisy_cmd);
  noisy_cmd->add_option("--rate-grid", o.rate_grid);
  noisy_cmd->add_option("--noise-var", o.noise_var, "noise level(s), comma separated");

  auto* pcm_cmd = app.add_subcommand("pcm", "PCM distortion against f_s at fixed R");
  add_common(pcm_cmd);
  pcm_cmd->add_option("--rate", o.rate)->check(CLI::PositiveNumber);
  pcm_cmd->add_option("--fs-grid", o.fs_grid);
  pcm_cmd->add_option("--c0", o.c0, "quantizer noise constant")->check(CLI::PositiveNumber);
  pcm_cmd->add_flag("--exact-sigma-in", o.exact_sigma_in, "scale c0 by the in-band power");
  pcm_cmd->add_flag("--normalize", o.normalize);

  auto* findim_cmd = app.add_subcommand("findim", "discretized vector oracle against the continuous DRF");
  add_common(findim_cmd);
  findim_cmd->add_option("--rate-grid", o.rate_grid);
  findim_cmd->add_option("--cells", o.cells)->check(CLI::PositiveNumber);

  auto* fig_cmd = app.add_subcommand("figure", "curves of a named figure");
  fig_cmd->add_option("name", o.figure, "fig1 | fig6 | fig8 | fig11 | fig12 | fig13")->required();
  fig_cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  fig_cmd->add_option("--out", o.out);

  std::vector<std::string> argv_store{"subnyq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    std::vector<CurveSeries> series;
    if (*drf_cmd) series = cmd_drf(o);
    else if (*idrf_cmd) series = cmd_idrf(o);
    else if (*mmse_cmd) series = cmd_mmse(o);
    else if (*fdr_cmd) series = cmd_fdr(o);
    else if (*noisy_cmd) series = cmd_noisy_fdr(o);
    else if (*pcm_cmd) series = cmd_pcm(o);
    else if (*findim_cmd) series = cmd_findim(o);
    else series = figure(o.figure);
    emit(o, series, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace subnyq::cli
