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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/psd.hpp"

// Finite-dimensional counterpart: x ~ N(0, cov_x) observed as y = H x and
// described at `rate` bits. Doubles as a brute-force check of the spectral
// results once a PSD is discretized into a diagonal covariance.

namespace subnyq {

struct VectorSource {
  Eigen::MatrixXd cov_x;            ///< n x n, symmetric PSD
  Eigen::MatrixXd sampling_matrix;  ///< m x n, m <= n (m = 0 allowed)

  void validate() const {
    const auto n = cov_x.rows();
    if (cov_x.cols() != n) throw ConfigError("covariance must be square");
    if (sampling_matrix.cols() != n && sampling_matrix.rows() != 0)
      throw ConfigError("sampling matrix must have as many columns as the covariance");
    if (sampling_matrix.rows() > n) throw ConfigError("sampling matrix has more rows than the dimension");
    if (!cov_x.isApprox(cov_x.transpose(), 1e-12) && cov_x.size() > 0)
      throw ConfigError("covariance must be symmetric");
  }
};

struct VectorWaterfill {
  double rate = 0.0;
  double distortion = 0.0;
  double theta = 0.0;
};

namespace findim_detail {

/// Eigenvalues, descending, with tiny negative ones clamped to zero.
inline std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& x : ev) {
    if (x < -1e-10 * std::max(1.0, std::abs(ev.back()))) throw DomainError("covariance is not positive semidefinite");
    x = std::max(x, 0.0);
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

inline VectorWaterfill at_theta(const std::vector<double>& ev, double total, double theta) {
  VectorWaterfill w{0.0, total, theta};
  for (double l : ev) {
    if (l > theta) {
      w.rate += 0.5 * std::log2(l / theta);
      w.distortion -= l - theta;
    }
  }
  return w;
}

/// Reverse waterfilling solved exactly: with the k largest eigenvalues
/// active, log theta = mean(log lambda_1..k) - 2 R ln2 / k, valid when
/// lambda_k > theta >= lambda_{k+1}.
inline VectorWaterfill solve(const std::vector<double>& ev, double total, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("rate must be a finite nonnegative number");
  const double top = ev.empty() ? 0.0 : ev.front();
  if (rate == 0.0 || !(top > 0.0)) return {0.0, total, top};
  double log_sum = 0.0;
  for (std::size_t k = 1; k <= ev.size() && ev[k - 1] > 0.0; ++k) {
    log_sum += std::log(ev[k - 1]);
    const double log_theta = log_sum / static_cast<double>(k) - 2.0 * rate * std::numbers::ln2 / static_cast<double>(k);
    const double theta = std::exp(log_theta);
    const double next = k < ev.size() ? ev[k] : 0.0;
    if (theta >= next) {
      auto w = at_theta(ev, total, theta);
      w.rate = rate;
      return w;
    }
  }
  throw ConvergenceError("vector waterfilling found no consistent active set");
}

}  // namespace findim_detail

/// Covariance of E[x | y]: cov_x H^T (H cov_x H^T)^+ H cov_x, with singular
/// values below 1e-12 sigma_max treated as zero.
inline Eigen::MatrixXd estimate_covariance(const VectorSource& src) {
  src.validate();
  const auto n = src.cov_x.rows();
  if (src.sampling_matrix.rows() == 0) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd& h = src.sampling_matrix;
  const Eigen::MatrixXd hs = h * src.cov_x;
  const Eigen::MatrixXd gram = hs * h.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  const Eigen::MatrixXd pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  Eigen::MatrixXd c = hs.transpose() * pinv * hs;
  return 0.5 * (c + c.transpose());
}

/// Tr(cov_x) - Tr(cov of E[x|y]).
inline double vector_mmse(const VectorSource& src) {
  const double total = src.cov_x.trace();
  return std::max(0.0, total - estimate_covariance(src).trace());
}

/// Indirect DRF: waterfilling on the eigenvalues of the estimate covariance,
/// distortion measured against x.
inline VectorWaterfill vector_idrf(const VectorSource& src, double rate) {
  return findim_detail::solve(findim_detail::eigenvalues(estimate_covariance(src)), src.cov_x.trace(), rate);
}

inline VectorWaterfill vector_idrf_at_theta(const VectorSource& src, double theta) {
  if (!(theta > 0.0)) throw DomainError("water level must be positive");
  return findim_detail::at_theta(findim_detail::eigenvalues(estimate_covariance(src)), src.cov_x.trace(), theta);
}

/// Kolmogorov reverse waterfilling over the eigenvalues of cov_x.
inline VectorWaterfill vector_drf(const Eigen::MatrixXd& cov_x, double rate) {
  return findim_detail::solve(findim_detail::eigenvalues(cov_x), cov_x.trace(), rate);
}

inline VectorWaterfill vector_drf_at_theta(const Eigen::MatrixXd& cov_x, double theta) {
  if (!(theta > 0.0)) throw DomainError("water level must be positive");
  return findim_detail::at_theta(findim_detail::eigenvalues(cov_x), cov_x.trace(), theta);
}

/// PSD sampled at the midpoints of n equal cells over a band. Each value is
/// an eigenvalue of the (asymptotically diagonal) covariance.
struct DiscretizedPsd {
  Eigen::VectorXd eigenvalues;
  double cell_width = 0.0;

  [[nodiscard]] Eigen::MatrixXd covariance() const { return eigenvalues.asDiagonal(); }
};

inline DiscretizedPsd discretize_psd(const Psd& psd, Interval band, int n) {
  if (n < 2) throw DomainError("discretization needs at least two cells");
  if (!(band.hi > band.lo) || !std::isfinite(band.lo) || !std::isfinite(band.hi))
    throw DomainError("band must be a finite nonempty interval");
  DiscretizedPsd d;
  d.cell_width = band.length() / n;
  d.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) d.eigenvalues(i) = psd(band.lo + (i + 0.5) * d.cell_width);
  return d;
}

/// Continuous-time (R, D) from the discretization: the vector problem at
/// rate R / df, with distortion scaled back by df.
inline VectorWaterfill oracle_drf(const DiscretizedPsd& d, double rate) {
  std::vector<double> ev(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  const double total = std::accumulate(ev.begin(), ev.end(), 0.0);
  auto w = findim_detail::solve(ev, total, rate / d.cell_width);
  return {rate, w.distortion * d.cell_width, w.theta};
}

inline VectorWaterfill oracle_drf_at_theta(const DiscretizedPsd& d, double theta) {
  std::vector<double> ev(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
  const double total = std::accumulate(ev.begin(), ev.end(), 0.0);
  auto w = findim_detail::at_theta(ev, total, theta);
  return {w.rate * d.cell_width, w.distortion * d.cell_width, theta};
}

}  // namespace subnyq
