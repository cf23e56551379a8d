// Copyright (c) 2026, the kdnet authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kdn/sigsel.hpp"

#include <algorithm>
#include <cmath>

#include "kdn/log.hpp"
#include "kdn/metrics.hpp"

namespace kdn {

Eigen::MatrixXd build_q_label(const Eigen::Ref<const Eigen::VectorXi>& labels) {
  const Eigen::Index n = labels.size();
  Eigen::MatrixXd ky = label_gram(labels);
  const double same = ky.sum();          // ordered pairs incl. i = j
  const double cross = double(n) * double(n) - same;
  if (cross <= 0.0) throw SingleClass("build_q_label: need at least two classes");
  const double g = 1.0 / same;
  const double gbar = 1.0 / cross;
  return Eigen::MatrixXd::Constant(n, n, gbar) - (g + gbar) * ky;
}

namespace {

double separation_objective(const Eigen::MatrixXd& sqdist,
                            const Eigen::MatrixXd& q, double sigma) {
  Eigen::MatrixXd k = (-sqdist / (2.0 * sigma * sigma)).array().exp();
  return (k.array() * q.array()).sum();
}

}  // namespace

SigmaSearchResult sigma_by_separation(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                      const Eigen::Ref<const Eigen::VectorXi>& labels,
                                      double sigma_lo, double sigma_hi) {
  if (sigma_lo <= 0.0 || sigma_hi <= sigma_lo)
    throw ConfigError("sigma_by_separation: need 0 < sigma_lo < sigma_hi");
  Eigen::MatrixXd q = build_q_label(labels);
  Eigen::MatrixXd d2 = squared_distances(x);

  SigmaSearchResult result;
  result.strategy = SigmaStrategy::MaxSeparation;
  auto eval = [&](double log_sigma) {
    double sigma = std::exp(log_sigma);
    double v = separation_objective(d2, q, sigma);
    result.objective_curve.emplace_back(sigma, v);
    return v;
  };

  // Golden-section over log sigma, 80 shrink steps.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(sigma_lo), b = std::log(sigma_hi);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eval(d);
    }
  }
  result.sigma = std::exp((a + b) / 2.0);
  std::sort(result.objective_curve.begin(), result.objective_curve.end());
  return result;
}

SigmaSearchResult sigma_by_hsic_grid(const Eigen::Ref<const Eigen::MatrixXd>& r,
                                     const GammaMatrix& gamma,
                                     const std::vector<double>& grid,
                                     const IsmConfig& ism_cfg) {
  if (grid.empty()) throw ConfigError("sigma_by_hsic_grid: empty grid");
  Eigen::MatrixXd ky = label_gram(gamma.class_of);

  SigmaSearchResult result;
  result.strategy = SigmaStrategy::GridHsicStar;
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());

  double best = -1.0;
  for (double sigma : sorted) {
    double score;
    try {
      IsmResult ism = solve(r, gamma, sigma, ism_cfg);
      if (ism.eigen_failure) {
        log_info("sigma grid: eigen failure at sigma=" + std::to_string(sigma) +
                 ", point skipped");
        continue;
      }
      score = hsic_star(gaussian_gram(r * ism.w, sigma).values, ky);
    } catch (const Error& e) {
      log_info(std::string("sigma grid: point skipped: ") + e.what());
      continue;
    }
    result.objective_curve.emplace_back(sigma, score);
    // Strict > keeps the smaller sigma on ties (sorted ascending).
    if (score > best) {
      best = score;
      result.sigma = sigma;
    }
  }
  if (result.objective_curve.empty())
    throw NumericError("sigma_by_hsic_grid: every grid point failed");
  return result;
}

double median_pairwise_distance(const Eigen::Ref<const Eigen::MatrixXd>& r) {
  const Eigen::Index n = r.rows();
  if (n < 2) throw TooFewSamples("median_pairwise_distance needs >= 2 rows");
  Eigen::MatrixXd d2 = squared_distances(r);
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back(std::sqrt(d2(i, j)));
  auto mid = d.begin() + d.size() / 2;
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

std::vector<double> default_sigma_grid(const Eigen::Ref<const Eigen::MatrixXd>& r) {
  static constexpr double kMultipliers[] = {0.1, 0.2, 0.35, 0.6,
                                            1.0, 2.0, 4.0};
  double m = median_pairwise_distance(r);
  if (m < 1e-12) m = 1.0;  // all points identical; any scale works
  std::vector<double> grid;
  for (double k : kMultipliers) grid.push_back(k * m);
  return grid;
}

}  // namespace kdn
