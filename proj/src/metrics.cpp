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

#include "kdn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace kdn {

double hsic_star(const Eigen::Ref<const Eigen::MatrixXd>& kf,
                 const Eigen::Ref<const Eigen::MatrixXd>& ky,
                 bool* degenerate) {
  if (kf.rows() != ky.rows())
    throw SizeMismatch("hsic_star: Gram sizes differ");
  if (degenerate) *degenerate = false;
  const Eigen::MatrixXd cf = center_gram(kf);
  const Eigen::MatrixXd cy = center_gram(ky);
  const double num = (cf.array() * cy.array()).sum();
  const double d1 = cf.squaredNorm();
  const double d2 = cy.squaredNorm();
  if (d1 < 1e-18 || d2 < 1e-18) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return num / std::sqrt(d1 * d2);
}

double csr(const Eigen::Ref<const Eigen::MatrixXd>& f,
           const Eigen::Ref<const Eigen::VectorXi>& labels) {
  const Eigen::Index n = f.rows();
  if (labels.size() != n) throw SizeMismatch("csr: labels must match rows");
  Eigen::MatrixXd inner = f * f.transpose();
  double same = 0.0, cross = 0.0;
  bool any_same = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (labels(i) == labels(j)) {
        same += inner(i, j);
        any_same = true;
      } else {
        cross += inner(i, j);
      }
    }
  }
  if (!any_same) throw TooFewSamples("csr: no same-class pair");
  if (std::abs(same) < 1e-300) throw ZeroDenominator("csr: same-class mass is zero");
  return cross / same;
}

double scatter_ratio(const Eigen::Ref<const Eigen::MatrixXd>& r,
                     const Eigen::Ref<const Eigen::MatrixXd>& w, double sigma,
                     const Eigen::Ref<const Eigen::VectorXi>& labels,
                     bool* diverged) {
  if (labels.size() != r.rows())
    throw SizeMismatch("scatter_ratio: labels must match rows");
  if (diverged) *diverged = false;
  Eigen::MatrixXd p = r * w;
  Eigen::MatrixXd d2 = squared_distances(p);
  const double denom = 2.0 * sigma * sigma;
  double within = 0.0, between = 0.0;
  const Eigen::Index n = r.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      (labels(i) == labels(j) ? within : between) += d2(i, j) / denom;
  if (between < 1e-300) {
    if (diverged) *diverged = true;
    return std::numeric_limits<double>::max();
  }
  return within / between;
}

double block_gap(const Eigen::Ref<const Eigen::MatrixXd>& k,
                 const Eigen::Ref<const Eigen::VectorXi>& labels) {
  const Eigen::Index n = k.rows();
  if (labels.size() != n) throw SizeMismatch("block_gap: labels must match rows");
  double min_same = 1.0;   // no off-diagonal same-class pair: vacuous top
  double max_cross = 0.0;
  bool any_cross = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (labels(i) == labels(j)) {
        min_same = std::min(min_same, k(i, j));
      } else {
        max_cross = std::max(any_cross ? max_cross : k(i, j), k(i, j));
        any_cross = true;
      }
    }
  }
  return min_same - (any_cross ? max_cross : 0.0);
}

double silhouette(const Eigen::Ref<const Eigen::MatrixXd>& f,
                  const Eigen::Ref<const Eigen::VectorXi>& labels) {
  const Eigen::Index n = f.rows();
  if (labels.size() != n) throw SizeMismatch("silhouette: labels must match rows");
  const int c = labels.maxCoeff() + 1;
  if (c < 2) throw TooFewSamples("silhouette: need at least two classes");
  std::vector<int> counts(c, 0);
  for (Eigen::Index i = 0; i < n; ++i) ++counts[labels(i)];
  for (int g = 0; g < c; ++g)
    if (counts[g] < 2)
      throw TooFewSamples("silhouette: class " + std::to_string(g) +
                          " has fewer than 2 members");

  Eigen::MatrixXd dist = squared_distances(f).cwiseSqrt();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> sums(c, 0.0);
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) sums[labels(j)] += dist(i, j);
    const int own = labels(i);
    const double a = sums[own] / (counts[own] - 1);
    double b = std::numeric_limits<double>::max();
    for (int g = 0; g < c; ++g)
      if (g != own) b = std::min(b, sums[g] / counts[g]);
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

PenaltyResult penalty_terms(const Eigen::Ref<const Eigen::MatrixXd>& r,
                            const Eigen::Ref<const Eigen::MatrixXd>& w,
                            double sigma, const GammaMatrix& gamma) {
  const Eigen::Index n = r.rows();
  if (gamma.values.rows() != n)
    throw SizeMismatch("penalty_terms: Gamma must match R");
  Eigen::MatrixXd p = r * w;
  Eigen::MatrixXd kw = gaussian_gram(p, sigma).values;
  const double s2 = sigma * sigma;

  // ghat_ij = Gamma_ij k_W(r_i, r_j); its row sums over sigma^2 are D_i,
  // using |Gamma| with a minus sign on cross pairs (Gamma is negative there
  // in centered mode, so this is just the plain row sum).
  PenaltyResult out;
  out.d = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd ghat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool same = gamma.class_of(i) == gamma.class_of(j);
      const double g = gamma.values(i, j);
      ghat(i, j) = (same ? g : -std::abs(g)) * kw(i, j);
      out.d(i) += ghat(i, j) / s2;
    }
  }

  // Identity: Tr(W'R'(ghat - D_ghat)RW) equals the unfolded pair sum minus
  // the degree-weighted projected norms.
  Eigen::MatrixXd inner = ghat;
  inner.diagonal() -= ghat.rowwise().sum();
  const double lhs = (w.transpose() * r.transpose() * inner * r * w).trace();

  Eigen::MatrixXd proj_inner = p * p.transpose();
  double rhs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rhs += ghat(i, j) * proj_inner(i, j);
    rhs -= out.d(i) * s2 * proj_inner(i, i);
  }

  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  out.residual_rel = std::abs(lhs - rhs) / scale;
  return out;
}

}  // namespace kdn
