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

#pragma once

#include <Eigen/Core>
#include <vector>

#include "kdn/kernels.hpp"

namespace kdn {

/// Normalized HSIC in [0, 1]:
/// Tr(H Kf H Ky) / sqrt(Tr(H Kf H Kf) Tr(H Ky H Ky)).
/// Returns 0 and sets *degenerate when either self-term is below 1e-18.
double hsic_star(const Eigen::Ref<const Eigen::MatrixXd>& kf,
                 const Eigen::Ref<const Eigen::MatrixXd>& ky,
                 bool* degenerate = nullptr);

/// Cosine Similarity Ratio: cross-class inner-product mass over same-class
/// mass, i < j pairs, raw (un-normalized) representations. 0 is ideal.
double csr(const Eigen::Ref<const Eigen::MatrixXd>& f,
           const Eigen::Ref<const Eigen::VectorXi>& labels);

/// Tr(S_w)/Tr(S_b): within-class over cross-class sums of
/// ||W'(r_i - r_j)||^2 / (2 sigma^2). Returns a flagged large value when the
/// cross-class sum vanishes.
double scatter_ratio(const Eigen::Ref<const Eigen::MatrixXd>& r,
                     const Eigen::Ref<const Eigen::MatrixXd>& w, double sigma,
                     const Eigen::Ref<const Eigen::VectorXi>& labels,
                     bool* diverged = nullptr);

/// min over same-class pairs (i != j) minus max over cross-class pairs of
/// the kernel entries; 1 for an ideal block kernel.
double block_gap(const Eigen::Ref<const Eigen::MatrixXd>& k,
                 const Eigen::Ref<const Eigen::VectorXi>& labels);

/// Mean silhouette coefficient, Euclidean distance; 0 for a sample whose
/// within and between distances are both 0.
double silhouette(const Eigen::Ref<const Eigen::MatrixXd>& f,
                  const Eigen::Ref<const Eigen::VectorXi>& labels);

struct PenaltyResult {
  Eigen::VectorXd d;    // per-sample penalty weights D_i(W)
  double residual_rel;  // identity residual, relative
};

/// Per-sample penalty weights
///   D_i = (1/sigma^2) [ sum_{j in S_i} G_ij k_W(r_i,r_j)
///                       - sum_{j in S_i^c} |G_ij| k_W(r_i,r_j) ]
/// plus the residual of the algebraic identity
///   Tr(W'R'(Ghat - D_Ghat)RW) =
///   sum_ij Ghat_ij <W'r_i, W'r_j> - sum_i D_i sigma^2 ||W'r_i||^2.
PenaltyResult penalty_terms(const Eigen::Ref<const Eigen::MatrixXd>& r,
                            const Eigen::Ref<const Eigen::MatrixXd>& w,
                            double sigma, const GammaMatrix& gamma);

struct LayerMetrics {
  int layer = 0;  // 1-based
  double sigma = 0.0;
  int m_in = 0, q = 0, m_out = 0;
  double hsic_star = 0.0;
  double scatter_ratio = 0.0;
  double block_gap = 0.0;
};

struct MetricsReport {
  double hsic_star = 0.0;
  double csr = 0.0;
  double scatter_ratio = 0.0;
  double silhouette = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  std::vector<LayerMetrics> per_layer;
};

}  // namespace kdn
