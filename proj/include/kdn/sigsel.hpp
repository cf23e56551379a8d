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

#include "kdn/ism.hpp"
#include "kdn/kernels.hpp"

namespace kdn {

enum class SigmaStrategy { GridHsicStar, MaxSeparation };

struct SigmaSearchResult {
  double sigma = 0.0;
  std::vector<std::pair<double, double>> objective_curve;  // (sigma, value), ascending sigma
  SigmaStrategy strategy = SigmaStrategy::GridHsicStar;
};

/// Pair-weight matrix Q = gbar 11' - (g + gbar) K_Y with g = 1/|S| and
/// gbar = 1/|S^c|, ordered pairs, same-class counted including i = j, so
/// that Tr(K Q) = gbar * sum_{S^c} K - g * sum_S K exactly.
Eigen::MatrixXd build_q_label(const Eigen::Ref<const Eigen::VectorXi>& labels);

/// Golden-section search (80 iterations) over log sigma minimizing
/// Tr(K_X(sigma) Q), i.e. maximizing mean same-class kernel minus mean
/// cross-class kernel.
SigmaSearchResult sigma_by_separation(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                      const Eigen::Ref<const Eigen::VectorXi>& labels,
                                      double sigma_lo, double sigma_hi);

/// Runs one ISM solve per grid point and scores the Gaussian kernel of the
/// projected data against the label Gram with hsic_star; returns the argmax
/// (ties -> smaller sigma). Grid points whose solve fails are skipped.
SigmaSearchResult sigma_by_hsic_grid(const Eigen::Ref<const Eigen::MatrixXd>& r,
                                     const GammaMatrix& gamma,
                                     const std::vector<double>& grid,
                                     const IsmConfig& ism_cfg);

double median_pairwise_distance(const Eigen::Ref<const Eigen::MatrixXd>& r);

/// Default per-layer sigma grid: fixed multipliers of the median pairwise
/// distance of the current layer input.
std::vector<double> default_sigma_grid(const Eigen::Ref<const Eigen::MatrixXd>& r);

}  // namespace kdn
