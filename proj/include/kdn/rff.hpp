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
#include <cstdint>

namespace kdn {

/// Random Fourier Feature map for the Gaussian kernel: frequencies drawn
/// N(0, sigma^-2 I), phases uniform in [0, 2*pi). Single-cosine variant so
/// the feature count is exactly m_rff.
struct RffMap {
  Eigen::MatrixXd omega;  // input_dim x m_rff
  Eigen::VectorXd bias;   // m_rff
  double sigma = 1.0;
  std::uint64_t seed = 0;

  int input_dim() const { return static_cast<int>(omega.rows()); }
  int m_rff() const { return static_cast<int>(omega.cols()); }
};

RffMap sample_rff(int input_dim, double sigma, int m_rff, std::uint64_t seed);

/// phi(z)_k = sqrt(2/m) cos(omega_k' z + b_k), applied row-wise.
Eigen::MatrixXd rff_apply(const RffMap& map,
                          const Eigen::Ref<const Eigen::MatrixXd>& z);

}  // namespace kdn
