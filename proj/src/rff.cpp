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

#include "kdn/rff.hpp"

#include <cmath>
#include <numbers>

#include "kdn/errors.hpp"
#include "kdn/rng.hpp"

namespace kdn {

RffMap sample_rff(int input_dim, double sigma, int m_rff, std::uint64_t seed) {
  if (sigma <= 0.0) throw ConfigError("sample_rff: sigma must be positive");
  if (input_dim < 1 || m_rff < 1)
    throw ConfigError("sample_rff: dimensions must be positive");
  Rng rng(seed);
  RffMap map;
  map.sigma = sigma;
  map.seed = seed;
  map.omega = rng.normal_matrix(input_dim, m_rff) / sigma;
  map.bias = rng.uniform_vector(m_rff, 0.0, 2.0 * std::numbers::pi);
  return map;
}

Eigen::MatrixXd rff_apply(const RffMap& map,
                          const Eigen::Ref<const Eigen::MatrixXd>& z) {
  if (z.cols() != map.omega.rows())
    throw DimMismatch("rff_apply: input has " + std::to_string(z.cols()) +
                      " columns, map expects " + std::to_string(map.omega.rows()));
  const double scale = std::sqrt(2.0 / map.m_rff());
  Eigen::MatrixXd out = z * map.omega;
  out.rowwise() += map.bias.transpose();
  return scale * out.array().cos();
}

}  // namespace kdn
