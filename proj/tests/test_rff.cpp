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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kdn/kernels.hpp"
#include "kdn/rff.hpp"
#include "kdn/rng.hpp"

using namespace kdn;

namespace {

double mean_kernel_error(const RffMap& map, const Eigen::MatrixXd& u,
                         const Eigen::MatrixXd& v, double sigma) {
  Eigen::MatrixXd fu = rff_apply(map, u);
  Eigen::MatrixXd fv = rff_apply(map, v);
  double err = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    double exact =
        std::exp(-(u.row(i) - v.row(i)).squaredNorm() / (2 * sigma * sigma));
    err += std::abs(fu.row(i).dot(fv.row(i)) - exact);
  }
  return err / double(u.rows());
}

}  // namespace

TEST_CASE("sample_rff is deterministic and matches its distribution") {
  const int q = 5, m = 300;
  const double sigma = 1.7;
  RffMap a = sample_rff(q, sigma, m, 42);
  RffMap b = sample_rff(q, sigma, m, 42);
  CHECK(a.omega == b.omega);
  CHECK(a.bias == b.bias);
  CHECK(sample_rff(q, sigma, m, 43).omega != a.omega);

  CHECK(a.bias.minCoeff() >= 0.0);
  CHECK(a.bias.maxCoeff() < 2.0 * std::numbers::pi);

  // CLT band for the frequency mean, and a 20% band on the variance.
  double mean = a.omega.mean();
  CHECK(std::abs(mean) <= 3.0 / (std::sqrt(double(q * m)) * sigma));
  double var = (a.omega.array() - mean).square().mean();
  CHECK(var > 0.8 / (sigma * sigma));
  CHECK(var < 1.2 / (sigma * sigma));
}

TEST_CASE("rff_apply output is bounded and nearly unit-norm") {
  const int q = 4, m = 300;
  RffMap map = sample_rff(q, 1.0, m, 7);
  Rng rng(19);
  Eigen::MatrixXd z = rng.normal_matrix(100, q);
  Eigen::MatrixXd f = rff_apply(map, z);
  CHECK(f.cwiseAbs().maxCoeff() <= std::sqrt(2.0 / m) + 1e-12);

  double mean_sq = f.rowwise().squaredNorm().mean();
  CHECK(f.rowwise().squaredNorm().maxCoeff() <= 2.0);
  CHECK(mean_sq > 0.9);
  CHECK(mean_sq < 1.1);

  CHECK_THROWS_AS(rff_apply(map, rng.normal_matrix(3, q + 1)), DimMismatch);
}

TEST_CASE("rff inner products approximate the Gaussian kernel") {
  const int q = 6;
  const double sigma = 1.3;
  Rng rng(23);
  Eigen::MatrixXd u = rng.normal_matrix(500, q);
  Eigen::MatrixXd v = rng.normal_matrix(500, q);
  RffMap map = sample_rff(q, sigma, 300, 11);
  CHECK(mean_kernel_error(map, u, v, sigma) <= 0.05);
}

TEST_CASE("approximation error drops as the map widens") {
  const int q = 6;
  const double sigma = 1.0;
  Rng rng(29);
  Eigen::MatrixXd u = rng.normal_matrix(400, q);
  Eigen::MatrixXd v = rng.normal_matrix(400, q);
  double prev = 1e300;
  for (int m : {75, 300, 1200}) {
    double err = mean_kernel_error(sample_rff(q, sigma, m, 31), u, v, sigma);
    CHECK(err < prev);
    prev = err;
  }
}
