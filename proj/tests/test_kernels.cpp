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

#include <Eigen/QR>
#include <cmath>

#include "kdn/kernels.hpp"
#include "kdn/rng.hpp"

using namespace kdn;

namespace {

Eigen::VectorXi labels4() {
  Eigen::VectorXi y(4);
  y << 0, 0, 1, 1;
  return y;
}

// Direct elementwise formula from the centered-Gram expansion:
// Gamma_ij = K_ij - (d_i + d_j)/n + eta/n^2.
Eigen::MatrixXd gamma_oracle(const Eigen::VectorXi& labels) {
  const Eigen::Index n = labels.size();
  Eigen::MatrixXd k = label_gram(labels);
  Eigen::VectorXd deg = k.rowwise().sum();
  double eta = k.sum();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = k(i, j) - (deg(i) + deg(j)) / double(n) +
                eta / double(n * n);
  return g;
}

}  // namespace

TEST_CASE("gaussian_gram analytic values") {
  Eigen::MatrixXd z(3, 1);
  z << 0.0, 0.0, 2.0;
  GramMatrix k = gaussian_gram(z, std::sqrt(2.0));  // ||z0-z2||^2 = 4 = 2*sigma^2
  CHECK(k.values(0, 1) == 1.0);                     // identical points
  CHECK(k.values(0, 0) == 1.0);                     // diagonal exactly one
  CHECK(k.values(0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  Rng rng(4);
  Eigen::MatrixXd unit = rng.normal_matrix(20, 3);
  GramMatrix wide = gaussian_gram(unit, 1e6);
  CHECK(wide.values.minCoeff() >= 1.0 - 1e-9);  // sigma -> inf: all ones
  CHECK(wide.values.maxCoeff() <= 1.0);
  CHECK((wide.values - wide.values.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::MatrixXd bad(2, 1);
  bad << 0.0, std::nan("");
  CHECK_THROWS_AS(gaussian_gram(bad, 1.0), NonFinite);
  CHECK_THROWS_AS(gaussian_gram(z, 0.0), ConfigError);
}

TEST_CASE("center_gram hand values") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd c = center_gram(eye);
  CHECK(c(0, 0) == doctest::Approx(0.5));
  CHECK(c(0, 1) == doctest::Approx(-0.5));
  CHECK(c(1, 0) == doctest::Approx(-0.5));
  CHECK(c(1, 1) == doctest::Approx(0.5));

  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(5, 5);
  CHECK(center_gram(ones).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("label_gamma matches the elementwise expansion and sums to zero") {
  Eigen::VectorXi y = labels4();
  GammaMatrix g = label_gamma(y);
  Eigen::MatrixXd oracle = gamma_oracle(y);
  CHECK((g.values - oracle).cwiseAbs().maxCoeff() < 1e-12);
  // Balanced two-class: +-0.5 pattern.
  CHECK(g.values(0, 1) == doctest::Approx(0.5));
  CHECK(g.values(0, 2) == doctest::Approx(-0.5));
  // Gamma 1 = 0 since H 1 = 0.
  CHECK((g.values.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-10);

  GammaMatrix s = label_gamma(y, GammaMode::Signed);
  CHECK(s.values(0, 0) == 1.0);
  CHECK(s.values(0, 3) == -1.0);
}

TEST_CASE("gamma row sums vanish on assorted label layouts") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 6 + 3 * trial;
    Eigen::VectorXi y(n);
    for (int i = 0; i < n; ++i) y(i) = static_cast<int>(rng.below(3));
    if (y.maxCoeff() == y.minCoeff()) y(0) = y(0) ? 0 : 1;
    GammaMatrix g = label_gamma(y);
    CHECK(g.values.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("gamma_sign_check") {
  Eigen::VectorXi balanced(30);
  for (int i = 0; i < 30; ++i) balanced(i) = i / 10;
  CHECK(gamma_sign_check(label_gamma(balanced)).holds);

  // One class dominating the union of the others flips cross-pair signs.
  Eigen::VectorXi skewed(12);
  for (int i = 0; i < 12; ++i) skewed(i) = i < 10 ? 0 : (i == 10 ? 1 : 2);
  GammaMatrix g = label_gamma(skewed);
  // The two singleton classes' cross entry is positive: 102/144 - 2/12 > 0.
  CHECK(g.values(10, 11) > 0.0);
  GammaSignReport report = gamma_sign_check(g);
  CHECK_FALSE(report.holds);
  CHECK_FALSE(report.violating_pairs.empty());

  Eigen::VectorXi single = Eigen::VectorXi::Zero(5);
  GammaSignReport vac = gamma_sign_check(label_gamma(single));
  CHECK(vac.holds);
  CHECK(vac.degenerate);
}

TEST_CASE("laplacian_quadratic equals the brute-force pair sum") {
  Eigen::MatrixXd x1(2, 1);
  x1 << 1, -1;
  Eigen::MatrixXd psi1(2, 2);
  psi1 << 0, 1, 1, 0;
  CHECK(laplacian_quadratic(x1, psi1)(0, 0) == doctest::Approx(8.0));

  CHECK(laplacian_quadratic(x1, Eigen::MatrixXd::Zero(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);

  Rng rng(3);
  Eigen::MatrixXd x = rng.normal_matrix(5, 3);
  Eigen::MatrixXd psi = rng.normal_matrix(5, 5);
  psi = ((psi + psi.transpose()) * 0.5).eval();
  Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      Eigen::VectorXd d = x.row(i) - x.row(j);
      brute += psi(i, j) * d * d.transpose();
    }
  CHECK((laplacian_quadratic(x, psi) - brute).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("phi_matrix table forms") {
  Eigen::VectorXi y(2);
  y << 0, 1;
  GammaMatrix gamma = label_gamma(y);
  Eigen::MatrixXd r(2, 1);
  r << 1, -1;

  // Linear Phi on the toy instance: sum_ij Gamma_ij r_i r_j = 2.
  Eigen::MatrixXd lin = phi_matrix({KernelKind::Linear}, r, gamma.values);
  CHECK(lin(0, 0) == doctest::Approx(2.0));

  // Gaussian Phi0 with Gamma 1 = 0 collapses to R' Gamma R.
  Rng rng(8);
  Eigen::MatrixXd rr = rng.normal_matrix(8, 3);
  Eigen::VectorXi yy(8);
  for (int i = 0; i < 8; ++i) yy(i) = i % 2;
  GammaMatrix g8 = label_gamma(yy);
  CHECK(g8.values.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  Eigen::MatrixXd phi0 = phi_matrix({KernelKind::Gaussian, 1.0}, rr, g8.values);
  Eigen::MatrixXd direct = rr.transpose() * g8.values * rr;
  CHECK((phi0 - direct).cwiseAbs().maxCoeff() < 1e-10);

  // Phi is symmetric for every kernel family.
  Eigen::MatrixXd w = rng.normal_matrix(3, 2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
  w = qr.householderQ() * Eigen::MatrixXd::Identity(3, 2);
  for (KernelDescriptor desc :
       {KernelDescriptor{KernelKind::Linear},
        KernelDescriptor{KernelKind::Squared},
        KernelDescriptor{KernelKind::Polynomial, 1.0, 3},
        KernelDescriptor{KernelKind::Gaussian, 0.7},
        KernelDescriptor{KernelKind::Multiquadratic, 0.7}}) {
    Eigen::MatrixXd phi = phi_matrix(desc, rr, g8.values, w);
    CHECK((phi - phi.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  CHECK_THROWS_AS(
      phi_matrix({KernelKind::Gaussian, 1.0}, rr, g8.values, Eigen::MatrixXd()),
      MissingW);
}

TEST_CASE("hsic_value") {
  Eigen::VectorXi y = labels4();
  Eigen::MatrixXd ky = label_gram(y);

  // Gamma has all 16 entries at +-0.5, so Tr((H K_Y H)^2) = 16 * 0.25 = 4,
  // computed here against the direct centered product.
  Eigen::MatrixXd c = center_gram(ky);
  double direct = (c.array() * c.array()).sum();
  CHECK(direct == doctest::Approx(4.0));
  CHECK(hsic_value(ky, ky) == doctest::Approx(direct).epsilon(1e-12));

  // Constant kernels carry no dependence.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(4, 4);
  CHECK(std::abs(hsic_value(ones, ky)) < 1e-12);

  // Symmetry and nonnegativity of the self-term.
  Rng rng(5);
  Eigen::MatrixXd z = rng.normal_matrix(12, 3);
  Eigen::MatrixXd ka = gaussian_gram(z, 1.0).values;
  Eigen::MatrixXd kb = gaussian_gram(z * 0.5, 2.0).values;
  CHECK(hsic_value(ka, kb) ==
        doctest::Approx(hsic_value(kb, ka)).epsilon(1e-10));
  CHECK(hsic_value(ka, ka) >= 0.0);

  CHECK_THROWS_AS(hsic_value(ka, Eigen::MatrixXd::Ones(3, 3)), SizeMismatch);
}

TEST_CASE("kernel_gram families") {
  Rng rng(6);
  Eigen::MatrixXd z = rng.normal_matrix(6, 2);
  GramMatrix lin = kernel_gram(z, {KernelKind::Linear});
  CHECK((lin.values - z * z.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  GramMatrix sq = kernel_gram(z, {KernelKind::Squared});
  CHECK(sq.values(2, 2) == 0.0);
  CHECK(sq.values(0, 1) ==
        doctest::Approx((z.row(0) - z.row(1)).squaredNorm()));

  GramMatrix poly = kernel_gram(z, {KernelKind::Polynomial, 1.0, 3});
  CHECK(poly.values(0, 1) ==
        doctest::Approx(std::pow(z.row(0).dot(z.row(1)), 3)));

  GramMatrix mq = kernel_gram(z, {KernelKind::Multiquadratic, 0.5});
  CHECK(mq.values(1, 1) == doctest::Approx(0.5));
  CHECK(mq.values(0, 1) ==
        doctest::Approx(std::sqrt((z.row(0) - z.row(1)).squaredNorm() + 0.25)));
}
