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
#include <optional>
#include <utility>
#include <vector>

#include "kdn/errors.hpp"

namespace kdn {

enum class KernelKind { Linear, Squared, Polynomial, Gaussian, Multiquadratic };

struct KernelDescriptor {
  KernelKind kind = KernelKind::Gaussian;
  double sigma = 1.0;  // Gaussian / multiquadratic bandwidth, > 0
  int degree = 2;      // polynomial power, >= 2
};

/// Symmetric n x n kernel matrix together with how it was built.
struct GramMatrix {
  Eigen::MatrixXd values;
  KernelDescriptor descriptor;
};

/// Centered label Gram H K_Y H. Entries are positive for same-class pairs
/// and negative for cross-class pairs whenever every class is smaller than
/// the union of any other two. Signed mode sets entries to +/-1 by class
/// equality instead.
struct GammaMatrix {
  Eigen::MatrixXd values;
  Eigen::VectorXi class_of;
};

enum class GammaMode { Centered, Signed };

/// Pairwise squared Euclidean distances of the rows of z, clamped at zero.
Eigen::MatrixXd squared_distances(const Eigen::Ref<const Eigen::MatrixXd>& z);

/// K[i][j] = exp(-||z_i - z_j||^2 / (2 sigma^2)); unit diagonal, symmetric.
GramMatrix gaussian_gram(const Eigen::Ref<const Eigen::MatrixXd>& z, double sigma);

/// Grams for the remaining kernel families (linear, squared distance,
/// polynomial (u'v)^p, multiquadratic sqrt(||u-v||^2 + sigma^2)).
GramMatrix kernel_gram(const Eigen::Ref<const Eigen::MatrixXd>& z,
                       const KernelDescriptor& desc);

/// One-hot label Gram K_Y = Y Y': 1 for same-class pairs, 0 otherwise.
Eigen::MatrixXd label_gram(const Eigen::Ref<const Eigen::VectorXi>& labels);

GammaMatrix label_gamma(const Eigen::Ref<const Eigen::VectorXi>& labels,
                        GammaMode mode = GammaMode::Centered);

/// H K H with H = I - (1/n) 11'; row and column sums vanish.
template <typename Derived>
Eigen::MatrixXd center_gram(const Eigen::MatrixBase<Derived>& k) {
  const Eigen::Index n = k.rows();
  if (k.cols() != n) throw SizeMismatch("center_gram: matrix must be square");
  Eigen::MatrixXd m = k;
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  const Eigen::VectorXd row_mean = m.rowwise().mean();
  const double total_mean = col_mean.mean();
  m.rowwise() -= col_mean;
  m.colwise() -= row_mean;
  m.array() += total_mean;
  return m;
}

struct GammaSignReport {
  bool holds = true;
  bool degenerate = false;  // all entries ~0 (single class); holds vacuously
  std::vector<std::pair<int, int>> violating_pairs;
};

/// Checks the sign pattern of Gamma against the class partition: same-class
/// entries positive, cross-class entries negative. Entries within tol of
/// zero are neutral.
GammaSignReport gamma_sign_check(const GammaMatrix& gamma, double tol = 1e-12);

/// 2 X' (D_Psi - Psi) X, the matrix form of sum_ij Psi_ij (x_i-x_j)(x_i-x_j)'.
template <typename DX, typename DP>
Eigen::MatrixXd laplacian_quadratic(const Eigen::MatrixBase<DX>& x,
                                    const Eigen::MatrixBase<DP>& psi) {
  if (psi.rows() != psi.cols() || psi.rows() != x.rows())
    throw SizeMismatch("laplacian_quadratic: Psi must be n x n matching X");
  Eigen::VectorXd deg = psi * Eigen::VectorXd::Ones(psi.cols());
  Eigen::MatrixXd lap = -psi;
  lap.diagonal() += deg;
  return 2.0 * x.transpose() * lap * x;
}

/// The W-independent spectral-surrogate matrix for one ISM kernel family:
/// linear/polynomial R'GR, squared R'L_G R, Gaussian -R'L_G R,
/// multiquadratic R'L_G R.
Eigen::MatrixXd phi_matrix(const KernelDescriptor& desc,
                           const Eigen::Ref<const Eigen::MatrixXd>& r,
                           const Eigen::Ref<const Eigen::MatrixXd>& gamma);

/// The full form: Psi = Gamma (.) K_{RW} (kernel-specific) replaces Gamma
/// where the family is W-dependent. Throws MissingW when w is empty.
Eigen::MatrixXd phi_matrix(const KernelDescriptor& desc,
                           const Eigen::Ref<const Eigen::MatrixXd>& r,
                           const Eigen::Ref<const Eigen::MatrixXd>& gamma,
                           const Eigen::Ref<const Eigen::MatrixXd>& w);

/// Unnormalized empirical HSIC, Tr(H K_a H K_b). The 1/(n-1)^2 constant is
/// dropped everywhere: every use in this library is a ratio or an argmax.
/// Both Grams are centered before the Frobenius pairing (H is idempotent, so
/// the value is the same trace); this keeps the huge constant component of a
/// near-uniform kernel from leaking through the other factor's residual row
/// sums, and makes the Cauchy-Schwarz bound hold in floating point.
template <typename DA, typename DB>
double hsic_value(const Eigen::MatrixBase<DA>& ka,
                  const Eigen::MatrixBase<DB>& kb) {
  if (ka.rows() != kb.rows() || ka.cols() != kb.cols() || ka.rows() != ka.cols())
    throw SizeMismatch("hsic_value: Grams must be square and equal-sized");
  Eigen::MatrixXd ca = center_gram(ka);
  Eigen::MatrixXd cb = center_gram(kb);
  return (ca.array() * cb.array()).sum();
}

inline double hsic_value(const GramMatrix& a, const GramMatrix& b) {
  return hsic_value(a.values, b.values);
}

}  // namespace kdn
