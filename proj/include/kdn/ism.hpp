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
#include <vector>

#include "kdn/kernels.hpp"

namespace kdn {

/// How many eigenvectors of the converged Q become layer weights.
///  - Rank: count eigenvalues with |lambda| above rank_tol * max|lambda|
///    (the numerical rank of Q; keeps the representation rich enough for
///    deeper layers).
///  - PositiveOnly: count strictly positive eigenvalues above
///    rank_tol * max(lambda_max, 0).
enum class WidthRule { Rank, PositiveOnly };

struct IsmConfig {
  double tol = 1e-5;        // eigenvalue-sequence convergence threshold
  int max_iters = 50;
  double rank_tol = 1e-5;
  std::optional<int> q_override;
  WidthRule width_rule = WidthRule::Rank;
  bool keep_iterates = false;  // record per-iteration spectra and weights
};

struct IsmIterate {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd w;
  double objective = 0.0;  // Tr(Gamma K_{RW}(sigma))
};

struct IsmResult {
  Eigen::MatrixXd w;            // m x q, orthonormal columns
  Eigen::VectorXd eigenvalues;  // length q, descending
  int iters = 0;
  bool converged = false;
  bool eigen_failure = false;   // eigensolver did not converge; best effort W
  bool rank_fallback = false;   // no eigenvalue passed the width rule; kept 1
  double objective = 0.0;       // Tr(Gamma K_{RW}(sigma)) at the returned W
  std::vector<IsmIterate> iterates;
};

/// Q_0 = R' (Gamma - Diag(Gamma 1)) R. For a centered Gamma the row sums
/// vanish and this reduces to R' Gamma R.
Eigen::MatrixXd init_q(const Eigen::Ref<const Eigen::MatrixXd>& r,
                       const GammaMatrix& gamma);

/// Q = R' (G - Diag(G 1)) R with G = Gamma (.) K_{RW}(sigma).
Eigen::MatrixXd update_q(const Eigen::Ref<const Eigen::MatrixXd>& r,
                         const GammaMatrix& gamma,
                         const Eigen::Ref<const Eigen::MatrixXd>& w,
                         double sigma);

/// PositiveOnly width: eigenvalues above rank_tol * max(lambda_1, 0) and
/// strictly positive; at least 1.
int select_width(const Eigen::Ref<const Eigen::VectorXd>& eigs_descending,
                 double rank_tol);

/// Rank width: eigenvalues with |lambda| above rank_tol * max|lambda|.
int rank_width(const Eigen::Ref<const Eigen::VectorXd>& eigs_descending,
               double rank_tol);

/// Iterative spectral solve of max_W Tr(Gamma K_{RW}(sigma)) s.t. W'W = I.
/// Eigenvectors are sign-normalized (largest-magnitude component positive)
/// and the width is re-selected from each iteration's spectrum. Convergence
/// is declared when the kept spectra of consecutive iterations differ by
/// less than tol in relative l2 norm (shorter spectrum zero-padded).
IsmResult solve(const Eigen::Ref<const Eigen::MatrixXd>& r,
                const GammaMatrix& gamma, double sigma,
                const IsmConfig& cfg = {});

}  // namespace kdn
