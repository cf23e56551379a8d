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

#include "kdn/ism.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "kdn/log.hpp"

namespace kdn {

namespace {

Eigen::MatrixXd q_from(const Eigen::Ref<const Eigen::MatrixXd>& r,
                       const Eigen::MatrixXd& g) {
  Eigen::MatrixXd inner = g;
  inner.diagonal() -= g.rowwise().sum();
  Eigen::MatrixXd q = r.transpose() * inner * r;
  return ((q + q.transpose()) * 0.5).eval();
}

struct Spectrum {
  Eigen::VectorXd values;  // descending
  Eigen::MatrixXd vectors;
  bool failed = false;
};

Spectrum eig_descending(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  Spectrum s;
  if (es.info() != Eigen::Success) {
    s.failed = true;
    return s;
  }
  s.values = es.eigenvalues().reverse();
  s.vectors = es.eigenvectors().rowwise().reverse();
  return s;
}

// Largest-magnitude component made positive, for a deterministic W.
void fix_signs(Eigen::MatrixXd& w) {
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Eigen::Index k;
    w.col(j).cwiseAbs().maxCoeff(&k);
    if (w(k, j) < 0.0) w.col(j) = -w.col(j);
  }
}

double spectrum_change(const Eigen::VectorXd& cur, const Eigen::VectorXd& prev) {
  const Eigen::Index len = std::max(cur.size(), prev.size());
  Eigen::VectorXd a = Eigen::VectorXd::Zero(len);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(len);
  a.head(cur.size()) = cur;
  b.head(prev.size()) = prev;
  double denom = a.norm();
  if (denom < 1e-300) denom = 1.0;
  return (a - b).norm() / denom;
}

}  // namespace

Eigen::MatrixXd init_q(const Eigen::Ref<const Eigen::MatrixXd>& r,
                       const GammaMatrix& gamma) {
  if (gamma.values.rows() != r.rows())
    throw SizeMismatch("init_q: Gamma rows must match R rows");
  return q_from(r, gamma.values);
}

Eigen::MatrixXd update_q(const Eigen::Ref<const Eigen::MatrixXd>& r,
                         const GammaMatrix& gamma,
                         const Eigen::Ref<const Eigen::MatrixXd>& w,
                         double sigma) {
  if (w.rows() != r.cols())
    throw DimMismatch("update_q: W rows must match R columns");
  Eigen::MatrixXd ghat =
      gamma.values.array() * gaussian_gram(r * w, sigma).values.array();
  return q_from(r, ghat);
}

int select_width(const Eigen::Ref<const Eigen::VectorXd>& eigs, double rank_tol) {
  if (eigs.size() == 0) throw SizeMismatch("select_width: empty spectrum");
  const double cut = rank_tol * std::max(eigs(0), 0.0);
  int q = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (eigs(i) > cut && eigs(i) > 0.0) ++q;
  return std::max(q, 1);
}

int rank_width(const Eigen::Ref<const Eigen::VectorXd>& eigs, double rank_tol) {
  if (eigs.size() == 0) throw SizeMismatch("rank_width: empty spectrum");
  const double cut = rank_tol * eigs.cwiseAbs().maxCoeff();
  int q = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (std::abs(eigs(i)) > cut) ++q;
  return std::max(q, 1);
}

IsmResult solve(const Eigen::Ref<const Eigen::MatrixXd>& r,
                const GammaMatrix& gamma, double sigma, const IsmConfig& cfg) {
  if (r.rows() < 2) throw TooFewSamples("ism::solve needs at least 2 samples");
  if (sigma <= 0.0) throw ConfigError("ism::solve: sigma must be positive");

  IsmResult result;
  Eigen::MatrixXd q_mat = init_q(r, gamma);
  Eigen::VectorXd prev;
  double prev_obj = 0.0;
  bool have_prev_obj = false;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    result.iters = iter + 1;
    Spectrum s = eig_descending(q_mat);
    if (s.failed) {
      result.eigen_failure = true;
      log_error("ism: eigendecomposition failed at iteration " +
                std::to_string(iter));
      break;
    }

    int q;
    if (cfg.q_override) {
      q = std::min<int>(*cfg.q_override, static_cast<int>(s.values.size()));
    } else if (cfg.width_rule == WidthRule::Rank) {
      q = rank_width(s.values, cfg.rank_tol);
    } else {
      q = select_width(s.values, cfg.rank_tol);
    }
    if (s.values(0) <= 0.0 && !cfg.q_override) result.rank_fallback = true;

    result.w = s.vectors.leftCols(q);
    fix_signs(result.w);
    result.eigenvalues = s.values.head(q);

    // The iteration guarantees stationarity, not monotone ascent; a drop in
    // the objective is worth surfacing but is not an error.
    double obj = (gamma.values.array() *
                  gaussian_gram(r * result.w, sigma).values.array())
                     .sum();
    if (have_prev_obj && obj < prev_obj - 1e-6)
      log_debug("ism: objective decreased at iteration " +
                std::to_string(iter) + " (" + std::to_string(prev_obj) +
                " -> " + std::to_string(obj) + ")");
    prev_obj = obj;
    have_prev_obj = true;

    if (cfg.keep_iterates)
      result.iterates.push_back({result.eigenvalues, result.w, obj});

    if (prev.size() > 0 &&
        spectrum_change(result.eigenvalues, prev) < cfg.tol) {
      result.converged = true;
      break;
    }
    prev = result.eigenvalues;
    q_mat = update_q(r, gamma, result.w, sigma);
  }

  if (have_prev_obj) result.objective = prev_obj;
  return result;
}

}  // namespace kdn
