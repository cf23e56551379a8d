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

#include "kdn/kernels.hpp"

#include <cmath>

namespace kdn {

namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& z, const char* who) {
  if (!z.allFinite()) throw NonFinite(std::string(who) + ": non-finite input");
}

void symmetrize(Eigen::MatrixXd& k) {
  k = ((k + k.transpose()) * 0.5).eval();
}

}  // namespace

Eigen::MatrixXd squared_distances(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  const Eigen::VectorXd sq = z.rowwise().squaredNorm();
  Eigen::MatrixXd d = sq.replicate(1, z.rows());
  d += sq.transpose().replicate(z.rows(), 1);
  d.noalias() -= 2.0 * z * z.transpose();
  return d.cwiseMax(0.0);
}

GramMatrix gaussian_gram(const Eigen::Ref<const Eigen::MatrixXd>& z, double sigma) {
  if (sigma <= 0.0) throw ConfigError("gaussian_gram: sigma must be positive");
  require_finite(z, "gaussian_gram");
  Eigen::MatrixXd k = (-squared_distances(z) / (2.0 * sigma * sigma)).array().exp();
  symmetrize(k);
  k.diagonal().setOnes();
  return {std::move(k), {KernelKind::Gaussian, sigma, 2}};
}

GramMatrix kernel_gram(const Eigen::Ref<const Eigen::MatrixXd>& z,
                       const KernelDescriptor& desc) {
  require_finite(z, "kernel_gram");
  Eigen::MatrixXd k;
  switch (desc.kind) {
    case KernelKind::Gaussian:
      return gaussian_gram(z, desc.sigma);
    case KernelKind::Linear:
      k = z * z.transpose();
      break;
    case KernelKind::Squared:
      k = squared_distances(z);
      break;
    case KernelKind::Polynomial: {
      if (desc.degree < 2) throw ConfigError("polynomial kernel needs degree >= 2");
      k = (z * z.transpose()).array().pow(desc.degree);
      break;
    }
    case KernelKind::Multiquadratic: {
      if (desc.sigma <= 0.0) throw ConfigError("multiquadratic kernel needs sigma > 0");
      k = (squared_distances(z).array() + desc.sigma * desc.sigma).sqrt();
      break;
    }
  }
  symmetrize(k);
  return {std::move(k), desc};
}

Eigen::MatrixXd label_gram(const Eigen::Ref<const Eigen::VectorXi>& labels) {
  const Eigen::Index n = labels.size();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      k(i, j) = labels(i) == labels(j) ? 1.0 : 0.0;
  return k;
}

GammaMatrix label_gamma(const Eigen::Ref<const Eigen::VectorXi>& labels,
                        GammaMode mode) {
  GammaMatrix g;
  g.class_of = labels;
  if (mode == GammaMode::Signed) {
    const Eigen::Index n = labels.size();
    g.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        g.values(i, j) = labels(i) == labels(j) ? 1.0 : -1.0;
  } else {
    g.values = center_gram(label_gram(labels));
  }
  return g;
}

GammaSignReport gamma_sign_check(const GammaMatrix& gamma, double tol) {
  GammaSignReport report;
  const Eigen::Index n = gamma.values.rows();
  double max_abs = gamma.values.cwiseAbs().maxCoeff();
  if (max_abs <= tol) {
    report.degenerate = true;  // e.g. single class: H annihilates K_Y = 11'
    return report;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = gamma.values(i, j);
      if (std::abs(v) <= tol) continue;
      bool same = gamma.class_of(i) == gamma.class_of(j);
      if ((same && v < 0.0) || (!same && v > 0.0))
        report.violating_pairs.emplace_back(static_cast<int>(i),
                                            static_cast<int>(j));
    }
  }
  report.holds = report.violating_pairs.empty();
  return report;
}

namespace {

Eigen::MatrixXd laplacian_phi(const Eigen::Ref<const Eigen::MatrixXd>& r,
                              const Eigen::MatrixXd& psi, double sign) {
  // sign * R' (D_psi - psi) R, through the shared quadratic form.
  return sign * 0.5 * laplacian_quadratic(r, psi);
}

}  // namespace

Eigen::MatrixXd phi_matrix(const KernelDescriptor& desc,
                           const Eigen::Ref<const Eigen::MatrixXd>& r,
                           const Eigen::Ref<const Eigen::MatrixXd>& gamma) {
  if (gamma.rows() != r.rows() || gamma.cols() != r.rows())
    throw SizeMismatch("phi_matrix: Gamma must be n x n matching R");
  switch (desc.kind) {
    case KernelKind::Linear:
    case KernelKind::Polynomial:
      return r.transpose() * gamma * r;
    case KernelKind::Squared:
    case KernelKind::Multiquadratic:
      return laplacian_phi(r, gamma, +1.0);
    case KernelKind::Gaussian:
      return laplacian_phi(r, gamma, -1.0);
  }
  throw ConfigError("phi_matrix: unknown kernel kind");
}

Eigen::MatrixXd phi_matrix(const KernelDescriptor& desc,
                           const Eigen::Ref<const Eigen::MatrixXd>& r,
                           const Eigen::Ref<const Eigen::MatrixXd>& gamma,
                           const Eigen::Ref<const Eigen::MatrixXd>& w) {
  if (gamma.rows() != r.rows() || gamma.cols() != r.rows())
    throw SizeMismatch("phi_matrix: Gamma must be n x n matching R");
  switch (desc.kind) {
    case KernelKind::Linear:
      return r.transpose() * gamma * r;
    case KernelKind::Squared:
      return laplacian_phi(r, gamma, +1.0);
    case KernelKind::Polynomial: {
      if (w.size() == 0) throw MissingW("polynomial Phi requires W");
      Eigen::MatrixXd p = (r * w) * (r * w).transpose();
      Eigen::MatrixXd psi = gamma.array() * p.array().pow(desc.degree - 1);
      return r.transpose() * psi * r;
    }
    case KernelKind::Gaussian: {
      if (w.size() == 0) throw MissingW("Gaussian Phi requires W");
      Eigen::MatrixXd psi =
          gamma.array() * gaussian_gram(r * w, desc.sigma).values.array();
      return laplacian_phi(r, psi, -1.0);
    }
    case KernelKind::Multiquadratic: {
      if (w.size() == 0) throw MissingW("multiquadratic Phi requires W");
      Eigen::MatrixXd mq = kernel_gram(r * w, desc).values;
      Eigen::MatrixXd psi = gamma.array() * mq.array().inverse();
      return laplacian_phi(r, psi, +1.0);
    }
  }
  throw ConfigError("phi_matrix: unknown kernel kind");
}

}  // namespace kdn
