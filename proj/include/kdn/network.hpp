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
#include <filesystem>
#include <vector>

#include "kdn/dataset.hpp"
#include "kdn/ism.hpp"
#include "kdn/rff.hpp"
#include "kdn/sigsel.hpp"

namespace kdn {

/// One solved layer: orthonormal projection, bandwidth, and the feature map
/// that produces the layer output.
struct LayerSpec {
  Eigen::MatrixXd w;  // m_in x q
  double sigma = 1.0;
  RffMap rff;         // q -> m_out
  double hsic_star = 0.0;  // of the projected pre-activation kernel
  int m_in = 0, q = 0, m_out = 0;
  int ism_iters = 0;
  bool ism_converged = false;
  bool degenerate = false;       // width fallback fired during the solve
  Eigen::VectorXd eigenvalues;   // kept spectrum of the converged Q
};

struct TrainConfig {
  double hsic_threshold = 0.99;  // stop once a layer's hsic_star exceeds this
  int max_layers = 10;
  int m_rff = 300;
  IsmConfig ism;
  SigmaStrategy sigma_strategy = SigmaStrategy::GridHsicStar;
  std::vector<double> sigma_grid;  // absolute values; empty -> scale-free default
  std::uint64_t seed = 0;
};

struct NetworkModel {
  std::vector<LayerSpec> layers;
  Eigen::MatrixXd class_centers;  // C x m_out of the last layer
  Standardizer standardizer;      // transform fitted on the training fold
  int n_classes = 0;
  int m_rff = 300;
  double hsic_threshold = 0.99;
  std::uint64_t seed = 0;

  int depth() const { return static_cast<int>(layers.size()); }
};

/// Greedy layer-wise training. `ds` must already be standardized; Gamma is
/// built once from the training labels and reused at every layer. Layers are
/// added until a layer's hsic_star exceeds cfg.hsic_threshold or max_layers
/// is reached. Class centers are the per-class means of the final output.
NetworkModel train(const DataSet& ds, const TrainConfig& cfg);

/// Applies layers 1..upto_layer (0 returns x unchanged).
Eigen::MatrixXd forward(const NetworkModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& x,
                        int upto_layer);
inline Eigen::MatrixXd forward(const NetworkModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& x) {
  return forward(model, x, model.depth());
}

/// Nearest class center in the final output space; ties break to the lowest
/// class index. Inputs must be standardized with the training transform.
Eigen::VectorXi predict(const NetworkModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& x);

/// The kernel the given layer discovered: exp(-||W_l'(r_i - r_j)||^2 /
/// (2 sigma_l^2)) on the layer-(l-1) representations. Layer 0 is the raw
/// input kernel evaluated with the first layer's bandwidth.
Eigen::MatrixXd layer_kernel(const NetworkModel& model,
                             const Eigen::Ref<const Eigen::MatrixXd>& x,
                             int layer);

/// Model directory: manifest.json plus per-layer W/omega/bias CSV files and
/// the class centers; every matrix file carries a SHA-256 in the manifest.
void save_model(const NetworkModel& model, const std::filesystem::path& dir);
NetworkModel load_model(const std::filesystem::path& dir);

}  // namespace kdn
