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

#include "kdn/network.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "kdn/csv.hpp"
#include "kdn/digest.hpp"
#include "kdn/log.hpp"
#include "kdn/metrics.hpp"
#include "kdn/rng.hpp"

namespace kdn {

namespace {

constexpr int kManifestVersion = 1;

IsmConfig grid_scoring_config(const IsmConfig& base) {
  IsmConfig cfg = base;
  cfg.max_iters = std::min(cfg.max_iters, 8);
  cfg.keep_iterates = false;
  return cfg;
}

}  // namespace

NetworkModel train(const DataSet& ds, const TrainConfig& cfg) {
  if (ds.classes() < 2) throw SingleClass("train: need at least two classes");
  if (cfg.hsic_threshold <= 0.0 || cfg.hsic_threshold > 1.0)
    throw ConfigError("train: hsic_threshold must be in (0, 1]");
  if (cfg.max_layers < 1) throw ConfigError("train: max_layers must be >= 1");
  if (cfg.m_rff < 1) throw ConfigError("train: m_rff must be >= 1");

  NetworkModel model;
  model.n_classes = ds.classes();
  model.m_rff = cfg.m_rff;
  model.hsic_threshold = cfg.hsic_threshold;
  model.seed = cfg.seed;
  // Identity transform placeholder; the caller owns standardization.
  model.standardizer.mean = Eigen::VectorXd::Zero(ds.dim());
  model.standardizer.scale = Eigen::VectorXd::Ones(ds.dim());

  const GammaMatrix gamma = label_gamma(ds.labels);
  const Eigen::MatrixXd ky = label_gram(ds.labels);
  Eigen::MatrixXd r = ds.features;

  for (int l = 1; l <= cfg.max_layers; ++l) {
    std::vector<double> grid =
        cfg.sigma_grid.empty() ? default_sigma_grid(r) : cfg.sigma_grid;

    double sigma = 0.0;
    if (cfg.sigma_strategy == SigmaStrategy::MaxSeparation) {
      double m = median_pairwise_distance(r);
      if (m < 1e-12) m = 1.0;
      sigma = sigma_by_separation(r, ds.labels, 0.05 * m, 20.0 * m).sigma;
    } else {
      sigma = sigma_by_hsic_grid(r, gamma, grid, grid_scoring_config(cfg.ism))
                  .sigma;
    }

    IsmResult ism = solve(r, gamma, sigma, cfg.ism);
    if (ism.eigen_failure)
      throw NumericError("train: eigendecomposition failed at layer " +
                         std::to_string(l));
    if (ism.rank_fallback)
      log_info("train: width fallback at layer " + std::to_string(l) +
               ", keeping one direction");

    LayerSpec layer;
    layer.w = ism.w;
    layer.sigma = sigma;
    layer.m_in = static_cast<int>(r.cols());
    layer.q = static_cast<int>(ism.w.cols());
    layer.m_out = cfg.m_rff;
    layer.ism_iters = ism.iters;
    layer.ism_converged = ism.converged;
    layer.degenerate = ism.rank_fallback;
    layer.eigenvalues = ism.eigenvalues;
    layer.hsic_star =
        hsic_star(gaussian_gram(r * ism.w, sigma).values, ky);
    layer.rff = sample_rff(layer.q, sigma, cfg.m_rff,
                           cfg.seed ^ static_cast<std::uint64_t>(l));

    r = rff_apply(layer.rff, r * layer.w);
    model.layers.push_back(std::move(layer));

    log_debug("layer " + std::to_string(l) + ": sigma=" + std::to_string(sigma) +
              " q=" + std::to_string(model.layers.back().q) +
              " hsic*=" + std::to_string(model.layers.back().hsic_star));
    if (model.layers.back().hsic_star > cfg.hsic_threshold) break;
  }

  model.class_centers.resize(model.n_classes, r.cols());
  model.class_centers.setZero();
  for (int c = 0; c < model.n_classes; ++c) {
    int count = 0;
    for (int i = 0; i < ds.n(); ++i) {
      if (ds.labels(i) == c) {
        model.class_centers.row(c) += r.row(i);
        ++count;
      }
    }
    model.class_centers.row(c) /= count;
  }
  return model;
}

Eigen::MatrixXd forward(const NetworkModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& x,
                        int upto_layer) {
  if (upto_layer < 0 || upto_layer > model.depth())
    throw DimMismatch("forward: layer index out of range");
  Eigen::MatrixXd r = x;
  for (int l = 0; l < upto_layer; ++l) {
    const LayerSpec& layer = model.layers[l];
    if (r.cols() != layer.w.rows())
      throw DimMismatch("forward: input width " + std::to_string(r.cols()) +
                        " does not match layer " + std::to_string(l + 1));
    r = rff_apply(layer.rff, r * layer.w);
  }
  return r;
}

Eigen::VectorXi predict(const NetworkModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& x) {
  Eigen::MatrixXd f = forward(model, x);
  Eigen::VectorXi labels(f.rows());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    int best = 0;
    double best_d =
        (f.row(i) - model.class_centers.row(0)).squaredNorm();
    for (int c = 1; c < model.n_classes; ++c) {
      double d = (f.row(i) - model.class_centers.row(c)).squaredNorm();
      if (d < best_d) {  // strict: ties keep the lowest class index
        best_d = d;
        best = c;
      }
    }
    labels(i) = best;
  }
  return labels;
}

Eigen::MatrixXd layer_kernel(const NetworkModel& model,
                             const Eigen::Ref<const Eigen::MatrixXd>& x,
                             int layer) {
  if (layer < 0 || layer > model.depth())
    throw DimMismatch("layer_kernel: layer index out of range");
  if (model.depth() == 0) throw DimMismatch("layer_kernel: empty model");
  if (layer == 0)
    return gaussian_gram(x, model.layers.front().sigma).values;
  Eigen::MatrixXd r = forward(model, x, layer - 1);
  const LayerSpec& spec = model.layers[layer - 1];
  return gaussian_gram(r * spec.w, spec.sigma).values;
}

void save_model(const NetworkModel& model, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());

  nlohmann::ordered_json manifest;
  manifest["schema_version"] = kManifestVersion;
  manifest["kind"] = "kdn-model";
  manifest["seed"] = model.seed;
  manifest["m_rff"] = model.m_rff;
  manifest["hsic_threshold"] = model.hsic_threshold;
  manifest["n_classes"] = model.n_classes;
  manifest["standardizer"]["mean"] =
      std::vector<double>(model.standardizer.mean.begin(),
                          model.standardizer.mean.end());
  manifest["standardizer"]["scale"] =
      std::vector<double>(model.standardizer.scale.begin(),
                          model.standardizer.scale.end());

  auto dump_matrix = [&](const std::string& name, const Eigen::MatrixXd& m) {
    fs::path p = dir / name;
    write_matrix_csv(p, m);
    return sha256_file(p);
  };

  manifest["layers"] = nlohmann::ordered_json::array();
  for (int l = 0; l < model.depth(); ++l) {
    const LayerSpec& layer = model.layers[l];
    char prefix[32];
    std::snprintf(prefix, sizeof(prefix), "layer%02d", l + 1);
    nlohmann::ordered_json entry;
    entry["dims"] = "(" + std::to_string(layer.m_in) + ", " +
                    std::to_string(layer.q) + ")";
    entry["m_in"] = layer.m_in;
    entry["q"] = layer.q;
    entry["m_out"] = layer.m_out;
    entry["sigma"] = layer.sigma;
    entry["hsic_star"] = layer.hsic_star;
    entry["rff_seed"] = layer.rff.seed;
    const std::string w_file = std::string(prefix) + "_w.csv";
    const std::string omega_file = std::string(prefix) + "_omega.csv";
    const std::string bias_file = std::string(prefix) + "_bias.csv";
    entry["files"]["w"] = w_file;
    entry["files"]["omega"] = omega_file;
    entry["files"]["bias"] = bias_file;
    entry["sha256"]["w"] = dump_matrix(w_file, layer.w);
    entry["sha256"]["omega"] = dump_matrix(omega_file, layer.rff.omega);
    entry["sha256"]["bias"] = dump_matrix(bias_file, layer.rff.bias.transpose());
    manifest["layers"].push_back(std::move(entry));
  }
  manifest["centers_file"] = "centers.csv";
  manifest["centers_sha256"] = dump_matrix("centers.csv", model.class_centers);

  std::ofstream f(dir / "manifest.json");
  if (!f) throw IoError("cannot write manifest in " + dir.string());
  f << manifest.dump(2) << '\n';
}

NetworkModel load_model(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::ifstream f(dir / "manifest.json");
  if (!f) throw IoError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    f >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest parse failure: " + std::string(e.what()));
  }

  if (!manifest.contains("schema_version") ||
      manifest["schema_version"].get<int>() != kManifestVersion)
    throw ManifestVersionMismatch("unsupported manifest schema_version");

  NetworkModel model;
  model.seed = manifest.value("seed", std::uint64_t{0});
  model.m_rff = manifest.value("m_rff", 300);
  model.hsic_threshold = manifest.value("hsic_threshold", 0.99);
  model.n_classes = manifest["n_classes"].get<int>();
  {
    auto mean = manifest["standardizer"]["mean"].get<std::vector<double>>();
    auto scale = manifest["standardizer"]["scale"].get<std::vector<double>>();
    model.standardizer.mean =
        Eigen::Map<const Eigen::VectorXd>(mean.data(), mean.size());
    model.standardizer.scale =
        Eigen::Map<const Eigen::VectorXd>(scale.data(), scale.size());
  }

  auto checked_read = [&](const std::string& file, const std::string& digest) {
    fs::path p = dir / file;
    if (sha256_file(p) != digest)
      throw ChecksumMismatch("checksum mismatch for " + p.string());
    return read_matrix_csv(p);
  };

  for (const auto& entry : manifest["layers"]) {
    LayerSpec layer;
    layer.m_in = entry["m_in"].get<int>();
    layer.q = entry["q"].get<int>();
    layer.m_out = entry["m_out"].get<int>();
    layer.sigma = entry["sigma"].get<double>();
    layer.hsic_star = entry["hsic_star"].get<double>();
    layer.w = checked_read(entry["files"]["w"].get<std::string>(),
                           entry["sha256"]["w"].get<std::string>());
    layer.rff.omega = checked_read(entry["files"]["omega"].get<std::string>(),
                                   entry["sha256"]["omega"].get<std::string>());
    Eigen::MatrixXd bias =
        checked_read(entry["files"]["bias"].get<std::string>(),
                     entry["sha256"]["bias"].get<std::string>());
    layer.rff.bias = bias.row(0).transpose();
    layer.rff.sigma = layer.sigma;
    layer.rff.seed = entry.value("rff_seed", std::uint64_t{0});
    if (layer.w.rows() != layer.m_in || layer.w.cols() != layer.q)
      throw ParseError("layer W shape does not match manifest");
    model.layers.push_back(std::move(layer));
  }
  model.class_centers = checked_read(manifest["centers_file"].get<std::string>(),
                                     manifest["centers_sha256"].get<std::string>());
  return model;
}

}  // namespace kdn
