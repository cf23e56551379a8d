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

#include "kdn/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include "kdn/log.hpp"
#include "kdn/rng.hpp"

namespace kdn {

namespace {

constexpr int kReportVersion = 1;

double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth) {
  int hits = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i)
    if (predicted(i) == truth(i)) ++hits;
  return truth.size() ? double(hits) / double(truth.size()) : 0.0;
}

FoldOutcome run_fold(const DataSet& raw, const FoldPlan& plan, int fold,
                     const CvConfig& cfg) {
  DataSet train_raw = raw.subset(plan.train_indices(fold));
  DataSet test_raw = raw.subset(plan.test_indices(fold));

  auto [train_std, transform] = standardize(train_raw);
  TrainConfig tc = cfg.train;
  tc.seed = mix_seed(cfg.train.seed, static_cast<std::uint64_t>(fold));

  FoldOutcome out;
  out.fold = fold;
  out.model = train(train_std, tc);
  out.model.standardizer = transform;

  const Eigen::MatrixXd test_std = transform.apply(test_raw.features);
  const Eigen::MatrixXd train_out = forward(out.model, train_std.features);
  const Eigen::MatrixXd test_out = forward(out.model, test_std);

  MetricsReport& m = out.metrics;
  m.train_acc = accuracy(predict(out.model, train_std.features), train_std.labels);
  m.test_acc = accuracy(predict(out.model, test_std), test_raw.labels);

  const Eigen::MatrixXd ky_test = label_gram(test_raw.labels);
  const int depth = out.model.depth();

  Eigen::MatrixXd r = train_std.features;
  for (int l = 0; l < depth; ++l) {
    const LayerSpec& spec = out.model.layers[l];
    LayerMetrics lm;
    lm.layer = l + 1;
    lm.sigma = spec.sigma;
    lm.m_in = spec.m_in;
    lm.q = spec.q;
    lm.m_out = spec.m_out;
    lm.hsic_star = spec.hsic_star;
    Eigen::MatrixXd k = gaussian_gram(r * spec.w, spec.sigma).values;
    lm.block_gap = block_gap(k, train_std.labels);
    lm.scatter_ratio = scatter_ratio(r, spec.w, spec.sigma, train_std.labels);
    m.per_layer.push_back(lm);
    r = rff_apply(spec.rff, r * spec.w);
  }

  m.hsic_star = depth ? m.per_layer.back().hsic_star : 0.0;
  m.scatter_ratio = depth ? m.per_layer.back().scatter_ratio : 0.0;
  m.csr = csr(train_out, train_std.labels);
  m.silhouette = silhouette(train_out, train_std.labels);

  const LayerSpec& last = out.model.layers.back();
  Eigen::MatrixXd test_pre = forward(out.model, test_std, depth - 1) * last.w;
  out.test_hsic_star =
      hsic_star(gaussian_gram(test_pre, last.sigma).values, ky_test);
  out.test_csr = csr(test_out, test_raw.labels);
  return out;
}

}  // namespace

CvResult run_cv(const DataSet& raw, const CvConfig& cfg,
                const std::string& dataset_name) {
  FoldPlan plan = make_folds(raw, cfg.folds, cfg.train.seed);
  CvResult result;
  result.dataset_name = dataset_name;
  result.folds.resize(cfg.folds);

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (int f = 0; f < cfg.folds; ++f)
      result.folds[f] = run_fold(raw, plan, f, cfg);
    return result;
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(cfg.folds);
  auto worker = [&] {
    for (;;) {
      int f = next.fetch_add(1);
      if (f >= cfg.folds) return;
      try {
        result.folds[f] = run_fold(raw, plan, f, cfg);
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(jobs, cfg.folds); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size()));
}

OrderedJson report_json(const CvResult& result, const CvConfig& cfg) {
  OrderedJson report;
  report["schema_version"] = kReportVersion;
  report["kind"] = "kdn-report";
  report["dataset"] = result.dataset_name;
  report["folds"] = cfg.folds;
  report["config"]["seed"] = cfg.train.seed;
  report["config"]["hsic_threshold"] = cfg.train.hsic_threshold;
  report["config"]["max_layers"] = cfg.train.max_layers;
  report["config"]["m_rff"] = cfg.train.m_rff;
  report["config"]["sigma_strategy"] =
      cfg.train.sigma_strategy == SigmaStrategy::GridHsicStar ? "grid_hsic_star"
                                                              : "max_separation";

  std::vector<double> train_acc, test_acc, hs, test_hs, csr_v, depth;
  report["per_fold"] = OrderedJson::array();
  for (const FoldOutcome& f : result.folds) {
    OrderedJson jf;
    jf["fold"] = f.fold;
    jf["train_acc"] = f.metrics.train_acc;
    jf["test_acc"] = f.metrics.test_acc;
    jf["hsic_star"] = f.metrics.hsic_star;
    jf["test_hsic_star"] = f.test_hsic_star;
    jf["csr"] = f.metrics.csr;
    jf["test_csr"] = f.test_csr;
    jf["silhouette"] = f.metrics.silhouette;
    jf["depth"] = f.model.depth();
    jf["layers"] = OrderedJson::array();
    for (const LayerMetrics& lm : f.metrics.per_layer) {
      OrderedJson jl;
      jl["layer"] = lm.layer;
      jl["dims"] = "(" + std::to_string(lm.m_in) + ", " +
                   std::to_string(lm.q) + ")";
      jl["sigma"] = lm.sigma;
      jl["hsic_star"] = lm.hsic_star;
      jl["scatter_ratio"] = lm.scatter_ratio;
      jl["block_gap"] = lm.block_gap;
      jf["layers"].push_back(std::move(jl));
    }
    report["per_fold"].push_back(std::move(jf));

    train_acc.push_back(f.metrics.train_acc);
    test_acc.push_back(f.metrics.test_acc);
    hs.push_back(f.metrics.hsic_star);
    test_hs.push_back(f.test_hsic_star);
    csr_v.push_back(f.metrics.csr);
    depth.push_back(double(f.model.depth()));
  }

  auto agg = [](const std::vector<double>& v) {
    OrderedJson j;
    j["mean"] = mean_of(v);
    j["std"] = std_of(v);
    return j;
  };
  report["aggregate"]["train_acc"] = agg(train_acc);
  report["aggregate"]["test_acc"] = agg(test_acc);
  report["aggregate"]["hsic_star"] = agg(hs);
  report["aggregate"]["test_hsic_star"] = agg(test_hs);
  report["aggregate"]["csr"] = agg(csr_v);
  report["aggregate"]["depth"] = agg(depth);
  return report;
}

void write_report(const OrderedJson& report, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << report.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path.string());
}

DataSet load_data_source(const std::string& source, const LabelColumn& label_column,
                         std::uint64_t seed) {
  constexpr const char* kPrefix = "synthetic:";
  if (source.rfind(kPrefix, 0) == 0) {
    const std::string name = source.substr(std::string(kPrefix).size());
    if (name == "spiral") return gen_spiral(100, 0.1, seed);
    if (name == "random") return gen_random(80, 2, seed);
    if (name == "adversarial") return gen_adversarial(40, 0.01, seed);
    throw ConfigError("unknown synthetic dataset '" + name + "'");
  }
  return load_csv(source, label_column);
}

}  // namespace kdn
