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

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "kdn/bounds.hpp"
#include "kdn/csv.hpp"
#include "kdn/experiment.hpp"
#include "kdn/log.hpp"
#include "kdn/pgm.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string data;
  std::string label_col = "class";
  std::uint64_t seed = 0;
};

kdn::LabelColumn parse_label_col(const std::string& s) {
  int idx = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
  if (ec == std::errc() && p == s.data() + s.size()) return idx;
  return s;
}

std::vector<int> parse_counts(const std::string& s) {
  std::vector<int> counts;
  try {
    for (const auto& cell : kdn::split_csv_line(s)) counts.push_back(std::stoi(cell));
  } catch (const std::exception&) {
    throw kdn::ConfigError("--counts must be comma-separated integers");
  }
  return counts;
}

// "lo:hi:count" -> log-spaced grid.
std::vector<double> parse_log_grid(const std::string& s) {
  auto parts = std::vector<std::string>();
  std::string tmp;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(tmp);
      tmp.clear();
    } else {
      tmp += c;
    }
  }
  parts.push_back(tmp);
  if (parts.size() != 3) throw kdn::ConfigError("grid must be lo:hi:count");
  double lo = 0, hi = 0;
  int count = 0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw kdn::ConfigError("grid must be lo:hi:count with numeric fields");
  }
  if (lo <= 0 || hi <= lo || count < 2)
    throw kdn::ConfigError("grid needs 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
  return g;
}

void write_spectra(const kdn::NetworkModel& model, const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw kdn::IoError("cannot write " + path.string());
  f << "layer,eigenvalues...\n";
  for (int l = 0; l < model.depth(); ++l) {
    f << (l + 1);
    const auto& ev = model.layers[l].eigenvalues;
    for (Eigen::Index i = 0; i < ev.size(); ++i) f << ',' << kdn::format_double(ev(i));
    f << '\n';
  }
}

int cmd_train(const CommonOpts& common, const kdn::CvConfig& cv_in,
              const std::string& out_dir, bool dump_spectra) {
  kdn::CvConfig cv = cv_in;
  // Load and validate the data before creating any output.
  kdn::DataSet raw = kdn::load_data_source(common.data,
                                           parse_label_col(common.label_col),
                                           common.seed);
  kdn::log_info("loaded " + common.data + ": n=" + std::to_string(raw.n()) +
                " d=" + std::to_string(raw.dim()) +
                " C=" + std::to_string(raw.classes()));

  kdn::CvResult result = kdn::run_cv(raw, cv, common.data);

  fs::path out(out_dir);
  fs::create_directories(out);
  for (const kdn::FoldOutcome& fold : result.folds) {
    char name[16];
    std::snprintf(name, sizeof(name), "fold%02d", fold.fold);
    kdn::save_model(fold.model, out / name);
    if (dump_spectra) write_spectra(fold.model, out / name / "spectra.csv");
  }
  kdn::write_report(kdn::report_json(result, cv), out / "report.json");
  std::cout << "report: " << (out / "report.json").string() << '\n';
  return 0;
}

int cmd_eval(const CommonOpts& common, const std::string& model_dir,
             const std::string& out_file) {
  kdn::NetworkModel model = kdn::load_model(model_dir);
  kdn::DataSet raw = kdn::load_data_source(common.data,
                                           parse_label_col(common.label_col),
                                           common.seed);
  Eigen::MatrixXd x = model.standardizer.apply(raw.features);
  Eigen::VectorXi pred = kdn::predict(model, x);
  int hits = 0;
  for (int i = 0; i < raw.n(); ++i)
    if (pred(i) == raw.labels(i)) ++hits;

  Eigen::MatrixXd f = kdn::forward(model, x);
  kdn::OrderedJson j;
  j["schema_version"] = 1;
  j["kind"] = "kdn-eval";
  j["model"] = model_dir;
  j["data"] = common.data;
  j["n"] = raw.n();
  j["accuracy"] = double(hits) / raw.n();
  j["csr"] = kdn::csr(f, raw.labels);
  j["silhouette"] = kdn::silhouette(f, raw.labels);
  Eigen::MatrixXd k = kdn::layer_kernel(model, x, model.depth());
  j["hsic_star"] = kdn::hsic_star(k, kdn::label_gram(raw.labels));
  j["block_gap"] = kdn::block_gap(k, raw.labels);

  if (out_file.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    kdn::write_report(j, out_file);
    std::cout << "report: " << out_file << '\n';
  }
  return 0;
}

int cmd_sigma(const CommonOpts& common, const std::string& strategy,
              const std::string& out_file) {
  kdn::DataSet raw = kdn::load_data_source(common.data,
                                           parse_label_col(common.label_col),
                                           common.seed);
  auto [ds, transform] = kdn::standardize(raw);

  kdn::SigmaSearchResult result;
  if (strategy == "separation") {
    double m = kdn::median_pairwise_distance(ds.features);
    result = kdn::sigma_by_separation(ds.features, ds.labels, 0.05 * m, 20.0 * m);
  } else if (strategy == "hsic") {
    kdn::GammaMatrix gamma = kdn::label_gamma(ds.labels);
    result = kdn::sigma_by_hsic_grid(ds.features, gamma,
                                     kdn::default_sigma_grid(ds.features), {});
  } else {
    throw kdn::ConfigError("unknown sigma strategy '" + strategy + "'");
  }

  std::ofstream f(out_file);
  if (!f) throw kdn::IoError("cannot write " + out_file);
  f << "sigma,objective\n";
  for (auto [sigma, value] : result.objective_curve)
    f << kdn::format_double(sigma) << ',' << kdn::format_double(value) << '\n';
  std::cout << "sigma: " << kdn::format_double(result.sigma) << '\n'
            << "curve: " << out_file << '\n';
  return 0;
}

int cmd_bounds(const std::string& counts_str, double sigma1,
               const std::string& sigma0_grid, double min_sq_dist, double zeta,
               const std::string& mode, const std::string& out_file) {
  std::vector<int> counts = parse_counts(counts_str);
  kdn::ClassProfile profile = mode == "centered"
                                  ? kdn::ClassProfile::centered_mode(counts)
                                  : kdn::ClassProfile::signed_mode(counts);
  std::vector<double> grid = parse_log_grid(sigma0_grid);
  std::sort(grid.rbegin(), grid.rend());  // descending: rows approach L*

  std::ofstream f(out_file);
  if (!f) throw kdn::IoError("cannot write " + out_file);
  f << "sigma0,sigma1,ub,L,L_star,H_star\n";
  for (double s0 : grid) {
    kdn::BoundEval e = kdn::lower_bound(profile, s0, sigma1, min_sq_dist, zeta);
    f << kdn::format_double(e.sigma0) << ',' << kdn::format_double(e.sigma1)
      << ',' << kdn::format_double(e.ub) << ',' << kdn::format_double(e.l)
      << ',' << kdn::format_double(e.l_star) << ','
      << kdn::format_double(e.h_star) << '\n';
  }
  std::cout << "bounds: " << out_file << '\n';
  return 0;
}

int cmd_heatmap(const CommonOpts& common, const std::string& model_dir,
                int layer, const std::string& out_file) {
  kdn::NetworkModel model = kdn::load_model(model_dir);
  kdn::DataSet raw = kdn::load_data_source(common.data,
                                           parse_label_col(common.label_col),
                                           common.seed);
  // Sort samples by class so blocks are contiguous.
  std::vector<int> order(raw.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return raw.labels(a) < raw.labels(b);
  });
  kdn::DataSet sorted = raw.subset(order);

  Eigen::MatrixXd x = model.standardizer.apply(sorted.features);
  Eigen::MatrixXd k = kdn::layer_kernel(model, x, layer);
  kdn::write_kernel_pgm(out_file, k);
  std::cout << "heatmap: " << out_file << '\n';
  return 0;
}

int cmd_synth(const std::string& name, int n, double noise, std::uint64_t seed,
              const std::string& out_file) {
  kdn::DataSet ds;
  if (name == "random") {
    ds = kdn::gen_random(n, 2, seed);
  } else if (name == "adversarial") {
    if (n % 2 != 0) throw kdn::ConfigError("adversarial needs an even n");
    ds = kdn::gen_adversarial(n / 2, noise > 0 ? noise : 0.01, seed);
  } else if (name == "spiral") {
    if (n % 3 != 0) throw kdn::ConfigError("spiral needs n divisible by 3");
    ds = kdn::gen_spiral(n / 3, noise > 0 ? noise : 0.1, seed);
  } else {
    throw kdn::ConfigError("unknown synthetic dataset '" + name + "'");
  }
  kdn::write_csv(ds, out_file);
  std::cout << "wrote " << ds.n() << " rows to " << out_file << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral layer-wise classifier: greedy kernel-dependence "
               "training without backpropagation"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config with a [subcommand] section; flags override");

  CommonOpts common;
  kdn::CvConfig cv;
  std::string out_dir = "run";
  std::string out_file;
  std::string model_dir;
  std::string strategy = "separation";
  std::string counts = "5,5";
  std::string sigma0_grid = "1e-3:1:50";
  std::string synth_name = "spiral";
  std::string sigma_strategy = "grid";
  double sigma1 = 0.5, min_sq_dist = 1.0, zeta = 1.0, noise = 0.0;
  std::string bounds_mode = "signed";
  int layer = 0, synth_n = 300;
  bool dump_spectra = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", common.data, "CSV path or synthetic:{spiral,random,adversarial}")
        ->required();
    cmd->add_option("--label-col", common.label_col,
                    "Label column name or 0-based index (default: class)");
    cmd->add_option("--seed", common.seed, "Run seed");
  };

  CLI::App* train = app.add_subcommand("train", "Cross-validated training");
  add_common(train);
  train->add_option("--folds", cv.folds, "Fold count")->check(CLI::Range(2, 100));
  train->add_option("--out", out_dir, "Output directory");
  train->add_option("--jobs", cv.jobs, "Parallel fold workers")
      ->check(CLI::Range(1, 64));
  train->add_option("--hsic-threshold", cv.train.hsic_threshold,
                    "Stop once a layer's hsic* exceeds this");
  train->add_option("--max-layers", cv.train.max_layers, "Depth cap");
  train->add_option("--rff-width", cv.train.m_rff, "Feature-map width");
  train->add_option("--sigma-strategy", sigma_strategy,
                    "grid (hsic* argmax) or separation");
  train->add_flag("--dump-spectra", dump_spectra,
                  "Write per-layer eigenvalue spectra next to each model");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved model");
  add_common(eval);
  eval->add_option("--model", model_dir, "Model directory")->required();
  eval->add_option("--out", out_file, "Report file (default: stdout)");

  CLI::App* sigma = app.add_subcommand("sigma", "Bandwidth search curve");
  add_common(sigma);
  sigma->add_option("--strategy", strategy, "separation or hsic");
  sigma->add_option("--out", out_file, "Curve CSV")->required();

  CLI::App* bounds = app.add_subcommand("bounds", "Risk-sequence bound curves");
  bounds->add_option("--counts", counts, "Class sizes, e.g. 5,5")->required();
  bounds->add_option("--sigma1", sigma1, "Current-layer bandwidth");
  bounds->add_option("--sigma0-grid", sigma0_grid, "lo:hi:count, log-spaced");
  bounds->add_option("--min-sq-dist", min_sq_dist, "Smallest pairwise squared distance");
  bounds->add_option("--zeta", zeta, "Analysis-weight normalizer");
  bounds->add_option("--mode", bounds_mode, "signed or centered Gamma sums");
  bounds->add_option("--out", out_file, "Output CSV")->required();

  CLI::App* heatmap = app.add_subcommand("heatmap", "Kernel heatmap as PGM");
  add_common(heatmap);
  heatmap->add_option("--model", model_dir, "Model directory")->required();
  heatmap->add_option("--layer", layer, "0 = raw input kernel, 1..L = layer kernels")
      ->required();
  heatmap->add_option("--out", out_file, "Output PGM")->required();

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--name", synth_name, "spiral, random or adversarial")
      ->required();
  synth->add_option("--n", synth_n, "Total sample count");
  synth->add_option("--noise", noise, "Noise level (generator-specific default)");
  synth->add_option("--seed", common.seed, "Generator seed");
  synth->add_option("--out", out_file, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    cv.train.seed = common.seed;
    if (sigma_strategy == "separation")
      cv.train.sigma_strategy = kdn::SigmaStrategy::MaxSeparation;
    else if (sigma_strategy != "grid")
      throw kdn::ConfigError("unknown --sigma-strategy '" + sigma_strategy + "'");

    if (train->parsed()) return cmd_train(common, cv, out_dir, dump_spectra);
    if (eval->parsed()) return cmd_eval(common, model_dir, out_file);
    if (sigma->parsed()) return cmd_sigma(common, strategy, out_file);
    if (bounds->parsed())
      return cmd_bounds(counts, sigma1, sigma0_grid, min_sq_dist, zeta,
                        bounds_mode, out_file);
    if (heatmap->parsed()) return cmd_heatmap(common, model_dir, layer, out_file);
    if (synth->parsed()) return cmd_synth(synth_name, synth_n, noise, common.seed, out_file);
    return 2;
  } catch (const kdn::ConfigError& e) {
    kdn::log_error(e.what());
    return 2;
  } catch (const kdn::ParseError& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const kdn::IoError& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const kdn::EmptyClass& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const kdn::TooFewSamples& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const kdn::SingleClass& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const kdn::ManifestVersionMismatch& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const kdn::ChecksumMismatch& e) {
    kdn::log_error(e.what());
    return 3;
  } catch (const std::exception& e) {
    kdn::log_error(e.what());
    return 4;
  }
}
