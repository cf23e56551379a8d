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

#include "kdn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "kdn/csv.hpp"
#include "kdn/errors.hpp"
#include "kdn/rng.hpp"

namespace kdn {

namespace {

std::vector<int> count_classes(const Eigen::VectorXi& labels, int n_classes) {
  std::vector<int> counts(n_classes, 0);
  for (Eigen::Index i = 0; i < labels.size(); ++i) ++counts[labels(i)];
  return counts;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

DataSet DataSet::subset(const std::vector<int>& rows) const {
  DataSet out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
    out.labels(static_cast<Eigen::Index>(i)) = labels(rows[i]);
  }
  out.feature_names = feature_names;
  out.class_names = class_names;
  out.n_per_class = count_classes(out.labels, classes());
  for (std::size_t c = 0; c < out.n_per_class.size(); ++c)
    if (out.n_per_class[c] == 0)
      throw EmptyClass("subset drops class " + std::to_string(c));
  return out;
}

std::vector<int> FoldPlan::test_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(static_cast<int>(i));
  return out;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.cols() != mean.size())
    throw DimMismatch("standardizer fitted on " + std::to_string(mean.size()) +
                      " features, got " + std::to_string(x.cols()));
  return (x.rowwise() - mean.transpose()).array().rowwise() /
         scale.transpose().array();
}

DataSet load_csv(const std::filesystem::path& path, const LabelColumn& label_column) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path.string());

  std::string line;
  if (!std::getline(f, line)) throw ParseError("empty file: " + path.string());
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  const int ncols = static_cast<int>(header.size());
  if (ncols < 2) throw ParseError("need at least one feature and a label column");

  int label_idx = -1;
  if (std::holds_alternative<int>(label_column)) {
    label_idx = std::get<int>(label_column);
    if (label_idx < 0) label_idx += ncols;  // allow -1 for "last column"
    if (label_idx < 0 || label_idx >= ncols)
      throw ParseError("label column index out of range");
  } else {
    const auto& name = std::get<std::string>(label_column);
    for (int j = 0; j < ncols; ++j)
      if (header[j] == name) label_idx = j;
    if (label_idx < 0)
      throw ParseError("label column '" + name + "' not found in header");
  }

  std::vector<std::vector<double>> feats;
  std::vector<std::string> raw_labels;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != ncols)
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(ncols) + " cells, got " +
                       std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(ncols - 1);
    for (int j = 0; j < ncols; ++j) {
      if (j == label_idx) {
        raw_labels.push_back(trim(cells[j]));
        continue;
      }
      const std::string cell = trim(cells[j]);
      std::size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": non-numeric feature cell '" + cell + "'");
      }
      if (pos != cell.size())
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": non-numeric feature cell '" + cell + "'");
      if (!std::isfinite(v))
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": non-finite feature value");
      row.push_back(v);
    }
    feats.push_back(std::move(row));
  }
  if (feats.empty()) throw ParseError("no data rows in " + path.string());

  // Dense re-encoding in first-appearance order.
  DataSet ds;
  std::map<std::string, int> code;
  ds.labels.resize(static_cast<Eigen::Index>(raw_labels.size()));
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto it = code.find(raw_labels[i]);
    if (it == code.end()) {
      it = code.emplace(raw_labels[i], static_cast<int>(ds.class_names.size())).first;
      ds.class_names.push_back(raw_labels[i]);
    }
    ds.labels(static_cast<Eigen::Index>(i)) = it->second;
  }
  if (ds.class_names.size() < 2)
    throw EmptyClass("fewer than two classes in " + path.string());

  ds.features.resize(static_cast<Eigen::Index>(feats.size()), ncols - 1);
  for (std::size_t i = 0; i < feats.size(); ++i)
    for (int j = 0; j < ncols - 1; ++j)
      ds.features(static_cast<Eigen::Index>(i), j) = feats[i][j];
  for (int j = 0; j < ncols; ++j)
    if (j != label_idx) ds.feature_names.push_back(header[j]);
  ds.n_per_class = count_classes(ds.labels, static_cast<int>(ds.class_names.size()));
  return ds;
}

void write_csv(const DataSet& ds, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  for (int j = 0; j < ds.dim(); ++j) {
    std::string name = j < static_cast<int>(ds.feature_names.size())
                           ? ds.feature_names[j]
                           : "f" + std::to_string(j);
    f << name << ',';
  }
  f << "class\n";
  for (int i = 0; i < ds.n(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) f << format_double(ds.features(i, j)) << ',';
    int c = ds.labels(i);
    f << (c < static_cast<int>(ds.class_names.size()) ? ds.class_names[c]
                                                      : std::to_string(c))
      << '\n';
  }
  if (!f) throw IoError("write failed: " + path.string());
}

std::pair<DataSet, Standardizer> standardize(const DataSet& ds) {
  if (ds.n() < 2) throw TooFewSamples("standardize needs at least 2 samples");
  Standardizer t;
  t.mean = ds.features.colwise().mean();
  Eigen::MatrixXd centered = ds.features.rowwise() - t.mean.transpose();
  // Population standard deviation; constant features keep scale 1.
  t.scale = (centered.array().square().colwise().sum() / ds.n()).sqrt();
  for (Eigen::Index j = 0; j < t.scale.size(); ++j)
    if (t.scale(j) < 1e-12) t.scale(j) = 1.0;
  DataSet out = ds;
  out.features = t.apply(ds.features);
  return {std::move(out), std::move(t)};
}

DataSet gen_random(int n, int d, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw ConfigError("gen_random: n must be even and >= 2");
  if (d < 1) throw ConfigError("gen_random: d must be >= 1");
  Rng rng(seed);
  DataSet ds;
  ds.features = rng.normal_matrix(n, d);
  std::vector<int> lab(n, 0);
  std::fill(lab.begin() + n / 2, lab.end(), 1);
  rng.shuffle(lab);
  ds.labels.resize(n);
  for (int i = 0; i < n; ++i) ds.labels(i) = lab[i];
  ds.n_per_class = {n / 2, n / 2};
  ds.class_names = {"0", "1"};
  for (int j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
  return ds;
}

DataSet gen_adversarial(int n_pairs, double noise, std::uint64_t seed) {
  if (n_pairs < 1) throw ConfigError("gen_adversarial: n_pairs must be >= 1");
  Rng rng(seed);
  DataSet ds;
  ds.features.resize(2 * n_pairs, 2);
  for (int i = 0; i < n_pairs; ++i) {
    ds.features(i, 0) = rng.uniform();
    ds.features(i, 1) = rng.uniform();
  }
  for (int i = 0; i < n_pairs; ++i) {
    ds.features(n_pairs + i, 0) = ds.features(i, 0) + noise * rng.normal();
    ds.features(n_pairs + i, 1) = ds.features(i, 1) + noise * rng.normal();
  }
  ds.labels.resize(2 * n_pairs);
  ds.labels.head(n_pairs).setZero();
  ds.labels.tail(n_pairs).setOnes();
  ds.n_per_class = {n_pairs, n_pairs};
  ds.class_names = {"0", "1"};
  ds.feature_names = {"f0", "f1"};
  return ds;
}

DataSet gen_spiral(int n_per_class, double noise, std::uint64_t seed) {
  if (n_per_class < 10) throw ConfigError("gen_spiral: n_per_class must be >= 10");
  constexpr int kClasses = 3;
  Rng rng(seed);
  DataSet ds;
  ds.features.resize(kClasses * n_per_class, 2);
  ds.labels.resize(kClasses * n_per_class);
  int row = 0;
  for (int c = 0; c < kClasses; ++c) {
    for (int i = 0; i < n_per_class; ++i, ++row) {
      double t = rng.uniform(0.5, 3.0);
      double angle = 2.0 * t + 2.0 * std::numbers::pi * c / kClasses;
      ds.features(row, 0) = t * std::cos(angle) + noise * rng.normal();
      ds.features(row, 1) = t * std::sin(angle) + noise * rng.normal();
      ds.labels(row) = c;
    }
  }
  ds.n_per_class = {n_per_class, n_per_class, n_per_class};
  ds.class_names = {"0", "1", "2"};
  ds.feature_names = {"f0", "f1"};
  return ds;
}

FoldPlan make_folds(const DataSet& ds, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("make_folds: k must be >= 2");
  for (int c = 0; c < ds.classes(); ++c)
    if (ds.n_per_class[c] < k)
      throw TooFewSamples("class " + std::to_string(c) + " has " +
                          std::to_string(ds.n_per_class[c]) +
                          " samples, fewer than k=" + std::to_string(k));
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(ds.n(), -1);
  Rng rng(seed);
  // Per class: shuffle, deal round-robin with a rotated start so fold sizes
  // stay within one of exact proportion overall.
  for (int c = 0; c < ds.classes(); ++c) {
    std::vector<int> idx;
    for (int i = 0; i < ds.n(); ++i)
      if (ds.labels(i) == c) idx.push_back(i);
    rng.shuffle(idx);
    int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    for (std::size_t i = 0; i < idx.size(); ++i)
      plan.assignment[idx[i]] = static_cast<int>((start + i) % k);
  }
  return plan;
}

}  // namespace kdn
