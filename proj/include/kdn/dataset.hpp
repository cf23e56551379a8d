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
#include <string>
#include <variant>
#include <vector>

namespace kdn {

/// A labeled dataset. Labels are dense 0..C-1 in first-appearance order of
/// the raw label strings; every class is non-empty.
struct DataSet {
  Eigen::MatrixXd features;               // n x d
  Eigen::VectorXi labels;                 // n, values in 0..C-1
  std::vector<int> n_per_class;           // length C
  std::vector<std::string> feature_names; // length d
  std::vector<std::string> class_names;   // length C

  int n() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
  int classes() const { return static_cast<int>(n_per_class.size()); }

  /// Rows of this dataset selected by index, class bookkeeping rebuilt.
  DataSet subset(const std::vector<int>& rows) const;
};

/// Stratified fold assignment: per class, fold sizes differ by at most one.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;  // fold index per sample
  std::uint64_t seed = 0;

  std::vector<int> test_indices(int fold) const;
  std::vector<int> train_indices(int fold) const;
};

/// Per-feature affine transform fitted on a training split. Population
/// standard deviation (divide by n); constant features keep scale 1 so they
/// map to all-zeros on the fitted data.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
};

using LabelColumn = std::variant<std::string, int>;

DataSet load_csv(const std::filesystem::path& path, const LabelColumn& label_column);
void write_csv(const DataSet& ds, const std::filesystem::path& path);

/// Standardizes in place semantics: returns the transformed copy plus the
/// fitted transform for later application to held-out rows.
std::pair<DataSet, Standardizer> standardize(const DataSet& ds);

/// n i.i.d. standard-normal points in d dimensions; exactly half the labels
/// are 0 and half 1, assigned by a seeded shuffle.
DataSet gen_random(int n, int d, std::uint64_t seed);

/// Pairs (x, x + noise * N(0, I_2)) with x uniform in [0,1]^2; the first
/// member of each pair is class 0, the second class 1.
DataSet gen_adversarial(int n_pairs, double noise, std::uint64_t seed);

/// Three interleaved arms: radius t, angle 2t + 2*pi*c/3, t uniform in
/// [0.5, 3.0], plus noise * N(0, I_2).
DataSet gen_spiral(int n_per_class, double noise, std::uint64_t seed);

FoldPlan make_folds(const DataSet& ds, int k, std::uint64_t seed);

}  // namespace kdn
