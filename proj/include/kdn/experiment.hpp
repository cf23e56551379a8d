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

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "kdn/dataset.hpp"
#include "kdn/metrics.hpp"
#include "kdn/network.hpp"

namespace kdn {

using OrderedJson = nlohmann::ordered_json;

struct CvConfig {
  TrainConfig train;
  int folds = 10;
  int jobs = 1;
  bool dump_spectra = false;
};

struct FoldOutcome {
  int fold = 0;
  NetworkModel model;
  MetricsReport metrics;  // train-side metrics plus test accuracy / hsic*
  double test_hsic_star = 0.0;
  double test_csr = 0.0;
};

struct CvResult {
  std::vector<FoldOutcome> folds;
  std::string dataset_name;
};

/// Standardizes per training fold, trains one model per fold
/// (fold-parallel when jobs > 1; each fold owns a seeded stream, so the
/// result is independent of scheduling), and evaluates metrics.
CvResult run_cv(const DataSet& raw, const CvConfig& cfg,
                const std::string& dataset_name);

/// Structured report with schema_version, per-fold metrics and per-layer
/// dims in the "(alpha, beta)" form, and mean/std aggregates. Deterministic
/// for a fixed dataset + config + seed.
OrderedJson report_json(const CvResult& result, const CvConfig& cfg);

void write_report(const OrderedJson& report, const std::filesystem::path& path);

/// Mean and population standard deviation helpers for the aggregates.
double mean_of(const std::vector<double>& v);
double std_of(const std::vector<double>& v);

/// Resolves "synthetic:spiral" style names or a CSV path into a DataSet.
DataSet load_data_source(const std::string& source, const LabelColumn& label_column,
                         std::uint64_t seed);

}  // namespace kdn
