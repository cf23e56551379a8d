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
#include <filesystem>
#include <string>
#include <vector>

namespace kdn {

// Numeric matrix CSV, row-major, 17 significant digits so doubles round-trip
// exactly. No header.
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::MatrixXd>& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

void write_vector_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::VectorXd>& v);
Eigen::VectorXd read_vector_csv(const std::filesystem::path& path);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double x);

/// Splits one CSV line on commas. No quoting support; the datasets this tool
/// ingests are plain numeric tables.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace kdn
