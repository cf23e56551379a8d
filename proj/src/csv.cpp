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

#include "kdn/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kdn/errors.hpp"

namespace kdn {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) f << ',';
      f << format_double(m(i, j));
    }
    f << '\n';
  }
  if (!f) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(c, &pos));
        if (pos != c.size()) throw ParseError("trailing characters in cell '" + c + "'");
      } catch (const std::invalid_argument&) {
        throw ParseError("non-numeric cell '" + c + "' in " + path.string());
      } catch (const std::out_of_range&) {
        throw ParseError("out-of-range value '" + c + "' in " + path.string());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void write_vector_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::VectorXd>& v) {
  write_matrix_csv(path, v.transpose());
}

Eigen::VectorXd read_vector_csv(const std::filesystem::path& path) {
  Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw ParseError("expected a single row or column in " + path.string());
}

}  // namespace kdn
