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

#include "kdn/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "kdn/errors.hpp"

namespace kdn {

void write_kernel_pgm(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::MatrixXd>& kernel) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << "P2\n" << kernel.cols() << ' ' << kernel.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
      double v = std::clamp(kernel(i, j), 0.0, 1.0);
      int gray = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      if (j) f << ' ';
      f << gray;
    }
    f << '\n';
  }
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace kdn
