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

namespace kdn {

/// Plain-text PGM (P2) of a kernel matrix. Values are clamped to [0, 1] and
/// mapped so 0 -> 255 (white) and 1 -> 0 (dark).
void write_kernel_pgm(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::MatrixXd>& kernel);

}  // namespace kdn
