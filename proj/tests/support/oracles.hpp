/**
 * Copyright 2026 The LumaForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef LUMAFORGE_TESTS_SUPPORT_ORACLES_HPP_
#define LUMAFORGE_TESTS_SUPPORT_ORACLES_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "lumaforge/lightops.hpp"
#include "lumaforge/severity_config.hpp"

namespace lumaforge::testing {

/// One row of the reference severity table: an op parameter and its three
/// tier intervals.
struct TableRow {
  OpKind kind;
  const char* param;
  std::array<Interval, 3> tiers;
};

/// The severity table typed in by hand, independent of SeverityConfig.
const std::vector<TableRow>& reference_severity_table();

/// Mean SSIM by direct evaluation of the 11x11 Gaussian-weighted moments at
/// every valid window position. Slow, shares no code with the library.
double ssim_oracle(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b);

}  // namespace lumaforge::testing

#endif  // LUMAFORGE_TESTS_SUPPORT_ORACLES_HPP_
