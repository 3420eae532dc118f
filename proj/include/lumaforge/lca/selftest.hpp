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
#ifndef LUMAFORGE_LCA_SELFTEST_HPP_
#define LUMAFORGE_LCA_SELFTEST_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace lumaforge::lca {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestResult {
  std::vector<SelfTestCheck> checks;

  bool ok() const;
  nlohmann::json to_json() const;
};

/// Runs the adapter invariant suite and the gradient checks (5 seeds).
SelfTestResult run_selftest();

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_SELFTEST_HPP_
