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
#include "support/oracles.hpp"

#include <cmath>

namespace lumaforge::testing {

const std::vector<TableRow>& reference_severity_table() {
  static const std::vector<TableRow> table = {
      {OpKind::Exposure, "ev", {{{-0.3, 0.3}, {-0.8, 0.8}, {-1.5, 1.5}}}},
      {OpKind::Brightness, "percent", {{{-15, 15}, {-30, 30}, {-45, 45}}}},
      {OpKind::Contrast, "factor", {{{0.9, 1.1}, {0.75, 1.25}, {0.6, 1.4}}}},
      {OpKind::Gamma, "gamma", {{{0.85, 1.15}, {0.7, 1.3}, {0.55, 1.5}}}},
      {OpKind::Warm, "tint", {{{0.03, 0.07}, {0.08, 0.14}, {0.15, 0.25}}}},
      {OpKind::Cool, "tint", {{{0.03, 0.07}, {0.08, 0.14}, {0.15, 0.25}}}},
      {OpKind::Vignette, "strength", {{{0.1, 0.2}, {0.2, 0.4}, {0.4, 0.65}}}},
      {OpKind::Shadow, "strength", {{{0.2, 0.35}, {0.35, 0.55}, {0.55, 0.75}}}},
      {OpKind::Grain, "intensity", {{{0.01, 0.02}, {0.02, 0.04}, {0.04, 0.07}}}},
  };
  return table;
}

double ssim_oracle(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b) {
  constexpr int kWindow = 11;
  const double sigma = 1.5;
  double weights[kWindow][kWindow];
  double wsum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    for (int j = 0; j < kWindow; ++j) {
      const double di = i - 5, dj = j - 5;
      weights[i][j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
      wsum += weights[i][j];
    }
  }
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double total = 0.0;
  int n = 0;
  for (int r = 0; r + kWindow <= a.rows(); ++r) {
    for (int c = 0; c + kWindow <= a.cols(); ++c) {
      double ma = 0, mb = 0;
      for (int i = 0; i < kWindow; ++i) {
        for (int j = 0; j < kWindow; ++j) {
          ma += weights[i][j] / wsum * a(r + i, c + j);
          mb += weights[i][j] / wsum * b(r + i, c + j);
        }
      }
      double va = 0, vb = 0, cv = 0;
      for (int i = 0; i < kWindow; ++i) {
        for (int j = 0; j < kWindow; ++j) {
          const double q = weights[i][j] / wsum;
          const double da = a(r + i, c + j) - ma;
          const double db = b(r + i, c + j) - mb;
          va += q * da * da;
          vb += q * db * db;
          cv += q * da * db;
        }
      }
      total += ((2 * ma * mb + c1) * (2 * cv + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++n;
    }
  }
  return total / n;
}

}  // namespace lumaforge::testing
