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
#ifndef LUMAFORGE_LCA_GRADCHECK_HPP_
#define LUMAFORGE_LCA_GRADCHECK_HPP_

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lumaforge/lca/params.hpp"

namespace lumaforge::lca {

struct GradCheckEntry {
  std::string tensor;
  std::size_t coordinates = 0;
  std::size_t failures = 0;
  std::size_t refined = 0;  // coordinates that needed a smaller step

  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

struct GradCheckReport {
  double tolerance = 0.0;
  double step = 0.0;
  std::vector<GradCheckEntry> tensors;

  bool ok() const {
    return std::all_of(tensors.begin(), tensors.end(), [](const auto& t) { return t.failures == 0; });
  }
  double max_rel_error() const {
    double m = 0.0;
    for (const auto& t : tensors) m = std::max(m, t.max_rel_error);
    return m;
  }
};

/// |a - n| / max(|a|, |n|, floor). The floor keeps coordinates whose true
/// gradient is zero from dividing rounding noise by itself.
inline double relative_error(double analytic, double numeric, double floor = 1e-8) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

using BranchFn = std::function<std::vector<std::int64_t>(const LcaParams<double>&)>;

/// Central differences of `f` at every trainable coordinate of `at`,
/// compared against `analytic`. Each estimate is the Richardson combination
/// of the step-h and step-h/2 central differences. With `branches` set, a coordinate whose
/// +-h probes land on a different piece of a piecewise-smooth `f` is
/// re-probed at h/10, h/100, h/1000; if no step keeps all three probes on
/// one piece, the step-h estimate is used as is.
inline GradCheckReport grad_check(const std::function<double(const LcaParams<double>&)>& f,
                                  const LcaParams<double>& at, const LcaParams<double>& analytic, double tolerance,
                                  double h = 1e-3, const BranchFn& branches = {}) {
  GradCheckReport report;
  report.tolerance = tolerance;
  report.step = h;
  std::vector<std::span<const double>> expected;
  analytic.for_each_trainable([&](const char*, std::span<const double> s) { expected.push_back(s); });
  LcaParams<double> probe = at;
  const auto base = branches ? branches(at) : std::vector<std::int64_t>{};
  std::size_t tensor = 0;
  probe.for_each_trainable([&](const char* name, std::span<double> values) {
    GradCheckEntry e;
    e.tensor = name;
    e.coordinates = values.size();
    const auto& a = expected[tensor++];
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      const auto central = [&](double step, bool check_branch, bool& smooth) {
        values[i] = saved + step;
        const double up = f(probe);
        smooth = !check_branch || branches(probe) == base;
        values[i] = saved - step;
        const double down = f(probe);
        if (smooth && check_branch) smooth = branches(probe) == base;
        values[i] = saved;
        const double coarse = (up - down) / (2.0 * step);
        values[i] = saved + step / 2.0;
        const double up_half = f(probe);
        if (smooth && check_branch) smooth = branches(probe) == base;
        values[i] = saved - step / 2.0;
        const double down_half = f(probe);
        if (smooth && check_branch) smooth = branches(probe) == base;
        values[i] = saved;
        const double fine = (up_half - down_half) / step;
        return (4.0 * fine - coarse) / 3.0;
      };
      bool smooth = true;
      double numeric = central(h, static_cast<bool>(branches), smooth);
      if (!smooth) {
        for (double step = h / 10.0; step >= h / 1000.0 * 0.999; step /= 10.0) {
          bool ok = false;
          const double refined = central(step, true, ok);
          if (ok) {
            numeric = refined;
            ++e.refined;
            break;
          }
        }
      }
      const double err = relative_error(a[i], numeric);
      if (err > tolerance) ++e.failures;
      if (err >= e.max_rel_error) {
        e.max_rel_error = err;
        e.worst_index = i;
        e.worst_analytic = a[i];
        e.worst_numeric = numeric;
      }
    }
    report.tensors.push_back(e);
  });
  return report;
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_GRADCHECK_HPP_
