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
#ifndef LUMAFORGE_SEVERITY_CONFIG_HPP_
#define LUMAFORGE_SEVERITY_CONFIG_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lumaforge/lightops.hpp"

namespace lumaforge {

enum class Severity { Mild = 1, Moderate = 2, Severe = 3 };

inline int tier(Severity s) { return static_cast<int>(s); }
Severity severity_from_tier(int tier);

/// Closed numeric interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo - 1e-12 && v <= hi + 1e-12; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Parameter name (as reported by named_values) -> admissible interval.
using ParamRanges = std::map<std::string, Interval>;

struct TierConfig {
  int max_ops = 1;
  /// Kinds absent from this map cannot be sampled at the tier.
  std::map<OpKind, ParamRanges> ops;
};

/// Per-tier parameter ranges, max op counts and conflict groups. The default
/// instance carries the reference severity table; ranges the table leaves
/// open (haze, shadow sharpness, color cast, flare) use documented defaults.
struct SeverityConfig {
  std::array<TierConfig, 3> tiers;
  std::vector<std::vector<OpKind>> conflict_groups;
  PixelRgb haze_color{0.88f, 0.9f, 0.92f};

  const TierConfig& at(Severity s) const { return tiers[static_cast<std::size_t>(tier(s) - 1)]; }
  TierConfig& at(Severity s) { return tiers[static_cast<std::size_t>(tier(s) - 1)]; }
  int max_ops(Severity s) const { return at(s).max_ops; }

  /// Kinds that share a conflict group with `kind` (excluding itself).
  std::vector<OpKind> conflicts_of(OpKind kind) const;

  /// Structural problems; empty when the config is usable by the sampler.
  std::vector<std::string> problems() const;

  static SeverityConfig defaults();
};

/// Throws ParameterError listing problems() when the config is not usable.
void require_valid(const SeverityConfig& config);

SeverityConfig load_severity_config(const std::filesystem::path& path);
void save_severity_config(const SeverityConfig& config, const std::filesystem::path& path);

}  // namespace lumaforge

#endif  // LUMAFORGE_SEVERITY_CONFIG_HPP_
