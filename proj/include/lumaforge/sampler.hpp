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
#ifndef LUMAFORGE_SAMPLER_HPP_
#define LUMAFORGE_SAMPLER_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lumaforge/lightops.hpp"
#include "lumaforge/severity_config.hpp"

namespace lumaforge {

/// Everything needed to replay a variant from its clean image.
struct VariantRecipe {
  std::string image_id;
  Severity severity = Severity::Mild;
  std::uint64_t seed = 0;
  int variant_index = 0;
  std::vector<OpParams> steps;

  std::vector<OpKind> kinds() const;
};

struct Violation {
  std::string invariant;  // "op_count", "duplicate", "conflict", "range", "tier", "order"
  int step = -1;          // offending step index, -1 for recipe-level violations
  std::string message;
};

/// Scene -> optics -> sensor stage list used to order recipe steps.
inline constexpr std::array<OpKind, 12> kCanonicalStages = {
    OpKind::Haze,  OpKind::Shadow, OpKind::Flare,     OpKind::Exposure, OpKind::Brightness, OpKind::Warm,
    OpKind::Cool,  OpKind::ColorCast, OpKind::Vignette, OpKind::Contrast, OpKind::Gamma,    OpKind::Grain,
};

int stage_of(OpKind kind);
std::vector<OpKind> canonical_order(std::vector<OpKind> kinds);

/// Deterministic in (global_seed, image_id, severity, variant_index).
VariantRecipe sample_recipe(std::uint64_t global_seed, std::string_view image_id, Severity severity,
                            const SeverityConfig& config, int variant_index = 0);

/// Never throws; empty iff the recipe satisfies every recipe invariant.
std::vector<Violation> validate_recipe(const VariantRecipe& recipe, const SeverityConfig& config);

/// Applies the steps in order, clamping after each.
RasterImage apply_recipe(const RasterImage& clean, const VariantRecipe& recipe);

/// Pipeline-level assignment of severity tiers to images.
class SeverityPolicy {
 public:
  enum class Mode { Fixed, Uniform, Weighted };

  static SeverityPolicy fixed(Severity s);
  static SeverityPolicy uniform();
  static SeverityPolicy weighted(std::array<double, 3> weights);
  /// Accepts "1", "2", "3", "uniform", or "weighted:w1,w2,w3".
  static SeverityPolicy parse(std::string_view text);

  Severity pick(std::uint64_t global_seed, std::string_view image_id, int variant_index) const;
  std::string describe() const;
  Mode mode() const { return mode_; }

 private:
  Mode mode_ = Mode::Uniform;
  Severity fixed_ = Severity::Mild;
  std::array<double, 3> weights_{1.0, 1.0, 1.0};
};

}  // namespace lumaforge

#endif  // LUMAFORGE_SAMPLER_HPP_
