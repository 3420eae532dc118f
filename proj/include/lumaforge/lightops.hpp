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
#ifndef LUMAFORGE_LIGHTOPS_HPP_
#define LUMAFORGE_LIGHTOPS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lumaforge/image.hpp"

namespace lumaforge {

enum class OpKind {
  Exposure,
  Shadow,
  Warm,
  Cool,
  Vignette,
  Contrast,
  Gamma,
  Brightness,
  Grain,
  Haze,
  ColorCast,
  Flare,
};

inline constexpr std::array<OpKind, 12> kAllOpKinds = {
    OpKind::Exposure, OpKind::Shadow,     OpKind::Warm,  OpKind::Cool,
    OpKind::Vignette, OpKind::Contrast,   OpKind::Gamma, OpKind::Brightness,
    OpKind::Grain,    OpKind::Haze,       OpKind::ColorCast, OpKind::Flare,
};

std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view name);

enum class TemperatureDirection { Warm, Cool };

// Normalized coordinates run from 0 at the first pixel center to 1 at the last.
namespace ops {

struct Exposure {
  double ev = 0.0;
};
struct Brightness {
  double percent = 0.0;
};
struct Contrast {
  double factor = 1.0;
};
struct Gamma {
  double gamma = 1.0;
};
struct Warm {
  double tint = 0.0;
};
struct Cool {
  double tint = 0.0;
};
struct Vignette {
  double strength = 0.0;
  double center_x = 0.5;
  double center_y = 0.5;
  double power = 2.5;
};
struct Shadow {
  double angle_deg = 0.0;
  double strength = 0.0;
  double sharpness = 4.0;
};
struct Grain {
  double intensity = 0.0;
  std::uint64_t noise_seed = 0;
};
struct Haze {
  double alpha = 0.0;
  PixelRgb color{0.88f, 0.9f, 0.92f};
};
struct ColorCast {
  double hue_deg = 0.0;
  double strength = 0.0;
};
struct Flare {
  double center_x = 0.0;
  double center_y = 0.5;
  double sigma = 0.1;
  double amplitude = 0.0;
};

}  // namespace ops

/// Alternative index equals the OpKind enumerator value.
using OpParams = std::variant<ops::Exposure, ops::Shadow, ops::Warm, ops::Cool, ops::Vignette,
                              ops::Contrast, ops::Gamma, ops::Brightness, ops::Grain, ops::Haze,
                              ops::ColorCast, ops::Flare>;

inline OpKind kind_of(const OpParams& p) { return static_cast<OpKind>(p.index()); }

/// Parameters at which the op is the identity.
OpParams identity_params(OpKind kind);

/// Named scalar view of the parameters, in a stable order. Flare reports its
/// derived `edge_distance` in addition to the raw center.
std::vector<std::pair<std::string, double>> named_values(const OpParams& p);

/// Empty when the parameters lie in the op's accepted envelope, otherwise a
/// message naming the violated range.
std::optional<std::string> check_params(const OpParams& p);

RasterImage apply_exposure(const RasterImage& img, double ev);
RasterImage apply_brightness(const RasterImage& img, double percent);
RasterImage apply_contrast(const RasterImage& img, double factor);
RasterImage apply_gamma(const RasterImage& img, double gamma);
RasterImage apply_color_temperature(const RasterImage& img, double tint, TemperatureDirection direction);
RasterImage apply_vignette(const RasterImage& img, double strength, double center_x, double center_y,
                           double power = 2.5);
RasterImage apply_shadow(const RasterImage& img, double angle_deg, double strength, double sharpness);
RasterImage apply_grain(const RasterImage& img, double intensity, std::uint64_t noise_seed);
RasterImage apply_haze(const RasterImage& img, double alpha, PixelRgb haze_color);
RasterImage apply_color_cast(const RasterImage& img, double hue_deg, double strength);
RasterImage apply_lens_flare(const RasterImage& img, double center_x, double center_y, double sigma,
                             double amplitude);

/// Dispatches to the matching apply_* function after check_params.
RasterImage apply_op(const RasterImage& img, const OpParams& params);

/// HSV(hue, 1, 1) as RGB.
std::array<double, 3> hue_to_rgb(double hue_deg);

inline constexpr std::array<double, 3> kFlareColor = {1.0, 0.96, 0.82};

}  // namespace lumaforge

#endif  // LUMAFORGE_LIGHTOPS_HPP_
