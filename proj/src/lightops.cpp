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
#include "lumaforge/lightops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lumaforge/rng.hpp"

namespace lumaforge {
namespace {

constexpr std::array<std::string_view, 12> kOpNames = {
    "exposure", "shadow",     "warm",  "cool",       "vignette",  "contrast",
    "gamma",    "brightness", "grain", "haze",       "colorcast", "flare",
};

constexpr double kSlack = 1e-12;

double normalized(int i, int extent) {
  return extent > 1 ? static_cast<double>(i) / (extent - 1) : 0.5;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void require_srgb(const RasterImage& img, const char* op) {
  if (img.space() != ColorSpace::SRGB) {
    throw ContractError(std::string(op) + ": image must be tagged SRGB");
  }
}

std::string range_message(std::string_view what, double value, double lo, double hi) {
  std::ostringstream os;
  os << what << " = " << value << " outside [" << lo << ", " << hi << "]";
  return os.str();
}

std::optional<std::string> check_range(std::string_view what, double value, double lo, double hi) {
  if (!std::isfinite(value) || value < lo - kSlack || value > hi + kSlack) {
    return range_message(what, value, lo, hi);
  }
  return std::nullopt;
}

std::optional<std::string> check_positive(std::string_view what, double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream os;
    os << what << " = " << value << " must be finite and > 0";
    return os.str();
  }
  return std::nullopt;
}

template <typename... Checks>
std::optional<std::string> first_failure(Checks&&... checks) {
  std::optional<std::string> out;
  ((out = out ? out : std::forward<Checks>(checks)), ...);
  return out;
}

double edge_distance(double cx, double cy) {
  return std::min({cx, 1.0 - cx, cy, 1.0 - cy});
}

void enforce(const OpParams& p) {
  if (auto msg = check_params(p)) {
    throw ParameterError(std::string(to_string(kind_of(p))) + ": " + *msg);
  }
}

// Applies f(sample, channel, x, y) to every sample and clamps the result.
template <typename F>
RasterImage map_samples(const RasterImage& img, F&& f) {
  RasterImage out = img;
  auto& s = out.samples();
  const int w = img.width();
  const int h = img.height();
  Eigen::Index i = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < RasterImage::kChannels; ++c, ++i) {
        s[i] = static_cast<float>(f(static_cast<double>(s[i]), c, x, y));
      }
    }
  }
  clamp01_inplace(out);
  return out;
}

}  // namespace

std::string_view to_string(OpKind kind) { return kOpNames[static_cast<std::size_t>(kind)]; }

std::optional<OpKind> parse_op_kind(std::string_view name) {
  for (std::size_t i = 0; i < kOpNames.size(); ++i) {
    if (kOpNames[i] == name) return static_cast<OpKind>(i);
  }
  return std::nullopt;
}

OpParams identity_params(OpKind kind) {
  switch (kind) {
    case OpKind::Exposure: return ops::Exposure{};
    case OpKind::Shadow: return ops::Shadow{};
    case OpKind::Warm: return ops::Warm{};
    case OpKind::Cool: return ops::Cool{};
    case OpKind::Vignette: return ops::Vignette{};
    case OpKind::Contrast: return ops::Contrast{};
    case OpKind::Gamma: return ops::Gamma{};
    case OpKind::Brightness: return ops::Brightness{};
    case OpKind::Grain: return ops::Grain{};
    case OpKind::Haze: return ops::Haze{};
    case OpKind::ColorCast: return ops::ColorCast{};
    case OpKind::Flare: return ops::Flare{};
  }
  throw ContractError("unknown op kind");
}

std::vector<std::pair<std::string, double>> named_values(const OpParams& params) {
  using V = std::vector<std::pair<std::string, double>>;
  return std::visit(
      [](const auto& p) -> V {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ops::Exposure>) return V{{"ev", p.ev}};
        if constexpr (std::is_same_v<T, ops::Brightness>) return V{{"percent", p.percent}};
        if constexpr (std::is_same_v<T, ops::Contrast>) return V{{"factor", p.factor}};
        if constexpr (std::is_same_v<T, ops::Gamma>) return V{{"gamma", p.gamma}};
        if constexpr (std::is_same_v<T, ops::Warm> || std::is_same_v<T, ops::Cool>) return V{{"tint", p.tint}};
        if constexpr (std::is_same_v<T, ops::Vignette>)
          return V{{"strength", p.strength}, {"center_x", p.center_x}, {"center_y", p.center_y}, {"power", p.power}};
        if constexpr (std::is_same_v<T, ops::Shadow>)
          return V{{"angle_deg", p.angle_deg}, {"strength", p.strength}, {"sharpness", p.sharpness}};
        if constexpr (std::is_same_v<T, ops::Grain>) return V{{"intensity", p.intensity}};
        if constexpr (std::is_same_v<T, ops::Haze>) return V{{"alpha", p.alpha}};
        if constexpr (std::is_same_v<T, ops::ColorCast>) return V{{"hue_deg", p.hue_deg}, {"strength", p.strength}};
        if constexpr (std::is_same_v<T, ops::Flare>)
          return V{{"edge_distance", edge_distance(p.center_x, p.center_y)},
                   {"sigma", p.sigma},
                   {"amplitude", p.amplitude}};
      },
      params);
}

std::optional<std::string> check_params(const OpParams& params) {
  return std::visit(
      [](const auto& p) -> std::optional<std::string> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ops::Exposure>) {
          if (!std::isfinite(p.ev)) return std::string("ev must be finite");
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ops::Brightness>) {
          return check_range("percent", p.percent, -45.0, 45.0);
        } else if constexpr (std::is_same_v<T, ops::Contrast>) {
          return check_range("factor", p.factor, 0.6, 1.4);
        } else if constexpr (std::is_same_v<T, ops::Gamma>) {
          return check_range("gamma", p.gamma, 0.55, 1.5);
        } else if constexpr (std::is_same_v<T, ops::Warm> || std::is_same_v<T, ops::Cool>) {
          return check_range("tint", p.tint, 0.0, 0.25);
        } else if constexpr (std::is_same_v<T, ops::Vignette>) {
          return first_failure(check_range("strength", p.strength, 0.0, 0.65),
                               check_range("center_x", p.center_x, 0.4, 0.6),
                               check_range("center_y", p.center_y, 0.4, 0.6), check_positive("power", p.power));
        } else if constexpr (std::is_same_v<T, ops::Shadow>) {
          std::optional<std::string> angle;
          if (!std::isfinite(p.angle_deg)) angle = "angle_deg must be finite";
          return first_failure(std::move(angle), check_range("strength", p.strength, 0.0, 0.75),
                               check_positive("sharpness", p.sharpness));
        } else if constexpr (std::is_same_v<T, ops::Grain>) {
          return check_range("intensity", p.intensity, 0.0, 0.07);
        } else if constexpr (std::is_same_v<T, ops::Haze>) {
          return first_failure(check_range("alpha", p.alpha, 0.0, 1.0),
                               check_range("haze_color.r", p.color.r, 0.0, 1.0),
                               check_range("haze_color.g", p.color.g, 0.0, 1.0),
                               check_range("haze_color.b", p.color.b, 0.0, 1.0));
        } else if constexpr (std::is_same_v<T, ops::ColorCast>) {
          std::optional<std::string> hue;
          if (!std::isfinite(p.hue_deg) || p.hue_deg < 0.0 || p.hue_deg >= 360.0) {
            hue = range_message("hue_deg", p.hue_deg, 0.0, 360.0) + " (half-open)";
          }
          return first_failure(std::move(hue), check_range("strength", p.strength, 0.0, 1.0));
        } else if constexpr (std::is_same_v<T, ops::Flare>) {
          return first_failure(check_range("center_x", p.center_x, 0.0, 1.0),
                               check_range("center_y", p.center_y, 0.0, 1.0),
                               check_range("edge_distance", edge_distance(p.center_x, p.center_y), 0.0, 0.15),
                               check_positive("sigma", p.sigma),
                               check_range("amplitude", p.amplitude, 0.0, 1.0));
        }
      },
      params);
}

RasterImage apply_exposure(const RasterImage& img, double ev) {
  require_srgb(img, "exposure");
  enforce(ops::Exposure{ev});
  if (ev == 0.0) return clamp01(img);
  const double gain = std::exp2(ev);
  return map_samples(img, [gain](double s, int, int, int) {
    return srgb_encode(std::clamp(srgb_decode(s) * gain, 0.0, 1.0));
  });
}

RasterImage apply_brightness(const RasterImage& img, double percent) {
  require_srgb(img, "brightness");
  enforce(ops::Brightness{percent});
  const double gain = 1.0 + percent / 100.0;
  return map_samples(img, [gain](double s, int, int, int) { return s * gain; });
}

RasterImage apply_contrast(const RasterImage& img, double factor) {
  require_srgb(img, "contrast");
  enforce(ops::Contrast{factor});
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  const auto& s = img.samples();
  for (Eigen::Index i = 0; i < s.size(); ++i) mean[i % 3] += s[i];
  const double n = static_cast<double>(std::max<std::size_t>(img.pixel_count(), 1));
  for (auto& m : mean) m /= n;
  // (I - mu) f + mu written as I + (f - 1)(I - mu) so f = 1 is exact.
  const double k = factor - 1.0;
  return map_samples(img, [&mean, k](double v, int c, int, int) { return v + k * (v - mean[c]); });
}

RasterImage apply_gamma(const RasterImage& img, double gamma) {
  require_srgb(img, "gamma");
  enforce(ops::Gamma{gamma});
  const double e = 1.0 / gamma;
  return map_samples(img, [e](double s, int, int, int) { return std::pow(std::max(s, 0.0), e); });
}

RasterImage apply_color_temperature(const RasterImage& img, double tint, TemperatureDirection direction) {
  require_srgb(img, "color_temperature");
  enforce(ops::Warm{tint});
  const double up = 1.0 + tint;
  const double down = 1.0 - tint;
  const std::array<double, 3> gain = direction == TemperatureDirection::Warm
                                         ? std::array<double, 3>{up, 1.0, down}
                                         : std::array<double, 3>{down, 1.0, up};
  return map_samples(img, [&gain](double s, int c, int, int) { return s * gain[c]; });
}

RasterImage apply_vignette(const RasterImage& img, double strength, double center_x, double center_y,
                           double power) {
  require_srgb(img, "vignette");
  enforce(ops::Vignette{strength, center_x, center_y, power});
  const double cx = center_x * (img.width() - 1);
  const double cy = center_y * (img.height() - 1);
  const double fx = std::max(cx, img.width() - 1 - cx);
  const double fy = std::max(cy, img.height() - 1 - cy);
  const double r_max = std::hypot(fx, fy);
  if (!(r_max > 0.0)) throw ParameterError("vignette: degenerate geometry (zero radius)");
  return map_samples(img, [=](double s, int, int x, int y) {
    const double r = std::hypot(x - cx, y - cy) / r_max;
    return s * (1.0 - strength * std::pow(r, power));
  });
}

RasterImage apply_shadow(const RasterImage& img, double angle_deg, double strength, double sharpness) {
  require_srgb(img, "shadow");
  enforce(ops::Shadow{angle_deg, strength, sharpness});
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double dx = std::cos(theta);
  const double dy = std::sin(theta);
  const double norm = std::abs(dx) + std::abs(dy);
  const int w = img.width();
  const int h = img.height();
  return map_samples(img, [=](double s, int, int x, int y) {
    const double u = 2.0 * normalized(x, w) - 1.0;
    const double v = 2.0 * normalized(y, h) - 1.0;
    const double t = (u * dx + v * dy) / norm;
    return s * (1.0 - strength * logistic(sharpness * t));
  });
}

RasterImage apply_grain(const RasterImage& img, double intensity, std::uint64_t noise_seed) {
  require_srgb(img, "grain");
  enforce(ops::Grain{intensity, noise_seed});
  const int w = img.width();
  return map_samples(img, [=](double s, int c, int x, int y) {
    const auto i = (static_cast<std::uint64_t>(y) * w + x) * 3 + c;
    return s + intensity * CounterRng::normal_at(noise_seed, i);
  });
}

RasterImage apply_haze(const RasterImage& img, double alpha, PixelRgb haze_color) {
  require_srgb(img, "haze");
  enforce(ops::Haze{alpha, haze_color});
  return map_samples(img, [=](double s, int c, int, int) { return s + alpha * (haze_color[c] - s); });
}

std::array<double, 3> hue_to_rgb(double hue_deg) {
  double h = std::fmod(hue_deg, 360.0);
  if (h < 0.0) h += 360.0;
  const double hp = h / 60.0;
  const double x = 1.0 - std::abs(std::fmod(hp, 2.0) - 1.0);
  switch (static_cast<int>(hp)) {
    case 0: return {1.0, x, 0.0};
    case 1: return {x, 1.0, 0.0};
    case 2: return {0.0, 1.0, x};
    case 3: return {0.0, x, 1.0};
    case 4: return {x, 0.0, 1.0};
    default: return {1.0, 0.0, x};
  }
}

RasterImage apply_color_cast(const RasterImage& img, double hue_deg, double strength) {
  require_srgb(img, "color_cast");
  enforce(ops::ColorCast{hue_deg, strength});
  const auto d = hue_to_rgb(hue_deg);
  const double mean = (d[0] + d[1] + d[2]) / 3.0;
  const std::array<double, 3> gain = {1.0 + strength * (d[0] - mean), 1.0 + strength * (d[1] - mean),
                                      1.0 + strength * (d[2] - mean)};
  return map_samples(img, [&gain](double s, int c, int, int) { return s * gain[c]; });
}

RasterImage apply_lens_flare(const RasterImage& img, double center_x, double center_y, double sigma,
                             double amplitude) {
  require_srgb(img, "lens_flare");
  enforce(ops::Flare{center_x, center_y, sigma, amplitude});
  const int w = img.width();
  const int h = img.height();
  const double denom = 2.0 * sigma * sigma;
  return map_samples(img, [=](double s, int c, int x, int y) {
    const double ddx = normalized(x, w) - center_x;
    const double ddy = normalized(y, h) - center_y;
    return s + amplitude * std::exp(-(ddx * ddx + ddy * ddy) / denom) * kFlareColor[c];
  });
}

RasterImage apply_op(const RasterImage& img, const OpParams& params) {
  return std::visit(
      [&img](const auto& p) -> RasterImage {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ops::Exposure>) return apply_exposure(img, p.ev);
        if constexpr (std::is_same_v<T, ops::Brightness>) return apply_brightness(img, p.percent);
        if constexpr (std::is_same_v<T, ops::Contrast>) return apply_contrast(img, p.factor);
        if constexpr (std::is_same_v<T, ops::Gamma>) return apply_gamma(img, p.gamma);
        if constexpr (std::is_same_v<T, ops::Warm>)
          return apply_color_temperature(img, p.tint, TemperatureDirection::Warm);
        if constexpr (std::is_same_v<T, ops::Cool>)
          return apply_color_temperature(img, p.tint, TemperatureDirection::Cool);
        if constexpr (std::is_same_v<T, ops::Vignette>)
          return apply_vignette(img, p.strength, p.center_x, p.center_y, p.power);
        if constexpr (std::is_same_v<T, ops::Shadow>) return apply_shadow(img, p.angle_deg, p.strength, p.sharpness);
        if constexpr (std::is_same_v<T, ops::Grain>) return apply_grain(img, p.intensity, p.noise_seed);
        if constexpr (std::is_same_v<T, ops::Haze>) return apply_haze(img, p.alpha, p.color);
        if constexpr (std::is_same_v<T, ops::ColorCast>) return apply_color_cast(img, p.hue_deg, p.strength);
        if constexpr (std::is_same_v<T, ops::Flare>)
          return apply_lens_flare(img, p.center_x, p.center_y, p.sigma, p.amplitude);
      },
      params);
}

}  // namespace lumaforge
