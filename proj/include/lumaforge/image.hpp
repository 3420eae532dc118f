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
#ifndef LUMAFORGE_IMAGE_HPP_
#define LUMAFORGE_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lumaforge/errors.hpp"

namespace lumaforge {

enum class ColorSpace { SRGB, LINEAR };

struct PixelRgb {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;

  float operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  bool operator==(const PixelRgb&) const = default;
};

/// H x W x 3 interleaved float image. Samples are kept in [0,1] by every public
/// operation; the color space tag follows the conversions applied to it.
class RasterImage {
 public:
  static constexpr int kChannels = 3;
  using Samples = Eigen::Array<float, Eigen::Dynamic, 1>;

  RasterImage() = default;
  RasterImage(int width, int height, ColorSpace space = ColorSpace::SRGB);

  static RasterImage filled(int width, int height, PixelRgb value,
                            ColorSpace space = ColorSpace::SRGB);

  int width() const { return width_; }
  int height() const { return height_; }
  ColorSpace space() const { return space_; }
  void set_space(ColorSpace space) { space_ = space; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t sample_count() const { return pixel_count() * kChannels; }
  bool empty() const { return pixel_count() == 0; }

  float& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c) const { return data_[index(x, y, c)]; }
  PixelRgb pixel(int x, int y) const {
    const auto i = index(x, y, 0);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }

  Samples& samples() { return data_; }
  const Samples& samples() const { return data_; }
  std::span<const float> view() const { return {data_.data(), static_cast<std::size_t>(data_.size())}; }

  bool same_shape(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool operator==(const RasterImage& other) const;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int width_ = 0;
  int height_ = 0;
  ColorSpace space_ = ColorSpace::SRGB;
  Samples data_;
};

/// Standard piecewise sRGB transfer function (IEC 61966-2-1).
double srgb_decode(double s);
double srgb_encode(double l);

RasterImage srgb_to_linear(const RasterImage& img);
RasterImage linear_to_srgb(const RasterImage& img);

/// Clamp every sample to [0,1]. NaN maps to 0.
RasterImage clamp01(RasterImage img);
void clamp01_inplace(RasterImage& img);

/// 8-bit quantization with round-half-up, interleaved RGB.
std::vector<std::uint8_t> to_u8(const RasterImage& img);
RasterImage from_u8(std::span<const std::uint8_t> rgb, int width, int height);

/// Decodes PNG or JPEG (sniffed from magic bytes) into an SRGB-tagged image.
/// Grayscale inputs are replicated to three channels; alpha is dropped.
RasterImage load_image(const std::filesystem::path& path);

/// Writes PNG or JPEG depending on the file extension (.png, .jpg, .jpeg).
void save_image(const RasterImage& img, const std::filesystem::path& path, int jpeg_quality = 95);

}  // namespace lumaforge

#endif  // LUMAFORGE_IMAGE_HPP_
