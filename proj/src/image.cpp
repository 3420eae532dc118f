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
#include "lumaforge/image.hpp"

#include <cmath>

namespace lumaforge {

RasterImage::RasterImage(int width, int height, ColorSpace space)
    : width_(width), height_(height), space_(space) {
  if (width < 0 || height < 0) {
    throw ContractError("image dimensions must be non-negative");
  }
  data_ = Samples::Zero(static_cast<Eigen::Index>(sample_count()));
}

RasterImage RasterImage::filled(int width, int height, PixelRgb value, ColorSpace space) {
  RasterImage img(width, height, space);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    img.data_[3 * p] = value.r;
    img.data_[3 * p + 1] = value.g;
    img.data_[3 * p + 2] = value.b;
  }
  return img;
}

bool RasterImage::operator==(const RasterImage& other) const {
  if (!same_shape(other) || space_ != other.space_) return false;
  return (data_ == other.data_).all();
}

double srgb_decode(double s) {
  if (s <= 0.04045) return s / 12.92;
  return std::pow((s + 0.055) / 1.055, 2.4);
}

double srgb_encode(double l) {
  if (l <= 0.0031308) return l * 12.92;
  return 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

RasterImage srgb_to_linear(const RasterImage& img) {
  if (img.space() != ColorSpace::SRGB) {
    throw ContractError("srgb_to_linear: image is not tagged SRGB");
  }
  RasterImage out = img;
  out.samples() = img.samples().unaryExpr([](float s) { return static_cast<float>(srgb_decode(s)); });
  out.set_space(ColorSpace::LINEAR);
  clamp01_inplace(out);
  return out;
}

RasterImage linear_to_srgb(const RasterImage& img) {
  if (img.space() != ColorSpace::LINEAR) {
    throw ContractError("linear_to_srgb: image is not tagged LINEAR");
  }
  RasterImage out = img;
  out.samples() = img.samples().unaryExpr([](float l) { return static_cast<float>(srgb_encode(l)); });
  out.set_space(ColorSpace::SRGB);
  clamp01_inplace(out);
  return out;
}

void clamp01_inplace(RasterImage& img) {
  img.samples() = img.samples().unaryExpr([](float v) {
    if (!(v > 0.0f)) return 0.0f;  // also catches NaN
    return v > 1.0f ? 1.0f : v;
  });
}

RasterImage clamp01(RasterImage img) {
  clamp01_inplace(img);
  return img;
}

std::vector<std::uint8_t> to_u8(const RasterImage& img) {
  std::vector<std::uint8_t> out(img.sample_count());
  const auto& s = img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = s[static_cast<Eigen::Index>(i)];
    if (!(v > 0.0)) v = 0.0;
    if (v > 1.0) v = 1.0;
    out[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
  }
  return out;
}

RasterImage from_u8(std::span<const std::uint8_t> rgb, int width, int height) {
  RasterImage img(width, height, ColorSpace::SRGB);
  if (rgb.size() != img.sample_count()) {
    throw ContractError("from_u8: buffer size does not match dimensions");
  }
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    img.samples()[static_cast<Eigen::Index>(i)] = static_cast<float>(rgb[i]) / 255.0f;
  }
  return img;
}

}  // namespace lumaforge
