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
#include "lumaforge/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lumaforge {
namespace {

// Valid-mode separable filtering: output is (rows - w + 1) x (cols - w + 1).
Eigen::ArrayXXd filter_valid(const Eigen::ArrayXXd& in, const Eigen::ArrayXd& taps) {
  const Eigen::Index w = taps.size();
  const Eigen::Index rows = in.rows() - w + 1;
  const Eigen::Index cols = in.cols() - w + 1;
  Eigen::ArrayXXd horiz = Eigen::ArrayXXd::Zero(in.rows(), cols);
  for (Eigen::Index k = 0; k < w; ++k) horiz += taps[k] * in.middleCols(k, cols);
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(rows, cols);
  for (Eigen::Index k = 0; k < w; ++k) out += taps[k] * horiz.middleRows(k, rows);
  return out;
}

}  // namespace

void SsimParams::check() const {
  if (window < 3 || window % 2 == 0) throw ParameterError("ssim window must be odd and >= 3");
  if (!(sigma > 0.0)) throw ParameterError("ssim sigma must be > 0");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ParameterError("ssim K1, K2 must be > 0");
  if (!(dynamic_range > 0.0)) throw ParameterError("ssim dynamic range must be > 0");
}

Eigen::ArrayXXd luminance(const RasterImage& img) {
  Eigen::ArrayXXd y(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      y(r, c) = 0.299 * img.at(c, r, 0) + 0.587 * img.at(c, r, 1) + 0.114 * img.at(c, r, 2);
    }
  }
  return y;
}

Eigen::ArrayXd gaussian_taps(int window, double sigma) {
  Eigen::ArrayXd g(window);
  const int half = window / 2;
  for (int i = 0; i < window; ++i) {
    const double d = i - half;
    g[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  return g / g.sum();
}

double ssim_luma(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b, const SsimParams& params) {
  params.check();
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractError("ssim: dimension mismatch");
  if (a.rows() < params.window || a.cols() < params.window) {
    throw ContractError("ssim: image smaller than the " + std::to_string(params.window) + "px window");
  }
  const Eigen::ArrayXd g = gaussian_taps(params.window, params.sigma);
  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);

  const Eigen::ArrayXXd mu_a = filter_valid(a, g);
  const Eigen::ArrayXXd mu_b = filter_valid(b, g);
  const Eigen::ArrayXXd var_a = filter_valid(a * a, g) - mu_a * mu_a;
  const Eigen::ArrayXXd var_b = filter_valid(b * b, g) - mu_b * mu_b;
  const Eigen::ArrayXXd cov = filter_valid(a * b, g) - mu_a * mu_b;

  const Eigen::ArrayXXd map = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                              ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
  return map.mean();
}

double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params) {
  if (!a.same_shape(b)) throw ContractError("ssim: dimension mismatch");
  if (a.space() != ColorSpace::SRGB || b.space() != ColorSpace::SRGB) {
    throw ContractError("ssim: both images must be tagged SRGB");
  }
  return ssim_luma(luminance(a), luminance(b), params);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::from_image(const RasterImage& img) {
  BinaryMask m(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const PixelRgb p = img.pixel(x, y);
      m.set(x, y, std::max({p.r, p.g, p.b}) > 127.5f / 255.0f);
    }
  }
  return m;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_) throw ContractError("mask_iou: dimension mismatch");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.bits_.size(); ++i) {
    inter += a.bits_[i] & b.bits_[i];
    uni += a.bits_[i] | b.bits_[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

void IouHistogram::add(double iou) {
  const double clamped = std::clamp(iou, 0.0, 1.0);
  const auto bin = std::min<int>(kIouBins - 1, static_cast<int>(std::floor(clamped * kIouBins)));
  ++counts[static_cast<std::size_t>(bin)];
}

std::size_t IouHistogram::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

}  // namespace lumaforge
