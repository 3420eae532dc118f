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
#ifndef LUMAFORGE_METRICS_HPP_
#define LUMAFORGE_METRICS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "lumaforge/image.hpp"
#include "lumaforge/pairgen.hpp"

namespace lumaforge {

/// Gaussian-window SSIM settings; defaults are the canonical Wang et al. values
/// for images in [0, 1].
struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  void check() const;
};

/// Rec. 601 luma as a height x width array.
Eigen::ArrayXXd luminance(const RasterImage& img);

/// Normalized 1-D Gaussian taps.
Eigen::ArrayXd gaussian_taps(int window, double sigma);

/// Mean SSIM over all valid window positions of the luma planes.
double ssim(const RasterImage& a, const RasterImage& b, const SsimParams& params = {});
double ssim_luma(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b, const SsimParams& params = {});

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height) : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool on = true) { bits_[index(x, y)] = on ? 1 : 0; }
  std::size_t count() const;
  bool operator==(const BinaryMask&) const = default;

  /// Foreground where any channel of the 8-bit image exceeds 127.
  static BinaryMask from_image(const RasterImage& img);

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  friend double mask_iou(const BinaryMask&, const BinaryMask&);

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// |a & b| / |a | b|, and 1 when both masks are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

inline constexpr int kIouBins = 20;  // [0, 1] in steps of 0.05

struct IouHistogram {
  std::array<std::size_t, kIouBins> counts{};
  void add(double iou);
  std::size_t total() const;
};

struct TierStats {
  int severity = 0;
  std::size_t pairs = 0;
  double ssim_mean = 0.0;
  double ssim_std = 0.0;
};

/// Per-instance IoU of two systems against shared ground truth.
struct InstanceIou {
  std::string instance_id;
  double system_a = 0.0;
  double system_b = 0.0;
};

struct PairSsim {
  std::string image_id;
  int variant_index = 0;
  int severity = 0;
  double ssim = 0.0;
};

struct SeverityReport {
  std::array<TierStats, 3> tiers;
  std::vector<PairSsim> rows;
  std::optional<std::vector<InstanceIou>> instances;
  IouHistogram histogram_a;
  IouHistogram histogram_b;
  std::size_t wins_b = 0;  // system_b > system_a
  std::size_t wins_a = 0;
  std::size_t ties = 0;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Instance mask triples listed in a JSON file:
/// {"instances": [{"id": ..., "ground_truth": path, "system_a": path, "system_b": path}]}
/// with paths relative to the file.
std::vector<InstanceIou> load_instance_ious(const std::filesystem::path& listing);

SeverityReport severity_report(const PairManifest& manifest, const std::filesystem::path& out_root,
                               const SsimParams& params = {},
                               std::optional<std::vector<InstanceIou>> instances = std::nullopt);

}  // namespace lumaforge

#endif  // LUMAFORGE_METRICS_HPP_
