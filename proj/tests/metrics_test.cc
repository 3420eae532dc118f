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
#include <algorithm>
#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "lumaforge/errors.hpp"
#include "lumaforge/metrics.hpp"
#include "lumaforge/rng.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"

namespace lumaforge {
namespace {

namespace fs = std::filesystem;

using testing::ssim_oracle;

RasterImage random_image(int w, int h, std::uint64_t seed) {
  RasterImage img(w, h);
  CounterRng rng(seed);
  for (Eigen::Index i = 0; i < img.samples().size(); ++i) img.samples()[i] = static_cast<float>(rng.uniform());
  return img;
}

TEST(Ssim, MatchesDirectOracleOnRandomPairs) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const RasterImage a = random_image(64, 64, 2 * s + 1);
    RasterImage b = a;
    CounterRng rng(100 + s);
    for (Eigen::Index i = 0; i < b.samples().size(); ++i) {
      b.samples()[i] = std::clamp(b.samples()[i] + static_cast<float>(0.3 * rng.uniform(-1, 1)), 0.0f, 1.0f);
    }
    const double fast = ssim(a, b);
    EXPECT_NEAR(fast, ssim_oracle(luminance(a), luminance(b)), 1e-6);
  }
}

TEST(Ssim, GradientWithOffsetMatchesOracle) {
  RasterImage a(64, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      for (int c = 0; c < 3; ++c) a.at(x, y, c) = static_cast<float>((x + y) / 160.0);
    }
  }
  RasterImage b = a;
  b.samples() += 0.1f;
  EXPECT_NEAR(ssim(a, b), ssim_oracle(luminance(a), luminance(b)), 1e-6);
  EXPECT_LT(ssim(a, b), 1.0);
}

TEST(Ssim, IdenticalIsExactlyOneAndSymmetric) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const RasterImage a = random_image(40, 30, s);
    EXPECT_EQ(ssim(a, a), 1.0);
  }
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RasterImage a = random_image(16, 13, 1000 + s);
    const RasterImage b = random_image(16, 13, 5000 + s);
    EXPECT_EQ(ssim(a, b), ssim(b, a));
  }
}

TEST(Ssim, ConstantImagesReduceToLuminanceTerm) {
  RasterImage a(33, 33);
  a.samples().setConstant(0.4f);
  RasterImage b = a;
  b.samples().setConstant(0.6f);
  const double l = (2 * 0.4 * 0.6 + 1e-4) / (0.16 + 0.36 + 1e-4);
  EXPECT_NEAR(ssim(a, b), l, 1e-6);
  RasterImage a2(44, 33), b2(44, 33);
  a2.samples().setConstant(0.4f);
  b2.samples().setConstant(0.6f);
  EXPECT_NEAR(ssim(a2, b2), l, 1e-6);
}

TEST(Ssim, Errors) {
  EXPECT_THROW(ssim(RasterImage(20, 20), RasterImage(20, 21)), ContractError);
  EXPECT_THROW(ssim(RasterImage(8, 8), RasterImage(8, 8)), ContractError);
  SsimParams p;
  p.window = 4;
  EXPECT_THROW(p.check(), ParameterError);
  EXPECT_NEAR(gaussian_taps(11, 1.5).sum(), 1.0, 1e-15);
}

TEST(MaskIou, Examples) {
  BinaryMask a(2, 2), b(2, 2);
  a.set(0, 0);
  a.set(0, 1);
  b.set(0, 1);
  b.set(1, 1);
  EXPECT_NEAR(mask_iou(a, b), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(mask_iou(a, a), 1.0);
  BinaryMask c(2, 2);
  c.set(1, 0);
  EXPECT_EQ(mask_iou(a, c), 0.0);
  EXPECT_EQ(mask_iou(BinaryMask(3, 3), BinaryMask(3, 3)), 1.0);
  EXPECT_THROW(mask_iou(BinaryMask(2, 2), BinaryMask(2, 3)), ContractError);
}

TEST(MaskIou, PropertiesOnRandomMasks) {
  CounterRng rng(77);
  for (int t = 0; t < 200; ++t) {
    BinaryMask a(7, 5), b(7, 5);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 7; ++x) {
        a.set(x, y, rng.uniform() < 0.4);
        b.set(x, y, rng.uniform() < 0.4);
      }
    }
    const double iou = mask_iou(a, b);
    EXPECT_EQ(iou, mask_iou(b, a));
    EXPECT_EQ(iou == 1.0, a == b);
    if (a.count() > 0 && b.count() > 0) {
      EXPECT_LE(iou, static_cast<double>(std::min(a.count(), b.count())) / std::max(a.count(), b.count()) + 1e-15);
    }
  }
}

TEST(IouHistogram, BinsPartitionTheUnitInterval) {
  IouHistogram h;
  for (double v : {0.0, 0.049, 0.05, 0.5, 0.99, 1.0}) h.add(v);
  EXPECT_EQ(h.total(), 6u);
  EXPECT_EQ(h.counts[0], 2u);
  EXPECT_EQ(h.counts[1], 1u);
  EXPECT_EQ(h.counts[10], 1u);
  EXPECT_EQ(h.counts[19], 2u);
}

TEST(SeverityReport, IdentityRecipesGiveUnitSsim) {
  const auto dir = testing::scratch_dir("report_identity");
  const auto f = testing::make_coco_fixture(dir / "data", {.images = 6});
  SeverityConfig c = SeverityConfig::defaults();
  for (auto& t : c.tiers) {
    t.max_ops = 1;
    t.ops.clear();
    t.ops[OpKind::Gamma] = {{"gamma", {1.0, 1.0}}};
  }
  PairOptions opt;
  opt.global_seed = 4;
  opt.variants_per_image = 3;
  const auto m = generate_pairs(ingest_coco(f.annotations, f.images), c, opt, dir / "out");
  const auto r = severity_report(m, dir / "out");
  std::size_t pairs = 0;
  for (const auto& t : r.tiers) {
    pairs += t.pairs;
    if (t.pairs) {
      EXPECT_EQ(t.ssim_mean, 1.0);
    }
  }
  EXPECT_EQ(pairs, 18u);
  EXPECT_EQ(r.rows.size(), 18u);
  const auto j = r.to_json();
  EXPECT_TRUE(j["tiers"][0]["fid"].is_null());
  EXPECT_TRUE(j["iou"].is_null());
}

TEST(SeverityReport, InstanceListingFeedsHistogram) {
  const auto dir = testing::scratch_dir("report_masks");
  auto mask_image = [](int x0, int x1) {
    RasterImage img(8, 8);
    for (int y = 2; y < 6; ++y) {
      for (int x = x0; x < x1; ++x) {
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = 1.0f;
      }
    }
    return img;
  };
  save_image(mask_image(2, 6), dir / "gt.png");
  save_image(mask_image(2, 6), dir / "same.png");
  save_image(mask_image(4, 8), dir / "shift.png");
  std::ofstream(dir / "masks.json") << R"({"instances": [
      {"id": 1, "ground_truth": "gt.png", "system_a": "shift.png", "system_b": "same.png"},
      {"id": "two", "ground_truth": "gt.png", "system_a": "same.png", "system_b": "same.png"},
      {"id": 3, "ground_truth": "gt.png", "system_a": "same.png", "system_b": "shift.png"}]})";
  const auto inst = load_instance_ious(dir / "masks.json");
  ASSERT_EQ(inst.size(), 3u);
  EXPECT_NEAR(inst[0].system_a, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(inst[0].system_b, 1.0);
  PairManifest empty;
  const auto r = severity_report(empty, dir, {}, inst);
  EXPECT_EQ(r.histogram_a.total(), 3u);
  EXPECT_EQ(r.histogram_b.total(), 3u);
  EXPECT_EQ(r.wins_b, 1u);
  EXPECT_EQ(r.wins_a, 1u);
  EXPECT_EQ(r.ties, 1u);
  for (const auto& t : r.tiers) EXPECT_EQ(t.pairs, 0u);
  EXPECT_EQ(r.to_json()["iou"]["instances"], 3);
}

}  // namespace
}  // namespace lumaforge
