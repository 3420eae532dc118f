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
#include <cmath>
#include <fstream>

#include <gtest/gtest.h>
#include <png.h>

#include "lumaforge/errors.hpp"
#include "lumaforge/image.hpp"
#include "lumaforge/rng.hpp"
#include "support/fixture.hpp"

namespace lumaforge {
namespace {

RasterImage uniform_image(int w, int h, float v, ColorSpace space = ColorSpace::SRGB) {
  RasterImage img(w, h, space);
  img.samples().setConstant(v);
  return img;
}

TEST(Srgb, FixedPointsAndMidGray) {
  EXPECT_EQ(srgb_decode(0.0), 0.0);
  EXPECT_EQ(srgb_decode(1.0), 1.0);
  EXPECT_NEAR(srgb_decode(0.5), std::pow(0.555 / 1.055, 2.4), 1e-12);
  EXPECT_NEAR(srgb_decode(0.5), 0.21404, 1e-5);
  EXPECT_NEAR(srgb_decode(0.04), 0.04 / 12.92, 1e-15);
  EXPECT_NEAR(srgb_encode(0.21404), 0.5, 1e-5);
  EXPECT_EQ(srgb_encode(0.0), 0.0);
}

TEST(Srgb, RoundTripDenseGrid) {
  double worst = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double x = i / 100000.0;
    worst = std::max(worst, std::abs(srgb_encode(srgb_decode(x)) - x));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Srgb, ImageConversionFlipsTagAndRoundTrips) {
  RasterImage img(100, 100);
  CounterRng rng(3);
  for (Eigen::Index i = 0; i < img.samples().size(); ++i) img.samples()[i] = static_cast<float>(rng.uniform());
  const RasterImage lin = srgb_to_linear(img);
  EXPECT_EQ(lin.space(), ColorSpace::LINEAR);
  const RasterImage back = linear_to_srgb(lin);
  EXPECT_EQ(back.space(), ColorSpace::SRGB);
  EXPECT_LT((back.samples() - img.samples()).abs().maxCoeff(), 1e-6f);
}

TEST(Srgb, WrongTagIsAContractError) {
  EXPECT_THROW(srgb_to_linear(uniform_image(2, 2, 0.5f, ColorSpace::LINEAR)), ContractError);
  EXPECT_THROW(linear_to_srgb(uniform_image(2, 2, 0.5f)), ContractError);
}

TEST(RasterImage, ShapeAndLayout) {
  RasterImage img(5, 3);
  EXPECT_EQ(img.samples().size(), 5 * 3 * 3);
  img.at(4, 2, 1) = 0.25f;
  EXPECT_EQ(img.samples()[(2 * 5 + 4) * 3 + 1], 0.25f);
}

TEST(Clamp, IdempotentAndMapsNanToZero) {
  RasterImage img(2, 1);
  img.samples() << -0.5f, 0.2f, 1.7f, std::nanf(""), 1.0f, 0.0f;
  const RasterImage once = clamp01(img);
  EXPECT_EQ(once.samples()[0], 0.0f);
  EXPECT_EQ(once.samples()[2], 1.0f);
  EXPECT_EQ(once.samples()[3], 0.0f);
  EXPECT_TRUE(clamp01(once) == once);
}

TEST(U8, RoundHalfUp) {
  RasterImage img(3, 1);
  // 0.5/255 and 1.5/255 round up; 128.5/255 is not representable, so probe either side
  img.samples() << 0.5f / 255.0f, 1.5f / 255.0f, 0.49f / 255.0f, 1.0f, 0.0f, 128.6f / 255.0f, 128.4f / 255.0f, 0.5f, 2.0f;
  const auto u8 = to_u8(img);
  EXPECT_EQ(u8[0], 1);
  EXPECT_EQ(u8[1], 2);
  EXPECT_EQ(u8[2], 0);
  EXPECT_EQ(u8[3], 255);
  EXPECT_EQ(u8[4], 0);
  EXPECT_EQ(u8[5], 129);
  EXPECT_EQ(u8[6], 128);
  EXPECT_EQ(u8[7], 128);
  EXPECT_EQ(u8[8], 255);
}

TEST(ImageIo, PngRoundTripIsExactAt8Bit) {
  const auto dir = testing::scratch_dir("png_roundtrip");
  RasterImage img(4, 4);
  for (int i = 0; i < 48; ++i) img.samples()[i] = static_cast<float>((i * 37 % 256) / 255.0);
  save_image(img, dir / "a.png");
  const RasterImage back = load_image(dir / "a.png");
  EXPECT_EQ(to_u8(back), to_u8(img));
  EXPECT_EQ(back.space(), ColorSpace::SRGB);
}

TEST(ImageIo, BlackPngDecodesToZeros) {
  const auto dir = testing::scratch_dir("png_black");
  save_image(RasterImage(8, 8), dir / "black.png");
  const RasterImage back = load_image(dir / "black.png");
  EXPECT_EQ(back.samples().size(), 192);
  EXPECT_EQ(back.samples().abs().maxCoeff(), 0.0f);
}

void write_png(const std::filesystem::path& path, int w, int h, png_uint_32 format, const std::vector<std::uint8_t>& px) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = format;
  ASSERT_TRUE(png_image_write_to_file(&image, path.c_str(), 0, px.data(), 0, nullptr));
}

TEST(ImageIo, GrayscaleIsReplicated) {
  const auto dir = testing::scratch_dir("png_gray");
  write_png(dir / "g.png", 3, 2, PNG_FORMAT_GRAY, {0, 50, 100, 150, 200, 250});
  const RasterImage img = load_image(dir / "g.png");
  ASSERT_EQ(img.width(), 3);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) {
      EXPECT_EQ(img.at(x, y, 0), img.at(x, y, 1));
      EXPECT_EQ(img.at(x, y, 1), img.at(x, y, 2));
    }
  }
  EXPECT_FLOAT_EQ(img.at(1, 1, 0), 200.0f / 255.0f);
}

TEST(ImageIo, AlphaIsDroppedNotComposited) {
  const auto dir = testing::scratch_dir("png_alpha");
  write_png(dir / "a.png", 1, 1, PNG_FORMAT_RGBA, {200, 100, 50, 0});
  const RasterImage img = load_image(dir / "a.png");
  EXPECT_FLOAT_EQ(img.at(0, 0, 0), 200.0f / 255.0f);
  EXPECT_FLOAT_EQ(img.at(0, 0, 2), 50.0f / 255.0f);
}

TEST(ImageIo, JpegRoundTripWithinQuantization) {
  const auto dir = testing::scratch_dir("jpeg");
  const RasterImage img = uniform_image(16, 16, 0.5f);
  save_image(img, dir / "a.jpg");
  const RasterImage back = load_image(dir / "a.jpg");
  EXPECT_LT((back.samples() - img.samples()).abs().maxCoeff(), 2.0f / 255.0f);
}

TEST(ImageIo, UnreadableInputsThrow) {
  const auto dir = testing::scratch_dir("png_bad");
  EXPECT_THROW(load_image(dir / "absent.png"), IoError);
  std::ofstream(dir / "junk.png") << "not an image";
  EXPECT_THROW(load_image(dir / "junk.png"), IoError);
  EXPECT_THROW(save_image(RasterImage(2, 2), dir / "x.bmp"), IoError);
}

}  // namespace
}  // namespace lumaforge
