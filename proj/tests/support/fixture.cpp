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
#include "fixture.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "lumaforge/rng.hpp"

namespace lumaforge::testing {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lumaforge_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RasterImage synthetic_image(int width, int height, std::uint64_t seed) {
  RasterImage img(width, height);
  CounterRng rng(seed);
  const double base[3] = {rng.uniform(0.2, 0.6), rng.uniform(0.2, 0.6), rng.uniform(0.2, 0.6)};
  const double slope[3] = {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
  const double cx = rng.uniform(0.3, 0.7) * width;
  const double cy = rng.uniform(0.3, 0.7) * height;
  const double radius = rng.uniform(0.15, 0.3) * std::min(width, height);
  const int rx0 = static_cast<int>(rng.uniform(0.05, 0.4) * width);
  const int ry0 = static_cast<int>(rng.uniform(0.05, 0.4) * height);
  const int rx1 = rx0 + static_cast<int>(rng.uniform(0.2, 0.5) * width);
  const int ry1 = ry0 + static_cast<int>(rng.uniform(0.2, 0.5) * height);
  const double disc[3] = {rng.uniform(0.6, 0.95), rng.uniform(0.1, 0.9), rng.uniform(0.05, 0.4)};
  const double box[3] = {rng.uniform(0.05, 0.3), rng.uniform(0.3, 0.7), rng.uniform(0.6, 0.95)};
  const std::uint64_t noise = rng.next_u64();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / std::max(1, width - 1);
      const double v = static_cast<double>(y) / std::max(1, height - 1);
      const bool in_disc = std::hypot(x - cx, y - cy) < radius;
      const bool in_box = x >= rx0 && x < rx1 && y >= ry0 && y < ry1;
      for (int c = 0; c < 3; ++c) {
        double s = base[c] + slope[c] * (u - v);
        if (in_box) s = box[c];
        if (in_disc) s = disc[c];
        s += 0.03 * std::sin(0.9 * x + 0.4 * c) * std::cos(0.7 * y);
        s += 0.02 * CounterRng::normal_at(noise, static_cast<std::uint64_t>((y * width + x) * 3 + c));
        img.at(x, y, c) = static_cast<float>(std::clamp(s, 0.0, 1.0));
      }
    }
  }
  return img;
}

namespace {

json polygon_annotation(int id, int image_id, int category, double x, double y, double w, double h) {
  json poly = json::array({x, y, x + w, y, x + w, y + h, x, y + h});
  return {{"id", id},
          {"image_id", image_id},
          {"category_id", category},
          {"segmentation", json::array({poly})},
          {"bbox", {x, y, w, h}},
          {"area", w * h},
          {"iscrowd", 0}};
}

}  // namespace

Fixture make_coco_fixture(const fs::path& dir, const FixtureOptions& options) {
  Fixture f;
  f.root = dir;
  f.images = dir / "images";
  f.annotations = dir / "annotations.json";
  fs::create_directories(f.images);

  json doc;
  doc["info"] = {{"description", "synthetic lighting fixture"}, {"version", "1"}};
  doc["licenses"] = json::array({{{"id", 1}, {"name", "CC0"}}});
  doc["categories"] = json::array({{{"id", 1}, {"name", "disc"}, {"supercategory", "shape"}},
                                   {{"id", 2}, {"name", "box"}, {"supercategory", "shape"}},
                                   {{"id", 3}, {"name", "region"}, {"supercategory", "area"}}});
  doc["images"] = json::array();
  doc["annotations"] = json::array();
  CounterRng rng(derive_key(options.seed, 77));
  int next_ann = 1000;
  for (int i = 0; i < options.images; ++i) {
    const int id = 100 + i * 7;
    const int w = 64 + 8 * (i % 5);
    const int h = 48 + 8 * (i % 3);
    const std::string name = "img_" + std::to_string(i) + ".png";
    doc["images"].push_back({{"id", id}, {"file_name", name}, {"width", w}, {"height", h}, {"license", 1}});
    const bool missing = options.missing_file && i == options.images - 1;
    const bool corrupt = options.corrupt_file && i == options.images - 2;
    if (corrupt) {
      std::ofstream(f.images / name, std::ios::binary) << "\x89PNG\r\n\x1a\nthis is not really a png";
    } else if (!missing) {
      save_image(synthetic_image(w, h, derive_key(options.seed, static_cast<std::uint64_t>(i))), f.images / name);
    }
    const int count = 1 + static_cast<int>(rng.below(3));
    for (int k = 0; k < count; ++k) {
      const double bw = std::floor(rng.uniform(0.1, 0.5) * w);
      const double bh = std::floor(rng.uniform(0.1, 0.5) * h);
      const double bx = std::floor(rng.uniform(0.0, 1.0) * (w - bw));
      const double by = std::floor(rng.uniform(0.0, 1.0) * (h - bh)) + 0.5;
      doc["annotations"].push_back(polygon_annotation(next_ann++, id, 1 + k % 3, bx, by, bw, bh - 0.5));
    }
    if (i == 3) {
      doc["annotations"].push_back({{"id", next_ann++},
                                    {"image_id", id},
                                    {"category_id", 3},
                                    {"segmentation", {{"counts", {10, 5, 30, 5, 40}}, {"size", {h, w}}}},
                                    {"bbox", {2, 3, 4, 5}},
                                    {"area", 10},
                                    {"iscrowd", 1}});
    }
  }
  std::ofstream(f.annotations) << doc.dump(1) << '\n';
  return f;
}

}  // namespace lumaforge::testing
