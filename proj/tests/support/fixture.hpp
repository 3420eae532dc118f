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
#ifndef LUMAFORGE_TESTS_SUPPORT_FIXTURE_HPP_
#define LUMAFORGE_TESTS_SUPPORT_FIXTURE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "lumaforge/image.hpp"

namespace lumaforge::testing {

struct FixtureOptions {
  int images = 20;
  std::uint64_t seed = 1;
  bool missing_file = false;  // last image listed but never written
  bool corrupt_file = false;  // second-to-last image written as garbage bytes
};

struct Fixture {
  std::filesystem::path root;
  std::filesystem::path annotations;
  std::filesystem::path images;
};

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Deterministic textured test picture: gradient, shapes, fine noise.
RasterImage synthetic_image(int width, int height, std::uint64_t seed);

/// COCO-style corpus: PNG files, 1 to 3 polygon annotations per image, one
/// RLE annotation, three categories, plus info/licenses blocks.
Fixture make_coco_fixture(const std::filesystem::path& dir, const FixtureOptions& options = {});

}  // namespace lumaforge::testing

#endif  // LUMAFORGE_TESTS_SUPPORT_FIXTURE_HPP_
