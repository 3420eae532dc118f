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
#ifndef LUMAFORGE_DIGEST_HPP_
#define LUMAFORGE_DIGEST_HPP_

#include <string>
#include <string_view>

#include "lumaforge/image.hpp"

namespace lumaforge {

std::string sha256_hex(std::string_view bytes);

/// SHA-256 over the decoded 8-bit pixel buffer and dimensions, so the digest
/// is independent of the encoder that wrote the file.
std::string pixel_digest(const RasterImage& img);

}  // namespace lumaforge

#endif  // LUMAFORGE_DIGEST_HPP_
