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
#ifndef LUMAFORGE_COCO_HPP_
#define LUMAFORGE_COCO_HPP_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lumaforge {

using nlohmann::json;

/// Fatal problem with the annotation file itself.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

struct ImageEntry {
  std::string image_id;  // COCO id rendered as text
  std::string file_name;
  std::filesystem::path path;
  int width = 0;
  int height = 0;
  std::vector<std::string> annotation_ids;
  json record;  // original "images" entry
};

struct SkipRecord {
  std::string image_id;
  std::string reason;
};

struct DatasetIndex {
  std::vector<ImageEntry> images;
  json categories = json::array();
  json passthrough = json::object();  // "info", "licenses" if present
  std::vector<SkipRecord> skipped;
};

/// Annotation records kept verbatim; geometry is never touched.
struct AnnotationSet {
  std::vector<json> records;                            // input order
  std::map<std::string, std::vector<std::size_t>> by_image;  // indices into records

  std::vector<json> for_image(const std::string& image_id) const;
};

struct CocoDataset {
  DatasetIndex index;
  AnnotationSet annotations;
};

std::string coco_id(const json& id);

/// Parses COCO-style JSON. Missing image files are skipped with a reason;
/// malformed JSON, duplicate image ids, and dangling image or category
/// references throw IngestError.
CocoDataset ingest_coco(const std::filesystem::path& annotation_file, const std::filesystem::path& image_root);

/// Digest of an image's annotation records as serialized for output.
std::string annotation_digest(const std::vector<json>& records);

}  // namespace lumaforge

#endif  // LUMAFORGE_COCO_HPP_
