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
#include "lumaforge/coco.hpp"

#include <fstream>
#include <set>

#include "lumaforge/digest.hpp"

namespace lumaforge {
namespace {

const json& require_array(const json& root, const char* key, const std::filesystem::path& file) {
  if (!root.contains(key) || !root.at(key).is_array()) {
    throw IngestError(file.string() + ": missing '" + key + "' array");
  }
  return root.at(key);
}

int require_int(const json& rec, const char* key, const std::string& what) {
  if (!rec.contains(key) || !rec.at(key).is_number()) {
    throw IngestError(what + ": missing numeric '" + key + "'");
  }
  return rec.at(key).get<int>();
}

}  // namespace

std::string coco_id(const json& id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return id.dump();
  throw IngestError("COCO ids must be integers or strings, got " + id.dump());
}

std::vector<json> AnnotationSet::for_image(const std::string& image_id) const {
  std::vector<json> out;
  if (auto it = by_image.find(image_id); it != by_image.end()) {
    for (auto i : it->second) out.push_back(records[i]);
  }
  return out;
}

CocoDataset ingest_coco(const std::filesystem::path& annotation_file, const std::filesystem::path& image_root) {
  std::ifstream in(annotation_file);
  if (!in) throw IngestError("cannot open annotation file " + annotation_file.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IngestError("malformed JSON in " + annotation_file.string() + " at byte " + std::to_string(e.byte) +
                      ": " + e.what());
  }
  if (!root.is_object()) throw IngestError(annotation_file.string() + ": top level must be an object");

  CocoDataset ds;
  for (const char* key : {"info", "licenses"}) {
    if (root.contains(key)) ds.index.passthrough[key] = root.at(key);
  }

  std::set<std::string> category_ids;
  ds.index.categories = require_array(root, "categories", annotation_file);
  for (const auto& cat : ds.index.categories) {
    if (!cat.contains("id")) throw IngestError("category without id: " + cat.dump());
    category_ids.insert(coco_id(cat.at("id")));
  }

  std::map<std::string, std::size_t> image_slot;  // id -> index into candidates
  std::vector<ImageEntry> candidates;
  for (const auto& rec : require_array(root, "images", annotation_file)) {
    if (!rec.contains("id")) throw IngestError("image without id: " + rec.dump());
    ImageEntry e;
    e.image_id = coco_id(rec.at("id"));
    if (!rec.contains("file_name") || !rec.at("file_name").is_string()) {
      throw IngestError("image " + e.image_id + ": missing 'file_name'");
    }
    e.file_name = rec.at("file_name").get<std::string>();
    e.width = require_int(rec, "width", "image " + e.image_id);
    e.height = require_int(rec, "height", "image " + e.image_id);
    e.path = image_root / e.file_name;
    e.record = rec;
    if (!image_slot.emplace(e.image_id, candidates.size()).second) {
      throw IngestError("duplicate image id " + e.image_id);
    }
    candidates.push_back(std::move(e));
  }

  for (const auto& rec : require_array(root, "annotations", annotation_file)) {
    if (!rec.contains("id") || !rec.contains("image_id")) {
      throw IngestError("annotation without id/image_id: " + rec.dump());
    }
    const std::string ann_id = coco_id(rec.at("id"));
    const std::string img_id = coco_id(rec.at("image_id"));
    const auto slot = image_slot.find(img_id);
    if (slot == image_slot.end()) {
      throw IngestError("annotation " + ann_id + " references unknown image_id " + img_id);
    }
    if (rec.contains("category_id") && !category_ids.count(coco_id(rec.at("category_id")))) {
      throw IngestError("annotation " + ann_id + " references unknown category_id " + rec.at("category_id").dump());
    }
    auto& img = candidates[slot->second];
    if (rec.contains("bbox")) {
      const auto& b = rec.at("bbox");
      if (!b.is_array() || b.size() != 4) throw IngestError("annotation " + ann_id + ": bbox must be [x, y, w, h]");
      const double x = b[0].get<double>(), y = b[1].get<double>(), w = b[2].get<double>(), h = b[3].get<double>();
      // One pixel of slack for rounding in exported boxes.
      if (x < -1.0 || y < -1.0 || w < 0.0 || h < 0.0 || x + w > img.width + 1.0 || y + h > img.height + 1.0) {
        throw IngestError("annotation " + ann_id + ": bbox outside image " + img_id);
      }
    }
    img.annotation_ids.push_back(ann_id);
    ds.annotations.by_image[img_id].push_back(ds.annotations.records.size());
    ds.annotations.records.push_back(rec);
  }

  for (auto& e : candidates) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(e.path, ec)) {
      ds.index.skipped.push_back({e.image_id, "missing file " + e.path.string()});
      continue;
    }
    ds.index.images.push_back(std::move(e));
  }
  return ds;
}

std::string annotation_digest(const std::vector<json>& records) {
  return "sha256:" + sha256_hex(json(records).dump());
}

}  // namespace lumaforge
