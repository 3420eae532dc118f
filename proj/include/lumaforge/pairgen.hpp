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
#ifndef LUMAFORGE_PAIRGEN_HPP_
#define LUMAFORGE_PAIRGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lumaforge/coco.hpp"
#include "lumaforge/sampler.hpp"
#include "lumaforge/severity_config.hpp"

namespace lumaforge {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kPipelineVersion = "1.0.0";

struct PairOptions {
  std::uint64_t global_seed = 0;
  SeverityPolicy policy = SeverityPolicy::uniform();
  int variants_per_image = 1;
  int workers = 1;
  /// Store the source path of clean images instead of copying them.
  bool reference_clean = false;
};

struct PairRecord {
  std::string image_id;
  int variant_index = 0;
  std::string clean_path;    // relative to out_root unless reference_clean
  std::string variant_path;  // relative to out_root
  Severity severity = Severity::Mild;
  VariantRecipe recipe;
  std::string clean_digest;
  std::string variant_digest;
  std::string annotation_digest;
};

struct PairManifest {
  int schema_version = kManifestSchemaVersion;
  std::string pipeline_version = kPipelineVersion;
  std::uint64_t global_seed = 0;
  std::string severity_policy;
  int variants_per_image = 1;
  bool reference_clean = false;
  json severity_config;
  std::vector<PairRecord> pairs;  // sorted by (image_id, variant_index)
  std::vector<SkipRecord> skipped;

  bool has_skips() const { return !skipped.empty(); }
};

/// Writes out_root/{clean/, variant/, annotations.json, manifest.json}.
/// Per-image decode failures are recorded in `skipped`; output write failures
/// abort the run. Output bytes do not depend on the worker count.
PairManifest generate_pairs(const CocoDataset& dataset, const SeverityConfig& config, const PairOptions& options,
                            const std::filesystem::path& out_root);

json manifest_to_json(const PairManifest& manifest);
PairManifest manifest_from_json(const json& j);
PairManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const PairManifest& manifest, const std::filesystem::path& path);

struct VerifyIssue {
  std::string image_id;
  int variant_index = 0;
  std::string detail;
};

struct VerifyReport {
  std::size_t pairs_checked = 0;
  std::vector<VerifyIssue> mismatches;  // one per pair whose digests disagree
  std::vector<VerifyIssue> missing_files;
  std::vector<VerifyIssue> annotation_drift;

  bool ok() const { return mismatches.empty() && missing_files.empty() && annotation_drift.empty(); }
  json to_json() const;
};

/// Re-executes every recipe from its clean image and compares digests with
/// the manifest and with the files on disk. Never throws for data problems.
VerifyReport verify_pairs(const PairManifest& manifest, const std::filesystem::path& out_root);

}  // namespace lumaforge

#endif  // LUMAFORGE_PAIRGEN_HPP_
