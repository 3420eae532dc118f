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
#include "lumaforge/pairgen.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <tuple>
#include <optional>
#include <thread>

#include "lumaforge/digest.hpp"
#include "lumaforge/image.hpp"
#include "lumaforge/serialization.hpp"

namespace lumaforge {
namespace fs = std::filesystem;
namespace {

struct ImageResult {
  std::vector<PairRecord> pairs;
  std::optional<SkipRecord> skip;
};

/// Failure writing into out_root; aborts the whole run.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename F>
void write_step(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    throw OutputError(e.what());
  }
}

std::string variant_relpath(const std::string& file_name, int variant_index, int variants_per_image) {
  fs::path rel(file_name);
  std::string stem = rel.stem().string();
  if (variants_per_image > 1) stem += "_v" + std::to_string(variant_index);
  return (fs::path("variant") / rel.parent_path() / (stem + ".png")).generic_string();
}

ImageResult process_image(const ImageEntry& entry, const AnnotationSet& annotations, const SeverityConfig& config,
                          const PairOptions& options, const fs::path& out_root) {
  ImageResult result;
  RasterImage clean;
  try {
    clean = load_image(entry.path);
  } catch (const std::exception& e) {
    result.skip = SkipRecord{entry.image_id, std::string("unreadable image: ") + e.what()};
    return result;
  }
  if (clean.width() != entry.width || clean.height() != entry.height) {
    result.skip = SkipRecord{entry.image_id, "decoded size " + std::to_string(clean.width()) + "x" +
                                                 std::to_string(clean.height()) + " differs from annotation " +
                                                 std::to_string(entry.width) + "x" + std::to_string(entry.height)};
    return result;
  }

  std::string clean_path;
  if (options.reference_clean) {
    clean_path = fs::absolute(entry.path).lexically_normal().generic_string();
  } else {
    clean_path = (fs::path("clean") / entry.file_name).generic_string();
    write_step([&] {
      const fs::path dst = out_root / clean_path;
      fs::create_directories(dst.parent_path());
      fs::copy_file(entry.path, dst, fs::copy_options::overwrite_existing);
    });
  }
  const std::string clean_digest = pixel_digest(clean);
  const std::string ann_digest = annotation_digest(annotations.for_image(entry.image_id));

  for (int v = 0; v < options.variants_per_image; ++v) {
    PairRecord rec;
    rec.image_id = entry.image_id;
    rec.variant_index = v;
    rec.severity = options.policy.pick(options.global_seed, entry.image_id, v);
    rec.recipe = sample_recipe(options.global_seed, entry.image_id, rec.severity, config, v);
    const RasterImage variant = apply_recipe(clean, rec.recipe);
    rec.clean_path = clean_path;
    rec.variant_path = variant_relpath(entry.file_name, v, options.variants_per_image);
    write_step([&] {
      const fs::path dst = out_root / rec.variant_path;
      fs::create_directories(dst.parent_path());
      save_image(variant, dst);
    });
    rec.clean_digest = clean_digest;
    rec.variant_digest = pixel_digest(variant);
    rec.annotation_digest = ann_digest;
    result.pairs.push_back(std::move(rec));
  }
  return result;
}

void write_json(const json& j, const fs::path& path) {
  write_step([&] {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed for " + path.string());
  });
}

json annotations_output(const CocoDataset& dataset, const std::vector<ImageResult>& results) {
  json out = dataset.index.passthrough;
  json images = json::array();
  std::set<std::string> kept;
  for (std::size_t i = 0; i < dataset.index.images.size(); ++i) {
    const auto& r = results[i];
    if (r.skip) continue;
    json rec = dataset.index.images[i].record;
    rec["clean_file"] = r.pairs.front().clean_path;
    json variants = json::array();
    for (const auto& p : r.pairs) variants.push_back(p.variant_path);
    rec["variant_files"] = std::move(variants);
    images.push_back(std::move(rec));
    kept.insert(dataset.index.images[i].image_id);
  }
  json anns = json::array();
  for (const auto& rec : dataset.annotations.records) {
    if (kept.count(coco_id(rec.at("image_id")))) anns.push_back(rec);
  }
  out["images"] = std::move(images);
  out["annotations"] = std::move(anns);
  out["categories"] = dataset.index.categories;
  return out;
}

json skip_to_json(const SkipRecord& s) { return json{{"image_id", s.image_id}, {"reason", s.reason}}; }

}  // namespace

PairManifest generate_pairs(const CocoDataset& dataset, const SeverityConfig& config, const PairOptions& options,
                            const fs::path& out_root) {
  require_valid(config);
  if (options.workers < 1) throw ParameterError("worker count must be >= 1");
  if (options.variants_per_image < 1) throw ParameterError("variants per image must be >= 1");
  write_step([&] {
    fs::create_directories(out_root / "variant");
    if (!options.reference_clean) fs::create_directories(out_root / "clean");
  });

  const auto& images = dataset.index.images;
  std::vector<ImageResult> results(images.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  std::atomic<bool> stop{false};

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= images.size()) return;
      try {
        results[i] = process_image(images[i], dataset.annotations, config, options, out_root);
      } catch (const OutputError&) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        stop = true;
      } catch (const std::exception& e) {
        results[i].skip = SkipRecord{images[i].image_id, std::string("processing failed: ") + e.what()};
      }
    }
  };
  {
    const int n = std::min<int>(options.workers, std::max<int>(1, static_cast<int>(images.size())));
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  PairManifest m;
  m.global_seed = options.global_seed;
  m.severity_policy = options.policy.describe();
  m.variants_per_image = options.variants_per_image;
  m.reference_clean = options.reference_clean;
  m.severity_config = config_to_json(config);
  m.skipped = dataset.index.skipped;
  for (auto& r : results) {
    if (r.skip) m.skipped.push_back(*r.skip);
    for (auto& p : r.pairs) m.pairs.push_back(p);
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](const PairRecord& a, const PairRecord& b) {
    return std::tie(a.image_id, a.variant_index) < std::tie(b.image_id, b.variant_index);
  });
  std::sort(m.skipped.begin(), m.skipped.end(),
            [](const SkipRecord& a, const SkipRecord& b) { return a.image_id < b.image_id; });

  write_json(annotations_output(dataset, results), out_root / "annotations.json");
  save_manifest(m, out_root / "manifest.json");
  return m;
}

json manifest_to_json(const PairManifest& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) {
    pairs.push_back(json{{"image_id", p.image_id},
                         {"variant_index", p.variant_index},
                         {"clean_path", p.clean_path},
                         {"variant_path", p.variant_path},
                         {"severity", tier(p.severity)},
                         {"recipe", recipe_to_json(p.recipe)},
                         {"clean_digest", p.clean_digest},
                         {"variant_digest", p.variant_digest},
                         {"annotation_digest", p.annotation_digest}});
  }
  json skipped = json::array();
  for (const auto& s : m.skipped) skipped.push_back(skip_to_json(s));
  return json{{"schema_version", m.schema_version},
              {"pipeline_version", m.pipeline_version},
              {"global_seed", m.global_seed},
              {"severity_policy", m.severity_policy},
              {"variants_per_image", m.variants_per_image},
              {"reference_clean", m.reference_clean},
              {"severity_config", m.severity_config},
              {"pairs", std::move(pairs)},
              {"skipped", std::move(skipped)}};
}

PairManifest manifest_from_json(const json& j) {
  PairManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kManifestSchemaVersion) {
    throw ParameterError("unsupported manifest schema_version " + std::to_string(m.schema_version));
  }
  m.pipeline_version = j.at("pipeline_version").get<std::string>();
  m.global_seed = j.at("global_seed").get<std::uint64_t>();
  m.severity_policy = j.at("severity_policy").get<std::string>();
  m.variants_per_image = j.at("variants_per_image").get<int>();
  m.reference_clean = j.value("reference_clean", false);
  m.severity_config = j.value("severity_config", json::object());
  for (const auto& p : j.at("pairs")) {
    PairRecord r;
    r.image_id = p.at("image_id").get<std::string>();
    r.variant_index = p.at("variant_index").get<int>();
    r.clean_path = p.at("clean_path").get<std::string>();
    r.variant_path = p.at("variant_path").get<std::string>();
    r.severity = severity_from_tier(p.at("severity").get<int>());
    r.recipe = recipe_from_json(p.at("recipe"));
    r.clean_digest = p.at("clean_digest").get<std::string>();
    r.variant_digest = p.at("variant_digest").get<std::string>();
    r.annotation_digest = p.at("annotation_digest").get<std::string>();
    m.pairs.push_back(std::move(r));
  }
  for (const auto& s : j.value("skipped", json::array())) {
    m.skipped.push_back({s.at("image_id").get<std::string>(), s.at("reason").get<std::string>()});
  }
  return m;
}

PairManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  try {
    return manifest_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw IoError("manifest " + path.string() + ": " + e.what());
  }
}

void save_manifest(const PairManifest& manifest, const fs::path& path) { write_json(manifest_to_json(manifest), path); }

json VerifyReport::to_json() const {
  auto issues = [](const std::vector<VerifyIssue>& v) {
    json a = json::array();
    for (const auto& i : v) {
      a.push_back(json{{"image_id", i.image_id}, {"variant_index", i.variant_index}, {"detail", i.detail}});
    }
    return a;
  };
  return json{{"ok", ok()},
              {"pairs_checked", pairs_checked},
              {"mismatches", issues(mismatches)},
              {"missing_files", issues(missing_files)},
              {"annotation_drift", issues(annotation_drift)}};
}

VerifyReport verify_pairs(const PairManifest& manifest, const fs::path& out_root) {
  VerifyReport report;

  std::optional<AnnotationSet> annotations;
  {
    const fs::path ann_path = out_root / "annotations.json";
    std::ifstream in(ann_path);
    if (!in) {
      report.missing_files.push_back({"", 0, "missing " + ann_path.string()});
    } else {
      try {
        const json root = json::parse(in);
        AnnotationSet set;
        for (const auto& rec : root.at("annotations")) {
          set.by_image[coco_id(rec.at("image_id"))].push_back(set.records.size());
          set.records.push_back(rec);
        }
        annotations = std::move(set);
      } catch (const std::exception& e) {
        report.annotation_drift.push_back({"", 0, std::string("annotations.json unreadable: ") + e.what()});
      }
    }
  }

  for (const auto& p : manifest.pairs) {
    ++report.pairs_checked;
    const fs::path clean_file = manifest.reference_clean ? fs::path(p.clean_path) : out_root / p.clean_path;
    const fs::path variant_file = out_root / p.variant_path;
    bool missing = false;
    for (const auto& f : {clean_file, variant_file}) {
      std::error_code ec;
      if (!fs::is_regular_file(f, ec)) {
        report.missing_files.push_back({p.image_id, p.variant_index, "missing " + f.string()});
        missing = true;
      }
    }
    if (annotations && annotation_digest(annotations->for_image(p.image_id)) != p.annotation_digest) {
      report.annotation_drift.push_back({p.image_id, p.variant_index, "annotation digest differs from manifest"});
    }
    if (missing) continue;

    std::vector<std::string> problems;
    try {
      const RasterImage clean = load_image(clean_file);
      if (pixel_digest(clean) != p.clean_digest) problems.push_back("clean image digest");
      if (pixel_digest(apply_recipe(clean, p.recipe)) != p.variant_digest) problems.push_back("recipe replay digest");
      if (pixel_digest(load_image(variant_file)) != p.variant_digest) problems.push_back("variant file digest");
    } catch (const std::exception& e) {
      problems.push_back(std::string("replay failed: ") + e.what());
    }
    if (!problems.empty()) {
      std::string detail = "mismatch:";
      for (const auto& s : problems) detail += " " + s + ";";
      report.mismatches.push_back({p.image_id, p.variant_index, detail});
    }
  }
  return report;
}

}  // namespace lumaforge
