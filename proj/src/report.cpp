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
#include <sstream>

#include "lumaforge/metrics.hpp"

namespace lumaforge {
namespace fs = std::filesystem;

std::vector<InstanceIou> load_instance_ious(const fs::path& listing) {
  std::ifstream in(listing);
  if (!in) throw IoError("cannot open " + listing.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(listing.string() + ": " + e.what());
  }
  const fs::path base = listing.parent_path();
  std::vector<InstanceIou> out;
  for (const auto& inst : root.at("instances")) {
    const auto load_mask = [&](const char* key) {
      return BinaryMask::from_image(load_image(base / inst.at(key).get<std::string>()));
    };
    const BinaryMask gt = load_mask("ground_truth");
    InstanceIou row;
    row.instance_id = inst.at("id").is_string() ? inst.at("id").get<std::string>() : inst.at("id").dump();
    row.system_a = mask_iou(gt, load_mask("system_a"));
    row.system_b = mask_iou(gt, load_mask("system_b"));
    out.push_back(std::move(row));
  }
  return out;
}

SeverityReport severity_report(const PairManifest& manifest, const fs::path& out_root, const SsimParams& params,
                               std::optional<std::vector<InstanceIou>> instances) {
  SeverityReport report;
  std::array<double, 3> sum{};
  std::array<double, 3> sum_sq{};
  for (const auto& p : manifest.pairs) {
    const fs::path clean_file = manifest.reference_clean ? fs::path(p.clean_path) : out_root / p.clean_path;
    const double s = ssim(load_image(clean_file), load_image(out_root / p.variant_path), params);
    const auto t = static_cast<std::size_t>(tier(p.severity) - 1);
    ++report.tiers[t].pairs;
    sum[t] += s;
    sum_sq[t] += s * s;
    report.rows.push_back({p.image_id, p.variant_index, tier(p.severity), s});
  }
  for (std::size_t t = 0; t < 3; ++t) {
    auto& ts = report.tiers[t];
    ts.severity = static_cast<int>(t + 1);
    if (ts.pairs == 0) continue;
    const double n = static_cast<double>(ts.pairs);
    ts.ssim_mean = sum[t] / n;
    ts.ssim_std = std::sqrt(std::max(0.0, sum_sq[t] / n - ts.ssim_mean * ts.ssim_mean));
  }
  if (instances) {
    for (const auto& inst : *instances) {
      report.histogram_a.add(inst.system_a);
      report.histogram_b.add(inst.system_b);
      if (inst.system_b > inst.system_a) {
        ++report.wins_b;
      } else if (inst.system_a > inst.system_b) {
        ++report.wins_a;
      } else {
        ++report.ties;
      }
    }
    report.instances = std::move(instances);
  }
  return report;
}

nlohmann::json SeverityReport::to_json() const {
  using nlohmann::json;
  json tiers_j = json::array();
  for (const auto& t : tiers) {
    json row{{"severity", t.severity}, {"pairs", t.pairs}, {"fid", nullptr}, {"fsim", nullptr}};
    row["ssim_mean"] = t.pairs ? json(t.ssim_mean) : json(nullptr);
    row["ssim_std"] = t.pairs ? json(t.ssim_std) : json(nullptr);
    tiers_j.push_back(std::move(row));
  }
  json out{{"tiers", std::move(tiers_j)}};
  if (!instances) {
    out["iou"] = nullptr;
    return out;
  }
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (const auto& i : *instances) {
    mean_a += i.system_a;
    mean_b += i.system_b;
  }
  const double n = instances->empty() ? 1.0 : static_cast<double>(instances->size());
  json edges = json::array();
  for (int b = 0; b <= kIouBins; ++b) edges.push_back(b / static_cast<double>(kIouBins));
  out["iou"] = json{{"instances", instances->size()},
                    {"bin_edges", std::move(edges)},
                    {"histogram_a", histogram_a.counts},
                    {"histogram_b", histogram_b.counts},
                    {"mean_a", mean_a / n},
                    {"mean_b", mean_b / n},
                    {"wins_b", wins_b},
                    {"wins_a", wins_a},
                    {"ties", ties}};
  return out;
}

std::string SeverityReport::to_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "image_id,variant_index,severity,ssim\n";
  for (const auto& r : rows) os << r.image_id << "," << r.variant_index << "," << r.severity << "," << r.ssim << "\n";
  return os.str();
}

}  // namespace lumaforge
