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
#include "lumaforge/severity_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lumaforge/serialization.hpp"

namespace lumaforge {

Severity severity_from_tier(int t) {
  if (t < 1 || t > 3) throw ParameterError("severity tier must be 1, 2 or 3, got " + std::to_string(t));
  return static_cast<Severity>(t);
}

std::vector<OpKind> SeverityConfig::conflicts_of(OpKind kind) const {
  std::vector<OpKind> out;
  for (const auto& group : conflict_groups) {
    if (std::find(group.begin(), group.end(), kind) == group.end()) continue;
    for (OpKind other : group) {
      if (other != kind && std::find(out.begin(), out.end(), other) == out.end()) out.push_back(other);
    }
  }
  return out;
}

SeverityConfig SeverityConfig::defaults() {
  SeverityConfig c;
  auto& t1 = c.tiers[0];
  auto& t2 = c.tiers[1];
  auto& t3 = c.tiers[2];
  t1.max_ops = 1;
  t2.max_ops = 2;
  t3.max_ops = 3;

  // Reference severity table.
  t1.ops[OpKind::Exposure] = {{"ev", {-0.3, 0.3}}};
  t2.ops[OpKind::Exposure] = {{"ev", {-0.8, 0.8}}};
  t3.ops[OpKind::Exposure] = {{"ev", {-1.5, 1.5}}};
  t1.ops[OpKind::Brightness] = {{"percent", {-15.0, 15.0}}};
  t2.ops[OpKind::Brightness] = {{"percent", {-30.0, 30.0}}};
  t3.ops[OpKind::Brightness] = {{"percent", {-45.0, 45.0}}};
  t1.ops[OpKind::Contrast] = {{"factor", {0.9, 1.1}}};
  t2.ops[OpKind::Contrast] = {{"factor", {0.75, 1.25}}};
  t3.ops[OpKind::Contrast] = {{"factor", {0.6, 1.4}}};
  t1.ops[OpKind::Gamma] = {{"gamma", {0.85, 1.15}}};
  t2.ops[OpKind::Gamma] = {{"gamma", {0.7, 1.3}}};
  t3.ops[OpKind::Gamma] = {{"gamma", {0.55, 1.5}}};
  for (OpKind k : {OpKind::Warm, OpKind::Cool}) {
    t1.ops[k] = {{"tint", {0.03, 0.07}}};
    t2.ops[k] = {{"tint", {0.08, 0.14}}};
    t3.ops[k] = {{"tint", {0.15, 0.25}}};
  }
  const Interval center{0.4, 0.6};
  const Interval power{2.5, 2.5};
  t1.ops[OpKind::Vignette] = {{"strength", {0.1, 0.2}}, {"center_x", center}, {"center_y", center}, {"power", power}};
  t2.ops[OpKind::Vignette] = {{"strength", {0.2, 0.4}}, {"center_x", center}, {"center_y", center}, {"power", power}};
  t3.ops[OpKind::Vignette] = {{"strength", {0.4, 0.65}}, {"center_x", center}, {"center_y", center}, {"power", power}};
  const Interval angle{0.0, 360.0};
  t1.ops[OpKind::Shadow] = {{"strength", {0.2, 0.35}}, {"sharpness", {2.0, 4.0}}, {"angle_deg", angle}};
  t2.ops[OpKind::Shadow] = {{"strength", {0.35, 0.55}}, {"sharpness", {4.0, 8.0}}, {"angle_deg", angle}};
  t3.ops[OpKind::Shadow] = {{"strength", {0.55, 0.75}}, {"sharpness", {8.0, 16.0}}, {"angle_deg", angle}};
  t1.ops[OpKind::Grain] = {{"intensity", {0.01, 0.02}}};
  t2.ops[OpKind::Grain] = {{"intensity", {0.02, 0.04}}};
  t3.ops[OpKind::Grain] = {{"intensity", {0.04, 0.07}}};

  // Not in the reference table.
  t1.ops[OpKind::Haze] = {{"alpha", {0.05, 0.15}}};
  t2.ops[OpKind::Haze] = {{"alpha", {0.15, 0.3}}};
  t3.ops[OpKind::Haze] = {{"alpha", {0.3, 0.5}}};
  t3.ops[OpKind::ColorCast] = {{"hue_deg", {0.0, 360.0}}, {"strength", {0.15, 0.25}}};
  t3.ops[OpKind::Flare] = {{"edge_distance", {0.0, 0.15}}, {"sigma", {0.08, 0.2}}, {"amplitude", {0.5, 1.0}}};

  c.conflict_groups = {
      {OpKind::Warm, OpKind::Cool},
      {OpKind::Exposure, OpKind::Brightness},
      {OpKind::Haze, OpKind::Contrast},
      {OpKind::Flare, OpKind::Haze},
  };
  return c;
}

std::vector<std::string> SeverityConfig::problems() const {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    const auto& tc = tiers[t];
    const std::string where = "tier " + std::to_string(t + 1);
    if (tc.max_ops < 1) out.push_back(where + ": max_ops must be >= 1");
    if (tc.ops.empty()) out.push_back(where + ": no operations enabled");
    for (const auto& [kind, ranges] : tc.ops) {
      std::set<std::string> expected;
      for (const auto& [name, value] : named_values(identity_params(kind))) expected.insert(name);
      for (const auto& [name, iv] : ranges) {
        if (!expected.count(name)) {
          out.push_back(where + ": " + std::string(to_string(kind)) + " has unknown parameter '" + name + "'");
        }
        if (!(iv.lo <= iv.hi)) {
          out.push_back(where + ": " + std::string(to_string(kind)) + "." + name + " has lo > hi");
        }
      }
      for (const auto& name : expected) {
        if (!ranges.count(name)) {
          out.push_back(where + ": " + std::string(to_string(kind)) + " is missing range for '" + name + "'");
        }
      }
    }
  }
  for (const auto& group : conflict_groups) {
    if (group.size() < 2) out.push_back("conflict group with fewer than two kinds");
  }
  return out;
}

void require_valid(const SeverityConfig& config) {
  const auto problems = config.problems();
  if (problems.empty()) return;
  std::ostringstream os;
  os << "invalid severity config:";
  for (const auto& p : problems) os << "\n  " << p;
  throw ParameterError(os.str());
}

SeverityConfig load_severity_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open severity config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("severity config " + path.string() + ": " + e.what());
  }
  SeverityConfig config = config_from_json(j);
  require_valid(config);
  return config;
}

void save_severity_config(const SeverityConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << config_to_json(config).dump(2) << "\n";
}

}  // namespace lumaforge
