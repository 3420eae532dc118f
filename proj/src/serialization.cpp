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
#include "lumaforge/serialization.hpp"

#include <string>

namespace lumaforge {
namespace {

double field(const json& j, const char* name) {
  if (!j.contains(name) || !j.at(name).is_number()) {
    throw ParameterError(std::string("missing numeric field '") + name + "' in " + j.dump());
  }
  return j.at(name).get<double>();
}

json rgb_to_json(PixelRgb p) { return json::array({p.r, p.g, p.b}); }

PixelRgb rgb_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParameterError("expected [r, g, b], got " + j.dump());
  return {j[0].get<float>(), j[1].get<float>(), j[2].get<float>()};
}

OpKind kind_from_json(const json& j) {
  const auto name = j.get<std::string>();
  const auto kind = parse_op_kind(name);
  if (!kind) throw ParameterError("unknown operation '" + name + "'");
  return *kind;
}

}  // namespace

json op_to_json(const OpParams& params) {
  json j;
  j["op"] = std::string(to_string(kind_of(params)));
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ops::Exposure>) j["ev"] = p.ev;
        if constexpr (std::is_same_v<T, ops::Brightness>) j["percent"] = p.percent;
        if constexpr (std::is_same_v<T, ops::Contrast>) j["factor"] = p.factor;
        if constexpr (std::is_same_v<T, ops::Gamma>) j["gamma"] = p.gamma;
        if constexpr (std::is_same_v<T, ops::Warm> || std::is_same_v<T, ops::Cool>) j["tint"] = p.tint;
        if constexpr (std::is_same_v<T, ops::Vignette>) {
          j["strength"] = p.strength;
          j["center_x"] = p.center_x;
          j["center_y"] = p.center_y;
          j["power"] = p.power;
        }
        if constexpr (std::is_same_v<T, ops::Shadow>) {
          j["angle_deg"] = p.angle_deg;
          j["strength"] = p.strength;
          j["sharpness"] = p.sharpness;
        }
        if constexpr (std::is_same_v<T, ops::Grain>) {
          j["intensity"] = p.intensity;
          j["noise_seed"] = p.noise_seed;
        }
        if constexpr (std::is_same_v<T, ops::Haze>) {
          j["alpha"] = p.alpha;
          j["haze_color"] = rgb_to_json(p.color);
        }
        if constexpr (std::is_same_v<T, ops::ColorCast>) {
          j["hue_deg"] = p.hue_deg;
          j["strength"] = p.strength;
        }
        if constexpr (std::is_same_v<T, ops::Flare>) {
          j["center_x"] = p.center_x;
          j["center_y"] = p.center_y;
          j["sigma"] = p.sigma;
          j["amplitude"] = p.amplitude;
        }
      },
      params);
  return j;
}

OpParams op_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op")) throw ParameterError("operation entry needs an 'op' field");
  switch (kind_from_json(j.at("op"))) {
    case OpKind::Exposure: return ops::Exposure{field(j, "ev")};
    case OpKind::Brightness: return ops::Brightness{field(j, "percent")};
    case OpKind::Contrast: return ops::Contrast{field(j, "factor")};
    case OpKind::Gamma: return ops::Gamma{field(j, "gamma")};
    case OpKind::Warm: return ops::Warm{field(j, "tint")};
    case OpKind::Cool: return ops::Cool{field(j, "tint")};
    case OpKind::Vignette:
      return ops::Vignette{field(j, "strength"), field(j, "center_x"), field(j, "center_y"), field(j, "power")};
    case OpKind::Shadow: return ops::Shadow{field(j, "angle_deg"), field(j, "strength"), field(j, "sharpness")};
    case OpKind::Grain: {
      if (!j.contains("noise_seed")) throw ParameterError("grain needs 'noise_seed'");
      return ops::Grain{field(j, "intensity"), j.at("noise_seed").get<std::uint64_t>()};
    }
    case OpKind::Haze: {
      ops::Haze h;
      h.alpha = field(j, "alpha");
      if (j.contains("haze_color")) h.color = rgb_from_json(j.at("haze_color"));
      return h;
    }
    case OpKind::ColorCast: return ops::ColorCast{field(j, "hue_deg"), field(j, "strength")};
    case OpKind::Flare:
      return ops::Flare{field(j, "center_x"), field(j, "center_y"), field(j, "sigma"), field(j, "amplitude")};
  }
  throw ParameterError("unhandled operation");
}

json recipe_to_json(const VariantRecipe& recipe) {
  json steps = json::array();
  for (const auto& s : recipe.steps) steps.push_back(op_to_json(s));
  return json{{"image_id", recipe.image_id},
              {"variant_index", recipe.variant_index},
              {"severity", tier(recipe.severity)},
              {"seed", recipe.seed},
              {"steps", std::move(steps)}};
}

VariantRecipe recipe_from_json(const json& j) {
  VariantRecipe r;
  r.image_id = j.at("image_id").get<std::string>();
  r.variant_index = j.value("variant_index", 0);
  r.severity = severity_from_tier(j.at("severity").get<int>());
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& s : j.at("steps")) r.steps.push_back(op_from_json(s));
  return r;
}

json config_to_json(const SeverityConfig& config) {
  json tiers = json::array();
  for (std::size_t t = 0; t < config.tiers.size(); ++t) {
    const auto& tc = config.tiers[t];
    json ops = json::object();
    for (const auto& [kind, ranges] : tc.ops) {
      json r = json::object();
      for (const auto& [name, iv] : ranges) r[name] = json::array({iv.lo, iv.hi});
      ops[std::string(to_string(kind))] = std::move(r);
    }
    tiers.push_back(json{{"level", static_cast<int>(t + 1)}, {"max_ops", tc.max_ops}, {"ops", std::move(ops)}});
  }
  json groups = json::array();
  for (const auto& g : config.conflict_groups) {
    json names = json::array();
    for (OpKind k : g) names.push_back(std::string(to_string(k)));
    groups.push_back(std::move(names));
  }
  return json{{"schema_version", 1},
              {"tiers", std::move(tiers)},
              {"conflict_groups", std::move(groups)},
              {"haze_color", rgb_to_json(config.haze_color)}};
}

SeverityConfig config_from_json(const json& j) {
  if (j.value("schema_version", 0) != 1) throw ParameterError("severity config: unsupported schema_version");
  SeverityConfig c;
  const auto& tiers = j.at("tiers");
  if (!tiers.is_array() || tiers.size() != 3) throw ParameterError("severity config: expected three tiers");
  for (const auto& t : tiers) {
    const int level = t.at("level").get<int>();
    auto& tc = c.at(severity_from_tier(level));
    tc.max_ops = t.at("max_ops").get<int>();
    tc.ops.clear();
    for (const auto& [name, ranges] : t.at("ops").items()) {
      const auto kind = parse_op_kind(name);
      if (!kind) throw ParameterError("severity config: unknown operation '" + name + "'");
      ParamRanges pr;
      for (const auto& [pname, iv] : ranges.items()) {
        if (!iv.is_array() || iv.size() != 2) {
          throw ParameterError("severity config: " + name + "." + pname + " must be [lo, hi]");
        }
        pr[pname] = Interval{iv[0].get<double>(), iv[1].get<double>()};
      }
      tc.ops[*kind] = std::move(pr);
    }
  }
  for (const auto& g : j.at("conflict_groups")) {
    std::vector<OpKind> group;
    for (const auto& name : g) group.push_back(kind_from_json(name));
    c.conflict_groups.push_back(std::move(group));
  }
  if (j.contains("haze_color")) c.haze_color = rgb_from_json(j.at("haze_color"));
  return c;
}

}  // namespace lumaforge
