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
#include "lumaforge/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "lumaforge/rng.hpp"

namespace lumaforge {
namespace {

constexpr std::uint64_t kRecipeStream = 0x5245434950450001ull;
constexpr std::uint64_t kGrainStream = 0x475241494E000002ull;
constexpr std::uint64_t kSeverityStream = 0x5345564552000003ull;

// Draws a parameter for one tier. When the previous tier's interval is nested
// strictly inside this one (signed rows such as EV), the draw comes from the
// part of this tier's interval outside the previous one so tiers do not overlap
// in magnitude.
class ParamDrawer {
 public:
  ParamDrawer(const SeverityConfig& config, Severity severity, OpKind kind, CounterRng& rng)
      : rng_(rng), ranges_(config.at(severity).ops.at(kind)) {
    if (severity != Severity::Mild) {
      const auto& prev_tier = config.at(severity_from_tier(tier(severity) - 1));
      if (auto it = prev_tier.ops.find(kind); it != prev_tier.ops.end()) prev_ = &it->second;
    }
  }

  double operator()(const std::string& name) {
    const auto it = ranges_.find(name);
    if (it == ranges_.end()) throw ParameterError("severity config has no range for '" + name + "'");
    const Interval cur = it->second;
    if (prev_) {
      if (auto p = prev_->find(name); p != prev_->end()) {
        const Interval prev = p->second;
        const bool nested = cur.lo <= prev.lo && prev.hi <= cur.hi && !(prev == cur) && prev.width() > 0.0;
        if (nested) {
          const double left = prev.lo - cur.lo;
          const double right = cur.hi - prev.hi;
          const double u = rng_.uniform() * (left + right);
          return u < left ? cur.lo + u : prev.hi + (u - left);
        }
      }
    }
    return rng_.uniform(cur.lo, cur.hi);
  }

 private:
  CounterRng& rng_;
  const ParamRanges& ranges_;
  const ParamRanges* prev_ = nullptr;
};

OpParams draw_params(OpKind kind, ParamDrawer& draw, CounterRng& rng, const SeverityConfig& config) {
  switch (kind) {
    case OpKind::Exposure: return ops::Exposure{draw("ev")};
    case OpKind::Brightness: return ops::Brightness{draw("percent")};
    case OpKind::Contrast: return ops::Contrast{draw("factor")};
    case OpKind::Gamma: return ops::Gamma{draw("gamma")};
    case OpKind::Warm: return ops::Warm{draw("tint")};
    case OpKind::Cool: return ops::Cool{draw("tint")};
    case OpKind::Vignette: {
      ops::Vignette v;
      v.strength = draw("strength");
      v.center_x = draw("center_x");
      v.center_y = draw("center_y");
      v.power = draw("power");
      return v;
    }
    case OpKind::Shadow: {
      ops::Shadow s;
      s.angle_deg = draw("angle_deg");
      s.strength = draw("strength");
      s.sharpness = draw("sharpness");
      return s;
    }
    case OpKind::Grain: return ops::Grain{draw("intensity"), 0};
    case OpKind::Haze: return ops::Haze{draw("alpha"), config.haze_color};
    case OpKind::ColorCast: {
      ops::ColorCast c;
      c.hue_deg = draw("hue_deg");
      c.strength = draw("strength");
      return c;
    }
    case OpKind::Flare: {
      ops::Flare f;
      const double depth = draw("edge_distance");
      const auto edge = rng.below(4);
      const double along = rng.uniform(depth, 1.0 - depth);
      switch (edge) {
        case 0: f.center_x = depth; f.center_y = along; break;
        case 1: f.center_x = 1.0 - depth; f.center_y = along; break;
        case 2: f.center_x = along; f.center_y = depth; break;
        default: f.center_x = along; f.center_y = 1.0 - depth; break;
      }
      f.sigma = draw("sigma");
      f.amplitude = draw("amplitude");
      return f;
    }
  }
  throw ContractError("unhandled op kind");
}

bool same_group(const SeverityConfig& config, OpKind a, OpKind b) {
  for (const auto& g : config.conflict_groups) {
    const bool has_a = std::find(g.begin(), g.end(), a) != g.end();
    const bool has_b = std::find(g.begin(), g.end(), b) != g.end();
    if (has_a && has_b) return true;
  }
  return false;
}

}  // namespace

std::vector<OpKind> VariantRecipe::kinds() const {
  std::vector<OpKind> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(kind_of(s));
  return out;
}

int stage_of(OpKind kind) {
  if (kind == OpKind::Cool) kind = OpKind::Warm;  // one color-temperature stage
  const auto it = std::find(kCanonicalStages.begin(), kCanonicalStages.end(), kind);
  return static_cast<int>(it - kCanonicalStages.begin());
}

std::vector<OpKind> canonical_order(std::vector<OpKind> kinds) {
  std::stable_sort(kinds.begin(), kinds.end(), [](OpKind a, OpKind b) { return stage_of(a) < stage_of(b); });
  return kinds;
}

VariantRecipe sample_recipe(std::uint64_t global_seed, std::string_view image_id, Severity severity,
                            const SeverityConfig& config, int variant_index) {
  const std::uint64_t id_hash = fnv1a64(image_id);
  CounterRng rng(derive_key(global_seed, id_hash, static_cast<std::uint64_t>(variant_index),
                            static_cast<std::uint64_t>(tier(severity)), kRecipeStream));
  const auto& tc = config.at(severity);

  std::vector<OpKind> pool;
  for (OpKind k : kAllOpKinds) {
    if (tc.ops.count(k)) pool.push_back(k);
  }
  const auto count = 1 + rng.below(static_cast<std::uint64_t>(tc.max_ops));
  std::vector<OpParams> chosen;
  while (chosen.size() < count) {
    if (pool.empty()) throw ContractError("sampler: candidate pool exhausted; severity config too restrictive");
    const OpKind k = pool[rng.below(pool.size())];
    const auto blocked = config.conflicts_of(k);
    std::erase_if(pool, [&](OpKind p) {
      return p == k || std::find(blocked.begin(), blocked.end(), p) != blocked.end();
    });
    ParamDrawer draw(config, severity, k, rng);
    chosen.push_back(draw_params(k, draw, rng, config));
  }
  std::stable_sort(chosen.begin(), chosen.end(), [](const OpParams& a, const OpParams& b) {
    return stage_of(kind_of(a)) < stage_of(kind_of(b));
  });
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (auto* g = std::get_if<ops::Grain>(&chosen[i])) {
      g->noise_seed = derive_key(global_seed, id_hash, static_cast<std::uint64_t>(variant_index), i, kGrainStream);
    }
  }

  VariantRecipe recipe;
  recipe.image_id = std::string(image_id);
  recipe.severity = severity;
  recipe.seed = global_seed;
  recipe.variant_index = variant_index;
  recipe.steps = std::move(chosen);
  return recipe;
}

std::vector<Violation> validate_recipe(const VariantRecipe& recipe, const SeverityConfig& config) {
  std::vector<Violation> out;
  const int t = tier(recipe.severity);
  if (t < 1 || t > 3) {
    out.push_back({"tier", -1, "severity tier " + std::to_string(t) + " is not 1..3"});
    return out;
  }
  const auto& tc = config.at(recipe.severity);
  const int n = static_cast<int>(recipe.steps.size());
  if (n < 1 || n > tc.max_ops) {
    out.push_back({"op_count", -1,
                   std::to_string(n) + " steps, tier " + std::to_string(t) + " allows 1.." +
                       std::to_string(tc.max_ops)});
  }

  std::set<OpKind> seen;
  for (int i = 0; i < n; ++i) {
    const auto& step = recipe.steps[static_cast<std::size_t>(i)];
    const OpKind k = kind_of(step);
    const std::string name(to_string(k));
    if (!seen.insert(k).second) out.push_back({"duplicate", i, name + " applied more than once"});
    for (int j = 0; j < i; ++j) {
      const OpKind other = kind_of(recipe.steps[static_cast<std::size_t>(j)]);
      if (other != k && same_group(config, k, other)) {
        out.push_back({"conflict", i, name + " conflicts with " + std::string(to_string(other))});
      }
    }
    const auto ranges = tc.ops.find(k);
    if (ranges == tc.ops.end()) {
      out.push_back({"tier", i, name + " is not available at tier " + std::to_string(t)});
    } else {
      for (const auto& [pname, value] : named_values(step)) {
        const auto iv = ranges->second.find(pname);
        if (iv == ranges->second.end()) continue;
        if (!iv->second.contains(value)) {
          std::ostringstream os;
          os << name << "." << pname << " = " << value << " outside [" << iv->second.lo << ", " << iv->second.hi
             << "] at tier " << t;
          out.push_back({"range", i, os.str()});
        }
      }
    }
    if (auto msg = check_params(step)) out.push_back({"range", i, name + ": " + *msg});
    if (i > 0 && stage_of(k) < stage_of(kind_of(recipe.steps[static_cast<std::size_t>(i - 1)]))) {
      out.push_back({"order", i, name + " is out of canonical order"});
    }
  }
  return out;
}

RasterImage apply_recipe(const RasterImage& clean, const VariantRecipe& recipe) {
  RasterImage img = clean;
  for (const auto& step : recipe.steps) img = apply_op(img, step);
  return img;
}

SeverityPolicy SeverityPolicy::fixed(Severity s) {
  SeverityPolicy p;
  p.mode_ = Mode::Fixed;
  p.fixed_ = s;
  return p;
}

SeverityPolicy SeverityPolicy::uniform() { return SeverityPolicy{}; }

SeverityPolicy SeverityPolicy::weighted(std::array<double, 3> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("severity weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw ParameterError("severity weights must not all be zero");
  SeverityPolicy p;
  p.mode_ = Mode::Weighted;
  p.weights_ = weights;
  return p;
}

SeverityPolicy SeverityPolicy::parse(std::string_view text) {
  if (text == "1" || text == "2" || text == "3") return fixed(severity_from_tier(text[0] - '0'));
  if (text == "uniform") return uniform();
  constexpr std::string_view prefix = "weighted:";
  if (text.starts_with(prefix)) {
    std::array<double, 3> w{};
    std::string rest(text.substr(prefix.size()));
    std::istringstream is(rest);
    std::string item;
    std::size_t i = 0;
    while (std::getline(is, item, ',')) {
      if (i >= 3) throw ParameterError("weighted policy takes exactly three weights");
      try {
        w[i++] = std::stod(item);
      } catch (const std::exception&) {
        throw ParameterError("bad severity weight '" + item + "'");
      }
    }
    if (i != 3) throw ParameterError("weighted policy takes exactly three weights");
    return weighted(w);
  }
  throw ParameterError("unknown severity policy '" + std::string(text) + "' (use 1|2|3|uniform|weighted:a,b,c)");
}

Severity SeverityPolicy::pick(std::uint64_t global_seed, std::string_view image_id, int variant_index) const {
  if (mode_ == Mode::Fixed) return fixed_;
  const double u = CounterRng::unit_at(
      derive_key(global_seed, fnv1a64(image_id), static_cast<std::uint64_t>(variant_index), kSeverityStream), 0);
  std::array<double, 3> w = mode_ == Mode::Uniform ? std::array<double, 3>{1.0, 1.0, 1.0} : weights_;
  const double total = w[0] + w[1] + w[2];
  // unit_at is in (0, 1]; shift to [0, 1).
  const double target = (1.0 - u) * total;
  double acc = 0.0;
  for (int t = 0; t < 3; ++t) {
    acc += w[static_cast<std::size_t>(t)];
    if (target < acc) return severity_from_tier(t + 1);
  }
  return Severity::Severe;
}

std::string SeverityPolicy::describe() const {
  switch (mode_) {
    case Mode::Fixed: return std::to_string(tier(fixed_));
    case Mode::Uniform: return "uniform";
    case Mode::Weighted: {
      std::ostringstream os;
      os << "weighted:" << weights_[0] << "," << weights_[1] << "," << weights_[2];
      return os.str();
    }
  }
  return "uniform";
}

}  // namespace lumaforge
