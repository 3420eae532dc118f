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
#ifndef LUMAFORGE_LCA_PARAMS_HPP_
#define LUMAFORGE_LCA_PARAMS_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lumaforge/lca/tensor.hpp"

namespace lumaforge::lca {

inline constexpr int kSpatialKernel = 7;
inline constexpr int kRefineKernel = 3;
inline constexpr int kDepthwiseKernel = 3;

/// Fixed 3x3 Laplacian, row-major. Not a trainable parameter.
inline constexpr std::array<int, 9> kLaplacian = {0, 1, 0, 1, -4, 1, 0, 1, 0};

struct LcaConfig {
  Index channels = 8;
  Index reduction = 2;  // channel MLP hidden width = channels / reduction
  Index groups = 32;    // GroupNorm groups
  double epsilon = 1e-6;     // contrast normalization
  double gn_epsilon = 1e-5;  // GroupNorm variance

  Index hidden() const { return channels / reduction; }

  void check() const {
    if (channels < 1) throw ContractError("LcaConfig: channels must be >= 1");
    if (reduction < 1 || channels % reduction != 0) {
      throw ContractError("LcaConfig: channels must be divisible by the reduction ratio");
    }
    if (groups < 1 || channels % groups != 0) {
      throw ContractError("LcaConfig: channels must be divisible by the GroupNorm group count");
    }
  }
};

/// Full weight set of one adapter. The same struct carries gradients.
template <typename Scalar>
struct LcaParams {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LcaConfig config;
  Matrix mlp_w1;          // hidden x C
  Vector mlp_b1;          // hidden
  Matrix mlp_w2;          // C x hidden
  Vector mlp_b2;          // C
  Vector spatial_kernel;  // [in_ch(2)][ky(7)][kx(7)]
  Vector gray_weight;     // C
  Vector gray_bias;       // 1
  Vector refine_kernel;   // 3x3
  Vector refine_bias;     // 1
  Vector dw_kernel;       // [C][3][3]
  Vector dw_bias;         // C
  Vector gn_scale;        // C
  Vector gn_shift;        // C
  Matrix pw_weight;       // C_out x C_in, no bias
  Vector gate;            // 1, the residual gate scalar

  static LcaParams zeros(const LcaConfig& config) {
    config.check();
    const Index c = config.channels;
    const Index r = config.hidden();
    LcaParams p;
    p.config = config;
    p.mlp_w1 = Matrix::Zero(r, c);
    p.mlp_b1 = Vector::Zero(r);
    p.mlp_w2 = Matrix::Zero(c, r);
    p.mlp_b2 = Vector::Zero(c);
    p.spatial_kernel = Vector::Zero(2 * kSpatialKernel * kSpatialKernel);
    p.gray_weight = Vector::Zero(c);
    p.gray_bias = Vector::Zero(1);
    p.refine_kernel = Vector::Zero(kRefineKernel * kRefineKernel);
    p.refine_bias = Vector::Zero(1);
    p.dw_kernel = Vector::Zero(c * kDepthwiseKernel * kDepthwiseKernel);
    p.dw_bias = Vector::Zero(c);
    p.gn_scale = Vector::Zero(c);
    p.gn_shift = Vector::Zero(c);
    p.pw_weight = Matrix::Zero(c, c);
    p.gate = Vector::Zero(1);
    return p;
  }

  /// Construction-time state: uniform(+-1/sqrt(fan_in)) weights, GroupNorm
  /// scale 1 / shift 0, all-zero pointwise projection, gate scalar -1.
  static LcaParams fresh(const LcaConfig& config, std::uint64_t seed) {
    LcaParams p = zeros(config);
    CounterRng rng(seed);
    auto fill = [&rng](auto& m, double fan_in) {
      const double bound = 1.0 / std::sqrt(fan_in);
      for (Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<Scalar>(rng.uniform(-bound, bound));
    };
    const auto c = static_cast<double>(config.channels);
    const auto r = static_cast<double>(config.hidden());
    fill(p.mlp_w1, c);
    fill(p.mlp_b1, c);
    fill(p.mlp_w2, r);
    fill(p.mlp_b2, r);
    fill(p.spatial_kernel, 2.0 * kSpatialKernel * kSpatialKernel);
    fill(p.gray_weight, c);
    fill(p.gray_bias, c);
    fill(p.refine_kernel, 9.0);
    fill(p.refine_bias, 9.0);
    fill(p.dw_kernel, 9.0);
    fill(p.dw_bias, 9.0);
    p.gn_scale.setOnes();
    p.gn_shift.setZero();
    p.pw_weight.setZero();
    p.gate.setConstant(Scalar(-1));
    return p;
  }

  /// Every trainable entry uniform in [-0.5, 0.5) (GroupNorm scale around 1).
  /// Used where a nonzero projection is needed, e.g. gradient checks.
  static LcaParams random(const LcaConfig& config, std::uint64_t seed) {
    LcaParams p = zeros(config);
    CounterRng rng(seed);
    p.for_each_trainable([&rng](const char*, std::span<Scalar> s) {
      for (auto& v : s) v = static_cast<Scalar>(rng.uniform(-0.5, 0.5));
    });
    p.gn_scale.array() += Scalar(1);
    return p;
  }

  /// Visits every trainable tensor as (name, flat span). The Laplacian is a
  /// constant buffer and is never visited.
  template <typename F>
  void for_each_trainable(F&& f) {
    auto span = [](auto& m) { return std::span<Scalar>(m.data(), static_cast<std::size_t>(m.size())); };
    f("channel_mlp.fc1.weight", span(mlp_w1));
    f("channel_mlp.fc1.bias", span(mlp_b1));
    f("channel_mlp.fc2.weight", span(mlp_w2));
    f("channel_mlp.fc2.bias", span(mlp_b2));
    f("spatial_conv.weight", span(spatial_kernel));
    f("gray_proj.weight", span(gray_weight));
    f("gray_proj.bias", span(gray_bias));
    f("refine_conv.weight", span(refine_kernel));
    f("refine_conv.bias", span(refine_bias));
    f("dw_conv.weight", span(dw_kernel));
    f("dw_conv.bias", span(dw_bias));
    f("group_norm.weight", span(gn_scale));
    f("group_norm.bias", span(gn_shift));
    f("pw_conv.weight", span(pw_weight));
    f("gate", span(gate));
  }

  template <typename F>
  void for_each_trainable(F&& f) const {
    const_cast<LcaParams*>(this)->for_each_trainable([&f](const char* name, std::span<Scalar> s) {
      f(name, std::span<const Scalar>(s.data(), s.size()));
    });
  }

  Scalar gate_scalar() const { return gate[0]; }
};

/// Per-sub-layer parameter counts, in module order.
struct ParamCount {
  std::vector<std::pair<std::string, std::size_t>> layers;
  std::size_t total = 0;

  std::size_t of(const std::string& layer) const {
    for (const auto& [name, n] : layers) {
      if (name == layer) return n;
    }
    return 0;
  }
};

template <typename Scalar>
ParamCount param_count(const LcaParams<Scalar>& params, bool trainable_only) {
  ParamCount out;
  auto add = [&out](const std::string& layer, std::size_t n) {
    for (auto& [name, count] : out.layers) {
      if (name == layer) {
        count += n;
        out.total += n;
        return;
      }
    }
    out.layers.emplace_back(layer, n);
    out.total += n;
  };
  params.for_each_trainable([&](const char* name, std::span<const Scalar> s) {
    const std::string full(name);
    const auto dot = full.find('.');
    const std::string layer = full.substr(0, dot);
    add(layer, s.size());
  });
  if (!trainable_only) {
    auto pos = out.layers.begin();
    while (pos != out.layers.end() && pos->first != "refine_conv") ++pos;
    out.layers.emplace(pos, "laplacian", kLaplacian.size());
    out.total += kLaplacian.size();
  }
  return out;
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_PARAMS_HPP_
