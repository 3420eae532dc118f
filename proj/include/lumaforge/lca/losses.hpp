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
#ifndef LUMAFORGE_LCA_LOSSES_HPP_
#define LUMAFORGE_LCA_LOSSES_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "lumaforge/lca/tensor.hpp"

namespace lumaforge::lca {

/// lambda_s blends the clean and variant supervised terms, lambda_c scales
/// the cross-stream consistency term.
struct LossWeights {
  double supervised = 0.5;
  double consistency = 0.1;

  void check() const {
    if (!(supervised >= 0.0 && supervised <= 1.0)) throw ContractError("LossWeights: supervised blend outside [0, 1]");
    if (!(consistency >= 0.0)) throw ContractError("LossWeights: consistency weight must be >= 0");
  }
};

namespace detail {

template <typename Scalar>
void require_probabilities(const Tensor4<Scalar>& p, const char* what) {
  for (Index i = 0; i < p.size(); ++i) {
    const Scalar v = p.data()[i];
    if (!(v > Scalar(0) && v < Scalar(1))) {
      throw ContractError(std::string(what) + ": probability outside (0, 1) at index " + std::to_string(i));
    }
  }
}

template <typename Scalar>
void require_binary(const Tensor4<Scalar>& m, const char* what) {
  for (Index i = 0; i < m.size(); ++i) {
    const Scalar v = m.data()[i];
    if (v != Scalar(0) && v != Scalar(1)) {
      throw ContractError(std::string(what) + ": mask value is not 0 or 1 at index " + std::to_string(i));
    }
  }
}

template <typename Scalar>
Scalar softplus(Scalar z) {
  return std::max(z, Scalar(0)) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace detail

/// (2 sum(p m) + s) / (sum(p) + sum(m) + s).
template <typename Scalar>
Scalar dice(const Tensor4<Scalar>& p, const Tensor4<Scalar>& m, Scalar smooth = 1) {
  require_same_shape(p, m, "dice");
  detail::require_probabilities(p, "dice");
  detail::require_binary(m, "dice");
  return (Scalar(2) * (p.data() * m.data()).sum() + smooth) / (p.data().sum() + m.data().sum() + smooth);
}

/// Mean binary cross-entropy on logits.
template <typename Scalar>
Scalar bce_with_logits(const Tensor4<Scalar>& z, const Tensor4<Scalar>& m) {
  require_same_shape(z, m, "bce_with_logits");
  detail::require_binary(m, "bce_with_logits");
  Scalar acc = 0;
  for (Index i = 0; i < z.size(); ++i) acc += detail::softplus(z.data()[i]) - z.data()[i] * m.data()[i];
  return acc / static_cast<Scalar>(z.size());
}

template <typename Scalar>
Tensor4<Scalar> logits_of(const Tensor4<Scalar>& p) {
  Tensor4<Scalar> z(p.batch(), p.channels(), p.height(), p.width());
  z.data() = p.data().log() - (-p.data()).log1p();
  return z;
}

template <typename Scalar>
Tensor4<Scalar> probabilities_of(const Tensor4<Scalar>& z) {
  Tensor4<Scalar> p(z.batch(), z.channels(), z.height(), z.width());
  p.data() = z.data().unaryExpr([](Scalar v) { return sigmoid(v); });
  return p;
}

/// Mean binary cross-entropy of probabilities, evaluated through logits.
template <typename Scalar>
Scalar bce(const Tensor4<Scalar>& p, const Tensor4<Scalar>& m) {
  require_same_shape(p, m, "bce");
  detail::require_probabilities(p, "bce");
  return bce_with_logits(logits_of(p), m);
}

template <typename Scalar>
Scalar seg_loss(const Tensor4<Scalar>& p, const Tensor4<Scalar>& m, Scalar smooth = 1) {
  return bce(p, m) + Scalar(1) - dice(p, m, smooth);
}

/// seg_loss on logits; optionally accumulates scale * dL/dz into `dz`.
template <typename Scalar>
Scalar seg_loss_logits(const Tensor4<Scalar>& z, const Tensor4<Scalar>& m, Tensor4<Scalar>* dz = nullptr,
                       Scalar scale = 1, Scalar smooth = 1) {
  require_same_shape(z, m, "seg_loss");
  detail::require_binary(m, "seg_loss");
  const Tensor4<Scalar> p = probabilities_of(z);
  const Scalar n = static_cast<Scalar>(z.size());
  const Scalar a = Scalar(2) * (p.data() * m.data()).sum() + smooth;
  const Scalar d = p.data().sum() + m.data().sum() + smooth;
  const Scalar loss = bce_with_logits(z, m) + Scalar(1) - a / d;
  if (dz != nullptr) {
    require_same_shape(*dz, z, "seg_loss gradient");
    const auto sig_prime = p.data() * (Scalar(1) - p.data());
    const auto d_dice = (Scalar(2) * m.data() * d - a) / (d * d);
    dz->data() += scale * ((p.data() - m.data()) / n - d_dice * sig_prime);
  }
  return loss;
}

/// mean |sigmoid(a) - sigmoid(b)|; optional gradients scaled by `scale`.
template <typename Scalar>
Scalar consistency_loss(const Tensor4<Scalar>& za, const Tensor4<Scalar>& zb, Tensor4<Scalar>* dza = nullptr,
                        Tensor4<Scalar>* dzb = nullptr, Scalar scale = 1) {
  require_same_shape(za, zb, "consistency_loss");
  const Tensor4<Scalar> pa = probabilities_of(za);
  const Tensor4<Scalar> pb = probabilities_of(zb);
  const auto diff = (pa.data() - pb.data()).eval();
  const Scalar n = static_cast<Scalar>(za.size());
  if (dza != nullptr || dzb != nullptr) {
    const auto sign = diff.unaryExpr([](Scalar v) { return v > 0 ? Scalar(1) : (v < 0 ? Scalar(-1) : Scalar(0)); });
    if (dza != nullptr) dza->data() += scale * sign * pa.data() * (Scalar(1) - pa.data()) / n;
    if (dzb != nullptr) dzb->data() -= scale * sign * pb.data() * (Scalar(1) - pb.data()) / n;
  }
  return diff.abs().sum() / n;
}

/// Per-instance loss terms already reduced to scalars.
struct InstanceLoss {
  double supervised = 0.0;
  double consistency = 0.0;
};

/// (1/K) sum_k [L_sup + lambda_c L_cons].
inline double combine_losses(std::span<const InstanceLoss> instances, const LossWeights& w) {
  w.check();
  if (instances.empty()) throw ContractError("total loss needs at least one instance");
  double acc = 0.0;
  for (const auto& k : instances) acc += k.supervised + w.consistency * k.consistency;
  return acc / static_cast<double>(instances.size());
}

/// Logits of both streams and the shared ground-truth mask for one instance.
template <typename Scalar>
struct InstanceStreams {
  Tensor4<Scalar> clean_logits;
  Tensor4<Scalar> variant_logits;
  Tensor4<Scalar> mask;
};

template <typename Scalar>
struct LossGrad {
  Tensor4<Scalar> d_clean;
  Tensor4<Scalar> d_variant;
};

/// Instance-averaged total loss. With `grads` non-null, fills dL/dlogits per instance.
template <typename Scalar>
Scalar total_loss(const std::vector<InstanceStreams<Scalar>>& instances, const LossWeights& w,
                  std::vector<LossGrad<Scalar>>* grads = nullptr) {
  w.check();
  if (instances.empty()) throw ContractError("total loss needs at least one instance");
  const Scalar inv_k = Scalar(1) / static_cast<Scalar>(instances.size());
  const Scalar ls = static_cast<Scalar>(w.supervised);
  const Scalar lc = static_cast<Scalar>(w.consistency);
  if (grads != nullptr) grads->clear();
  Scalar acc = 0;
  for (const auto& k : instances) {
    require_same_shape(k.clean_logits, k.variant_logits, "total_loss");
    Tensor4<Scalar>* dc = nullptr;
    Tensor4<Scalar>* dv = nullptr;
    if (grads != nullptr) {
      const auto& z = k.clean_logits;
      grads->push_back({Tensor4<Scalar>(z.batch(), z.channels(), z.height(), z.width()),
                        Tensor4<Scalar>(z.batch(), z.channels(), z.height(), z.width())});
      dc = &grads->back().d_clean;
      dv = &grads->back().d_variant;
    }
    const Scalar sup = ls * seg_loss_logits(k.clean_logits, k.mask, dc, ls * inv_k) +
                       (Scalar(1) - ls) * seg_loss_logits(k.variant_logits, k.mask, dv, (Scalar(1) - ls) * inv_k);
    const Scalar cons = consistency_loss(k.clean_logits, k.variant_logits, dc, dv, lc * inv_k);
    acc += sup + lc * cons;
  }
  return acc * inv_k;
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_LOSSES_HPP_
