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
#ifndef LUMAFORGE_LCA_MODEL_HPP_
#define LUMAFORGE_LCA_MODEL_HPP_

#include <vector>

#include "lumaforge/lca/losses.hpp"
#include "lumaforge/lca/module.hpp"

namespace lumaforge::lca {

/// One frozen block with an LCA adapter, followed by a fixed 1x1 readout to a
/// single logit map. Both the clean and the variant stream share the adapter.
template <typename Scalar>
struct AdaptedBlock {
  Block<Scalar> block;
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> head;  // 1 x C
  Scalar head_bias = 0;

  static AdaptedBlock with_seed(Index channels, std::uint64_t seed) {
    AdaptedBlock m;
    m.block = fixed_linear_block<Scalar>(channels, derive_key(seed, 1));
    m.head.resize(channels);
    CounterRng rng(derive_key(seed, 2));
    for (Index c = 0; c < channels; ++c) m.head[c] = static_cast<Scalar>(rng.uniform(-1.0, 1.0));
    return m;
  }
};

template <typename Scalar>
struct StreamTrace {
  ResidualTrace<Scalar> residual;
  Tensor4<Scalar> logits;  // (B, 1, H, W)
};

template <typename Scalar>
StreamTrace<Scalar> stream_forward(const AdaptedBlock<Scalar>& m, const LcaParams<Scalar>& p,
                                   const Tensor4<Scalar>& x) {
  StreamTrace<Scalar> s;
  s.residual = gated_residual_traced(m.block(x), x, p);
  const auto& y = s.residual.output;
  s.logits = Tensor4<Scalar>(y.batch(), 1, y.height(), y.width());
  for (Index b = 0; b < y.batch(); ++b) {
    s.logits.sample(b).noalias() = m.head * y.sample(b);
    s.logits.sample(b).array() += m.head_bias;
  }
  return s;
}

template <typename Scalar>
LcaParams<Scalar> stream_backward(const AdaptedBlock<Scalar>& m, const LcaParams<Scalar>& p,
                                  const Tensor4<Scalar>& x, const StreamTrace<Scalar>& s,
                                  const Tensor4<Scalar>& dlogits) {
  require_same_shape(dlogits, s.logits, "stream_backward");
  const auto& y = s.residual.output;
  Tensor4<Scalar> dy(y.batch(), y.channels(), y.height(), y.width());
  for (Index b = 0; b < y.batch(); ++b) dy.sample(b).noalias() = m.head.transpose() * dlogits.sample(b);
  return gated_residual_backward(x, p, s.residual, dy);
}

template <typename Scalar>
void accumulate(LcaParams<Scalar>& into, const LcaParams<Scalar>& g) {
  std::vector<std::span<const Scalar>> src;
  g.for_each_trainable([&src](const char*, std::span<const Scalar> s) { src.push_back(s); });
  std::size_t i = 0;
  into.for_each_trainable([&](const char*, std::span<Scalar> dst) {
    const auto& s = src[i++];
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += s[j];
  });
}

/// Paired training example: batch sample k of both inputs is instance k.
template <typename Scalar>
struct PairBatch {
  Tensor4<Scalar> clean;
  Tensor4<Scalar> variant;
  Tensor4<Scalar> masks;  // (B, 1, H, W), binary
};

template <typename Scalar>
std::vector<InstanceStreams<Scalar>> instance_streams(const Tensor4<Scalar>& zc, const Tensor4<Scalar>& zv,
                                                      const Tensor4<Scalar>& masks) {
  require_same_shape(zc, masks, "instance masks");
  std::vector<InstanceStreams<Scalar>> out;
  for (Index b = 0; b < zc.batch(); ++b) {
    out.push_back({zc.slice_batch(b, 1), zv.slice_batch(b, 1), masks.slice_batch(b, 1)});
  }
  return out;
}

/// Scalar training objective of the dual-stream setup.
template <typename Scalar>
Scalar pair_loss(const AdaptedBlock<Scalar>& m, const LcaParams<Scalar>& p, const PairBatch<Scalar>& batch,
                 const LossWeights& w) {
  const auto sc = stream_forward(m, p, batch.clean);
  const auto sv = stream_forward(m, p, batch.variant);
  return total_loss(instance_streams(sc.logits, sv.logits, batch.masks), w);
}

/// Loss and its gradient with respect to every trainable adapter tensor.
template <typename Scalar>
Scalar pair_loss_grad(const AdaptedBlock<Scalar>& m, const LcaParams<Scalar>& p, const PairBatch<Scalar>& batch,
                      const LossWeights& w, LcaParams<Scalar>& grad) {
  const auto sc = stream_forward(m, p, batch.clean);
  const auto sv = stream_forward(m, p, batch.variant);
  std::vector<LossGrad<Scalar>> per_instance;
  const Scalar loss = total_loss(instance_streams(sc.logits, sv.logits, batch.masks), w, &per_instance);
  Tensor4<Scalar> dzc = per_instance.front().d_clean;
  Tensor4<Scalar> dzv = per_instance.front().d_variant;
  for (std::size_t k = 1; k < per_instance.size(); ++k) {
    dzc = Tensor4<Scalar>::concat_batch(dzc, per_instance[k].d_clean);
    dzv = Tensor4<Scalar>::concat_batch(dzv, per_instance[k].d_variant);
  }
  grad = stream_backward(m, p, batch.clean, sc, dzc);
  accumulate(grad, stream_backward(m, p, batch.variant, sv, dzv));
  return loss;
}

/// Discrete branch state of pair_loss at `p`: ReLU masks, Laplacian
/// extremum positions and the sign pattern of the consistency term. The loss
/// is smooth on any parameter neighbourhood where this stays constant.
template <typename Scalar>
std::vector<std::int64_t> branch_signature(const AdaptedBlock<Scalar>& m, const LcaParams<Scalar>& p,
                                           const PairBatch<Scalar>& batch) {
  std::vector<std::int64_t> sig;
  const auto positive = [&sig](const auto& values) {
    for (Index i = 0; i < values.size(); ++i) sig.push_back(values.data()[i] > Scalar(0) ? 1 : 0);
  };
  const auto sc = stream_forward(m, p, batch.clean);
  const auto sv = stream_forward(m, p, batch.variant);
  for (const auto* s : {&sc, &sv}) {
    const auto& t = s->residual.lca;
    positive(t.hidden_avg);
    positive(t.hidden_max);
    positive(t.activated.data());
    sig.insert(sig.end(), t.edge_argmin.begin(), t.edge_argmin.end());
    sig.insert(sig.end(), t.edge_argmax.begin(), t.edge_argmax.end());
  }
  for (Index i = 0; i < sc.logits.size(); ++i) {
    const Scalar d = sc.logits.data()[i] - sv.logits.data()[i];
    sig.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
  }
  return sig;
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_MODEL_HPP_
