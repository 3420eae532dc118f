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
#include <cstring>
#include <filesystem>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "lumaforge/errors.hpp"
#include "lumaforge/lca/gradcheck.hpp"
#include "lumaforge/lca/io.hpp"
#include "lumaforge/lca/model.hpp"
#include "support/fixture.hpp"

namespace lumaforge::lca {
namespace {

double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }

LcaConfig small_config(Index channels = 8, Index groups = 2) {
  LcaConfig c;
  c.channels = channels;
  c.reduction = 2;
  c.groups = groups;
  return c;
}

TEST(Tensor4, ShapeAndBatchOps) {
  const auto t = Tensor4<double>::random(3, 2, 4, 5, 1);
  EXPECT_EQ(t.size(), 3 * 2 * 4 * 5);
  const auto a = t.slice_batch(0, 1);
  const auto b = t.slice_batch(1, 2);
  const auto joined = Tensor4<double>::concat_batch(a, b);
  EXPECT_TRUE(joined.same_shape(t));
  EXPECT_TRUE((joined.data() == t.data()).all());
  EXPECT_EQ(b(0, 1, 2, 3), t(1, 1, 2, 3));
  EXPECT_THROW(t.slice_batch(2, 2), ContractError);
  EXPECT_THROW(Tensor4<double>::concat_batch(a, Tensor4<double>(1, 3, 4, 5)), ContractError);
}

TEST(ChannelGate, ZeroMlpGivesHalf) {
  const auto p = LcaParams<double>::zeros(small_config());
  const auto g = channel_gate(Tensor4<double>::random(2, 8, 3, 3, 4), p);
  EXPECT_EQ(g.batch(), 2);
  EXPECT_EQ(g.height(), 1);
  EXPECT_TRUE((g.data() == 0.5).all());
}

TEST(ChannelGate, ConstantChannelsDoubleTheMlp) {
  const auto p = LcaParams<double>::random(small_config(), 3);
  Tensor4<double> x(1, 8, 3, 3);
  for (Index c = 0; c < 8; ++c) x.sample(0).row(c).setConstant(0.1 * static_cast<double>(c) - 0.3);
  const auto g = channel_gate(x, p);
  Eigen::VectorXd d(8);
  for (Index c = 0; c < 8; ++c) d[c] = 0.1 * static_cast<double>(c) - 0.3;
  const Eigen::VectorXd hidden = (p.mlp_w1 * d + p.mlp_b1).cwiseMax(0.0);
  const Eigen::VectorXd z = 2.0 * (p.mlp_w2 * hidden + p.mlp_b2);
  for (Index c = 0; c < 8; ++c) EXPECT_NEAR(g(0, c, 0, 0), sig(z[c]), 1e-12);
}

TEST(ChannelGate, HandComputedTwoChannelMlp) {
  auto p = LcaParams<double>::zeros(small_config(2, 1));
  p.mlp_w1 << 0.5, -1.0;
  p.mlp_b1 << 0.1;
  p.mlp_w2 << 1.0, -0.5;
  p.mlp_b2 << 0.2, 0.3;
  Tensor4<double> x(1, 2, 2, 2);
  x.sample(0).row(0) << 1, 2, 3, 4;   // avg 2.5, max 4
  x.sample(0).row(1) << -1, 0, 1, -2;  // avg -0.5, max 1
  // hidden: avg path 1.25 + 0.5 + 0.1 = 1.85, max path 2 - 1 + 0.1 = 1.1
  const auto g = channel_gate(x, p);
  EXPECT_NEAR(g(0, 0, 0, 0), sig(2.95 + 0.4), 1e-12);
  EXPECT_NEAR(g(0, 1, 0, 0), sig(-0.5 * 2.95 + 0.6), 1e-12);
}

TEST(ChannelGate, ChannelMismatchThrows) {
  const auto p = LcaParams<double>::zeros(small_config());
  EXPECT_THROW(channel_gate(Tensor4<double>(1, 4, 3, 3), p), ContractError);
}

TEST(SpatialGate, ZeroKernelGivesHalf) {
  const auto p = LcaParams<double>::zeros(small_config());
  const auto g = spatial_gate(Tensor4<double>::random(2, 8, 5, 4, 9), p);
  EXPECT_EQ(g.channels(), 1);
  EXPECT_TRUE((g.data() == 0.5).all());
}

TEST(SpatialGate, SinglePixelUsesOnlyCenterTaps) {
  auto p = LcaParams<double>::random(small_config(4, 2), 5);
  p.spatial_kernel[3 * 7 + 3] = 0.5;
  p.spatial_kernel[49 + 3 * 7 + 3] = -1.0;
  Tensor4<double> x(1, 4, 1, 1);
  x.data() << 0.2, -0.4, 0.9, 0.1;
  const double mean = (0.2 - 0.4 + 0.9 + 0.1) / 4.0;
  EXPECT_NEAR(spatial_gate(x, p)(0, 0, 0, 0), sig(0.5 * mean - 0.9), 1e-12);
}

TEST(Laplacian, ImpulseResponse) {
  Tensor4<double> g(1, 1, 3, 3);
  g(0, 0, 1, 1) = 1.0;
  const auto e = laplacian_response(g);
  EXPECT_EQ(e(0, 0, 1, 1), -4.0);
  EXPECT_EQ(e(0, 0, 0, 1), 1.0);
  EXPECT_EQ(e(0, 0, 2, 1), 1.0);
  EXPECT_EQ(e(0, 0, 1, 0), 1.0);
  EXPECT_EQ(e(0, 0, 1, 2), 1.0);
  EXPECT_EQ(e(0, 0, 0, 0), 0.0);
  EXPECT_EQ(e(0, 0, 2, 2), 0.0);
}

TEST(Laplacian, AnnihilatesAffineInterior) {
  Tensor4<double> g(1, 1, 9, 7);
  for (Index y = 0; y < 9; ++y) {
    for (Index x = 0; x < 7; ++x) g(0, 0, y, x) = 0.37 * static_cast<double>(x) - 1.3 * static_cast<double>(y) + 2.0;
  }
  const auto e = laplacian_response(g);
  for (Index y = 1; y < 8; ++y) {
    for (Index x = 1; x < 6; ++x) EXPECT_LT(std::abs(e(0, 0, y, x)), 1e-6);
  }
  EXPECT_GT(std::abs(e(0, 0, 0, 0)), 1e-3);
}

TEST(ContrastGate, ConstantGrayGivesRefineBias) {
  auto p = LcaParams<double>::random(small_config(), 8);
  p.gray_weight.setZero();
  p.gray_bias[0] = 0.0;
  p.refine_bias[0] = 0.7;
  const auto t = lca_forward(Tensor4<double>::random(1, 8, 5, 5, 2), p);
  EXPECT_TRUE((t.edges_norm.data() == 0.0).all());
  for (Index i = 0; i < t.contrast_gate.size(); ++i) EXPECT_NEAR(t.contrast_gate.data()[i], sig(0.7), 1e-15);
}

TEST(ContrastGate, NormalizedEdgesSpanUnitInterval) {
  const auto p = LcaParams<double>::random(small_config(), 12);
  const auto t = lca_forward(Tensor4<double>::random(2, 8, 6, 6, 13), p);
  for (Index b = 0; b < 2; ++b) {
    const auto plane = t.edges_norm.slice_batch(b, 1).data();
    EXPECT_EQ(plane.minCoeff(), 0.0);
    EXPECT_LT(plane.maxCoeff(), 1.0);
    EXPECT_GT(plane.maxCoeff(), 1.0 - 1e-5);
    Index at = 0;
    plane.maxCoeff(&at);
    EXPECT_EQ(at, t.edge_argmax[static_cast<std::size_t>(b)]);
  }
}

TEST(Fuse, MatchesLoopOracle) {
  const auto x = Tensor4<double>::random(2, 3, 4, 5, 21);
  const auto gch = Tensor4<double>::random(2, 3, 1, 1, 22, 0.0, 1.0);
  const auto gsp = Tensor4<double>::random(2, 1, 4, 5, 23, 0.0, 1.0);
  const auto gct = Tensor4<double>::random(2, 1, 4, 5, 24, 0.0, 1.0);
  const auto f = fuse(x, gch, gsp, gct);
  for (Index b = 0; b < 2; ++b) {
    for (Index c = 0; c < 3; ++c) {
      for (Index y = 0; y < 4; ++y) {
        for (Index w = 0; w < 5; ++w) {
          EXPECT_NEAR(f(b, c, y, w), x(b, c, y, w) * gch(b, c, 0, 0) * gsp(b, 0, y, w) * gct(b, 0, y, w), 1e-7);
        }
      }
    }
  }
}

TEST(Fuse, UnitGatesAndSuppression) {
  const auto x = Tensor4<double>::random(1, 3, 2, 2, 30);
  const auto ones_ch = Tensor4<double>::constant(1, 3, 1, 1, 1.0);
  const auto ones_px = Tensor4<double>::constant(1, 1, 2, 2, 1.0);
  EXPECT_TRUE((fuse(x, ones_ch, ones_px, ones_px).data() == x.data()).all());
  auto hole = ones_px;
  hole(0, 0, 1, 0) = 0.0;
  const auto f = fuse(x, ones_ch, hole, ones_px);
  for (Index c = 0; c < 3; ++c) EXPECT_EQ(f(0, c, 1, 0), 0.0);
  EXPECT_THROW(fuse(x, ones_px, ones_px, ones_px), ContractError);
}

TEST(Project, FreshParamsGiveZero) {
  const auto p = LcaParams<double>::fresh(small_config(), 2);
  EXPECT_TRUE((project(Tensor4<double>::random(2, 8, 4, 4, 5), p).data() == 0.0).all());
}

TEST(Project, IdentityPathStandardizesAndRectifies) {
  auto p = LcaParams<double>::zeros(small_config(2, 1));
  p.dw_kernel[4] = 1.0;
  p.dw_kernel[9 + 4] = 1.0;
  p.gn_scale.setOnes();
  p.pw_weight.setIdentity();
  Tensor4<double> x(1, 2, 2, 2);
  x.data() << 0.5, -1.0, 2.0, 0.0, 1.5, -0.5, 0.25, 3.0;
  const double mean = x.data().mean();
  const double var = (x.data() - mean).square().mean();
  const auto out = project(x, p);
  for (Index i = 0; i < 8; ++i) {
    EXPECT_NEAR(out.data()[i], std::max(0.0, (x.data()[i] - mean) / std::sqrt(var + 1e-5)), 1e-12);
  }
}

TEST(Project, LinearInPointwiseWeights) {
  const auto p = LcaParams<double>::random(small_config(), 6);
  auto p2 = p;
  p2.pw_weight *= 2.0;
  const auto x = Tensor4<double>::random(1, 8, 4, 4, 7);
  const auto a = project(x, p);
  const auto b = project(x, p2);
  EXPECT_LT((b.data() - 2.0 * a.data()).abs().maxCoeff(), 1e-12);
}

TEST(Project, GroupCountMustDivideChannels) {
  auto p = LcaParams<double>::zeros(small_config());
  p.config.groups = 3;
  EXPECT_THROW(project(Tensor4<double>(1, 8, 2, 2), p), ContractError);
  LcaConfig c = small_config();
  c.reduction = 3;
  EXPECT_THROW(c.check(), ContractError);
}

TEST(LcaForward, ZeroInitIsExact) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = LcaParams<float>::fresh(small_config(), s);
    const auto x = Tensor4<float>::random(2, 8, 6, 6, 50 + s, -4.0f, 4.0f);
    const auto t = lca_forward(x, p);
    EXPECT_TRUE((t.phi.data() == 0.0f).all());
    const auto y = fixed_linear_block<float>(8, s)(x);
    const auto out = gated_residual(y, x, p);
    EXPECT_EQ(std::memcmp(out.data().data(), y.data().data(), sizeof(float) * y.size()), 0);
    const auto id = gated_residual(identity_block<float>()(x), x, p);
    EXPECT_EQ(std::memcmp(id.data().data(), x.data().data(), sizeof(float) * x.size()), 0);
  }
}

TEST(LcaForward, GatesStrictlyInsideUnitInterval) {
  const auto p = LcaParams<double>::random(small_config(), 17);
  const auto t = lca_forward(Tensor4<double>::random(2, 8, 6, 6, 18, -2.0, 2.0), p);
  for (const auto* g : {&t.channel_gate, &t.spatial_gate, &t.contrast_gate}) {
    EXPECT_GT(g->data().minCoeff(), 0.0);
    EXPECT_LT(g->data().maxCoeff(), 1.0);
  }
}

TEST(LcaForward, BatchIndependence) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = LcaParams<float>::random(small_config(), 60 + s);
    const auto a = Tensor4<float>::random(1, 8, 6, 6, 70 + s);
    const auto b = Tensor4<float>::random(1, 8, 6, 6, 80 + s, -6.0f, 6.0f);
    const auto both = lca_forward(Tensor4<float>::concat_batch(a, b), p).phi;
    const auto split = Tensor4<float>::concat_batch(lca_forward(a, p).phi, lca_forward(b, p).phi);
    EXPECT_LE((both.data() - split.data()).abs().maxCoeff(), 1e-7f);
  }
}

TEST(GatedResidual, GateInitAndSaturation) {
  EXPECT_NEAR(sigmoid(LcaParams<double>::fresh(small_config(), 1).gate_scalar()), 0.26894, 1e-4);
  auto p = LcaParams<double>::random(small_config(), 4);
  p.gate[0] = -50.0;
  const auto x = Tensor4<double>::random(1, 8, 4, 4, 5);
  const auto y = fixed_linear_block<double>(8, 1)(x);
  EXPECT_LE((gated_residual(y, x, p).data() - y.data()).abs().maxCoeff(), 1e-9);
  EXPECT_THROW(gated_residual(Tensor4<double>(1, 8, 4, 3), x, p), ContractError);
}

TEST(GatedResidual, GateGradientIsSigmoidSlopeTimesPhiSum) {
  const auto p = LcaParams<double>::random(small_config(), 9);
  const auto x = Tensor4<double>::random(2, 8, 5, 5, 10);
  const auto r = gated_residual_traced(identity_block<double>()(x), x, p);
  const auto ones = Tensor4<double>::constant(2, 8, 5, 5, 1.0);
  const auto g = gated_residual_backward(x, p, r, ones);
  const double s = sig(p.gate[0]);
  const double expected = s * (1.0 - s) * r.lca.phi.data().sum();
  EXPECT_LE(relative_error(g.gate[0], expected), 1e-5);
}

TEST(Losses, HalfProbabilityExample) {
  const auto p = Tensor4<double>::constant(1, 1, 2, 2, 0.5);
  Tensor4<double> m(1, 1, 2, 2);
  m.data() << 1, 1, 0, 0;
  EXPECT_NEAR(bce(p, m), std::numbers::ln2, 1e-12);
  EXPECT_NEAR(dice(p, m), 3.0 / 5.0, 1e-15);
  EXPECT_NEAR(seg_loss(p, m), std::numbers::ln2 + 1.0 - 0.6, 1e-12);
  EXPECT_NEAR(seg_loss_logits(logits_of(p), m), seg_loss(p, m), 1e-12);
}

TEST(Losses, PerfectPredictionAndSymmetry) {
  Tensor4<double> m(1, 1, 3, 3);
  m.data() << 1, 0, 1, 1, 0, 0, 1, 1, 0;
  Tensor4<double> p = m;
  p.data() = m.data() * (1.0 - 2e-7) + 1e-7;
  EXPECT_GE(dice(p, m), 0.999);
  EXPECT_LE(seg_loss(p, m), 0.001 + bce(p, m));
  Tensor4<double> m2(1, 1, 3, 3);
  m2.data() << 0, 0, 1, 1, 1, 0, 0, 1, 0;
  const double s = 1.0;
  const double a = (2.0 * (m.data() * m2.data()).sum() + s) / (m.data().sum() + m2.data().sum() + s);
  const double b = (2.0 * (m2.data() * m.data()).sum() + s) / (m2.data().sum() + m.data().sum() + s);
  EXPECT_EQ(a, b);
}

TEST(Losses, ContractErrors) {
  const auto m = Tensor4<double>::constant(1, 1, 2, 2, 1.0);
  EXPECT_THROW(bce(Tensor4<double>::constant(1, 1, 2, 2, 1.0), m), ContractError);
  EXPECT_THROW(dice(Tensor4<double>::constant(1, 1, 2, 2, 0.0), m), ContractError);
  EXPECT_THROW(dice(Tensor4<double>::constant(1, 1, 2, 2, 0.5), Tensor4<double>::constant(1, 1, 2, 2, 0.5)),
               ContractError);
  EXPECT_THROW(dice(Tensor4<double>::constant(1, 1, 2, 2, 0.5), Tensor4<double>::constant(1, 1, 2, 3, 1.0)),
               ContractError);
  LossWeights w;
  w.supervised = 1.5;
  EXPECT_THROW(w.check(), ContractError);
}

TEST(Losses, ConsistencyExamples) {
  Tensor4<double> a(1, 1, 1, 2), b(1, 1, 1, 2);
  b.data() << 50.0, -50.0;
  EXPECT_NEAR(consistency_loss(a, b), 0.5, 1e-12);
  EXPECT_EQ(consistency_loss(a, b), consistency_loss(b, a));
  EXPECT_EQ(consistency_loss(b, b), 0.0);
  b.data()[0] = 1e-6;
  b.data()[1] = 0.0;
  EXPECT_GT(consistency_loss(a, b), 0.0);
}

TEST(Losses, CombineHandExample) {
  const std::vector<InstanceLoss> k{{0.4, 0.1}, {0.6, 0.3}};
  EXPECT_DOUBLE_EQ(combine_losses(k, {}), 0.52);
  EXPECT_DOUBLE_EQ(combine_losses(k, {.supervised = 0.5, .consistency = 0.0}), 0.5);
  EXPECT_THROW(combine_losses({}, {}), ContractError);
}

std::vector<InstanceStreams<double>> random_instances(std::uint64_t seed, int k) {
  std::vector<InstanceStreams<double>> out;
  for (int i = 0; i < k; ++i) {
    InstanceStreams<double> s{Tensor4<double>::random(1, 1, 4, 4, seed + 3 * i, -3.0, 3.0),
                              Tensor4<double>::random(1, 1, 4, 4, seed + 3 * i + 1, -3.0, 3.0),
                              Tensor4<double>(1, 1, 4, 4)};
    const auto u = Tensor4<double>::random(1, 1, 4, 4, seed + 3 * i + 2, 0.0, 1.0);
    s.mask.data() = (u.data() < 0.5).cast<double>();
    out.push_back(s);
  }
  return out;
}

TEST(TotalLoss, BlendEndpoints) {
  const auto inst = random_instances(40, 3);
  double sup = 0.0, clean_only = 0.0, cons = 0.0;
  for (const auto& k : inst) {
    const double sc = seg_loss_logits(k.clean_logits, k.mask);
    const double sv = seg_loss_logits(k.variant_logits, k.mask);
    sup += 0.5 * sc + 0.5 * sv;
    clean_only += sc;
    cons += consistency_loss(k.clean_logits, k.variant_logits);
  }
  EXPECT_NEAR(total_loss(inst, {.supervised = 0.5, .consistency = 0.0}), sup / 3.0, 1e-12);
  EXPECT_NEAR(total_loss(inst, {.supervised = 1.0, .consistency = 0.0}), clean_only / 3.0, 1e-12);
  EXPECT_NEAR(total_loss(inst, {}), (sup + 0.1 * cons) / 3.0, 1e-12);
  EXPECT_THROW(total_loss(std::vector<InstanceStreams<double>>{}, {}), ContractError);
}

TEST(TotalLoss, LogitGradientsMatchFiniteDifferences) {
  auto inst = random_instances(90, 2);
  const LossWeights w;
  std::vector<LossGrad<double>> g;
  total_loss(inst, w, &g);
  const double h = 1e-6;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    for (Index i = 0; i < inst[k].clean_logits.size(); ++i) {
      for (int stream = 0; stream < 2; ++stream) {
        double& v = stream == 0 ? inst[k].clean_logits.data()[i] : inst[k].variant_logits.data()[i];
        const double saved = v;
        v = saved + h;
        const double up = total_loss(inst, w);
        v = saved - h;
        const double down = total_loss(inst, w);
        v = saved;
        const double analytic = stream == 0 ? g[k].d_clean.data()[i] : g[k].d_variant.data()[i];
        EXPECT_NEAR(analytic, (up - down) / (2 * h), 1e-7);
      }
    }
  }
}

TEST(GradCheck, EveryTrainableTensorOnOneSeed) {
  const auto cfg = small_config();
  const auto p = LcaParams<double>::random(cfg, 77);
  const auto m = AdaptedBlock<double>::with_seed(cfg.channels, 78);
  PairBatch<double> b{Tensor4<double>::random(2, 8, 6, 6, 79), Tensor4<double>::random(2, 8, 6, 6, 80),
                      Tensor4<double>(2, 1, 6, 6)};
  const auto u = Tensor4<double>::random(2, 1, 6, 6, 81, 0.0, 1.0);
  b.masks.data() = (u.data() < 0.5).cast<double>();
  const LossWeights w;
  LcaParams<double> g;
  pair_loss_grad(m, p, b, w, g);
  const auto rep = grad_check([&](const LcaParams<double>& q) { return pair_loss(m, q, b, w); }, p, g, 1e-4, 1e-3,
                              [&](const LcaParams<double>& q) { return branch_signature(m, q, b); });
  EXPECT_EQ(rep.tensors.size(), 15u);
  for (const auto& t : rep.tensors) {
    EXPECT_EQ(t.failures, 0u) << t.tensor << " worst " << t.worst_analytic << " vs " << t.worst_numeric;
  }
}

TEST(ParamCount, SubLayerCounts) {
  const auto p = LcaParams<float>::fresh(small_config(), 1);
  const auto trainable = param_count(p, true);
  EXPECT_EQ(trainable.of("spatial_conv"), 98u);
  EXPECT_EQ(trainable.of("refine_conv"), 10u);
  EXPECT_EQ(trainable.of("laplacian"), 0u);
  const auto all = param_count(p, false);
  EXPECT_EQ(all.of("laplacian"), 9u);
  EXPECT_EQ(all.total, trainable.total + 9);
  bool visited = false;
  LcaParams<float> q = p;
  q.for_each_trainable([&](const char* name, std::span<float>) { visited = visited || std::string(name) == "laplacian"; });
  EXPECT_FALSE(visited);
}

TEST(ParamCount, TwoModulesAtFullWidth) {
  LcaConfig c;
  c.channels = 768;
  c.reduction = 2;
  c.groups = 32;
  const auto n = 2 * param_count(LcaParams<float>::zeros(c), true).total;
  // per module: 2 * 768 * 384 + 384 + 768 (MLP), 98, 768 + 1, 10,
  // 768 * 9 + 768 (DW), 2 * 768 (GN), 768^2 (PW), 1 (gate)
  const std::size_t per = 2 * 768 * 384 + 384 + 768 + 98 + 769 + 10 + 768 * 10 + 2 * 768 + 768 * 768 + 1;
  EXPECT_EQ(n, 2 * per);
  EXPECT_GE(n, 2'300'000u);
  EXPECT_LE(n, 2'500'000u);
}

TEST(Io, JsonRoundTripIsExact) {
  const auto p = LcaParams<float>::random(small_config(), 31);
  const auto dir = lumaforge::testing::scratch_dir("lca_io");
  const auto path = (dir / "w.json").string();
  save_params(p, path);
  const auto q = load_params<float>(path);
  EXPECT_EQ(q.config.channels, 8);
  EXPECT_EQ(q.config.groups, 2);
  std::vector<std::vector<float>> a, b;
  p.for_each_trainable([&](const char*, std::span<const float> s) { a.emplace_back(s.begin(), s.end()); });
  q.for_each_trainable([&](const char*, std::span<const float> s) { b.emplace_back(s.begin(), s.end()); });
  EXPECT_EQ(a, b);
  const auto j = params_to_json(p);
  EXPECT_FALSE(j["tensors"].contains("laplacian"));
  auto broken = j;
  broken["format"] = "other";
  EXPECT_ANY_THROW(params_from_json<float>(broken));
}

}  // namespace
}  // namespace lumaforge::lca
