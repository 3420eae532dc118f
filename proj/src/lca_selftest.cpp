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
#include "lumaforge/lca/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "lumaforge/lca/gradcheck.hpp"
#include "lumaforge/lca/model.hpp"

namespace lumaforge::lca {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

LcaConfig small_config() {
  LcaConfig c;
  c.channels = 8;
  c.reduction = 2;
  c.groups = 2;
  return c;
}

template <typename Scalar>
bool bit_equal(const Tensor4<Scalar>& a, const Tensor4<Scalar>& b) {
  if (!a.same_shape(b)) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (a.data()[i] != b.data()[i]) return false;
  }
  return true;
}

void add(SelfTestResult& r, std::string name, const std::function<std::string(bool&)>& body) {
  SelfTestCheck c;
  c.name = std::move(name);
  try {
    c.detail = body(c.passed);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  r.checks.push_back(std::move(c));
}

}  // namespace

bool SelfTestResult::ok() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

nlohmann::json SelfTestResult::to_json() const {
  nlohmann::json j;
  j["ok"] = ok();
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(arr);
  return j;
}

SelfTestResult run_selftest() {
  SelfTestResult r;
  const LcaConfig cfg = small_config();

  add(r, "zero_init_phi", [&](bool& ok) {
    ok = true;
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto p = LcaParams<float>::fresh(cfg, s);
      const auto x = Tensor4<float>::random(2, 8, 6, 6, 100 + s, -3.0f, 3.0f);
      const auto phi = lca_forward(x, p).phi;
      ok = ok && (phi.data() == 0.0f).all();
    }
    return std::string("5 random inputs");
  });

  add(r, "zero_init_residual_identity", [&](bool& ok) {
    ok = true;
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto p = LcaParams<float>::fresh(cfg, s);
      const auto x = Tensor4<float>::random(2, 8, 6, 6, 200 + s, -3.0f, 3.0f);
      const auto blk = fixed_linear_block<float>(8, s);
      const auto y = blk(x);
      ok = ok && bit_equal(gated_residual(y, x, p), y) && bit_equal(gated_residual(x, x, p), x);
    }
    return std::string("identity and linear blocks, 5 random inputs");
  });

  add(r, "sigmoid_gate_init=0.26894", [&](bool& ok) {
    const double g = sigmoid(LcaParams<double>::fresh(cfg, 1).gate_scalar());
    ok = std::abs(g - 0.26894) <= 1e-4;
    return fmt("sigmoid(gamma0) = %.6f", g);
  });

  add(r, "spatial_conv_params=98", [&](bool& ok) {
    const auto n = param_count(LcaParams<float>::zeros(cfg), true).of("spatial_conv");
    ok = n == 98;
    return std::to_string(n);
  });

  add(r, "refine_conv_params=10", [&](bool& ok) {
    const auto n = param_count(LcaParams<float>::zeros(cfg), true).of("refine_conv");
    ok = n == 10;
    return std::to_string(n);
  });

  add(r, "laplacian_not_trainable", [&](bool& ok) {
    const auto p = LcaParams<float>::zeros(cfg);
    bool seen = false;
    p.for_each_trainable([&](const char* name, std::span<const float>) {
      if (std::string(name).find("laplacian") != std::string::npos) seen = true;
    });
    const auto all = param_count(p, false);
    ok = !seen && param_count(p, true).of("laplacian") == 0 && all.of("laplacian") == 9;
    return std::string("buffer counted only when trainable_only=false");
  });

  add(r, "two_module_params_c768_r2", [&](bool& ok) {
    LcaConfig big;
    big.channels = 768;
    big.reduction = 2;
    big.groups = 32;
    const auto total = 2 * param_count(LcaParams<float>::zeros(big), true).total;
    ok = total >= 2'300'000 && total <= 2'500'000;
    return std::to_string(total);
  });

  add(r, "laplacian_impulse", [&](bool& ok) {
    Tensor4<double> g(1, 1, 3, 3);
    g(0, 0, 1, 1) = 1.0;
    const auto e = laplacian_response(g);
    ok = e(0, 0, 1, 1) == -4.0 && e(0, 0, 0, 1) == 1.0 && e(0, 0, 2, 1) == 1.0 && e(0, 0, 1, 0) == 1.0 &&
         e(0, 0, 1, 2) == 1.0 && e(0, 0, 0, 0) == 0.0;
    return std::string("center -4, 4-neighbours +1");
  });

  add(r, "laplacian_affine_interior", [&](bool& ok) {
    Tensor4<double> g(1, 1, 9, 11);
    for (Index y = 0; y < 9; ++y) {
      for (Index x = 0; x < 11; ++x) g(0, 0, y, x) = 0.37 * x - 1.3 * y + 2.0;
    }
    const auto e = laplacian_response(g);
    double worst = 0.0;
    for (Index y = 1; y < 8; ++y) {
      for (Index x = 1; x < 10; ++x) worst = std::max(worst, std::abs(e(0, 0, y, x)));
    }
    ok = worst < 1e-6;
    return fmt("max interior |e| = %.3g", worst);
  });

  add(r, "gates_open_interval", [&](bool& ok) {
    ok = true;
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto p = LcaParams<float>::random(cfg, s);
      const auto t = lca_forward(Tensor4<float>::random(2, 8, 6, 6, 300 + s), p);
      for (const auto* g : {&t.channel_gate, &t.spatial_gate, &t.contrast_gate}) {
        ok = ok && (g->data() > 0.0f).all() && (g->data() < 1.0f).all();
      }
      ok = ok && (t.edges_norm.data() >= 0.0f).all() && (t.edges_norm.data() < 1.0f).all();
    }
    return std::string("channel, spatial, contrast gates in (0,1)");
  });

  add(r, "conjunctive_fusion", [&](bool& ok) {
    const auto x = Tensor4<double>::random(1, 4, 3, 3, 7);
    auto gch = Tensor4<double>::constant(1, 4, 1, 1, 0.8);
    auto gsp = Tensor4<double>::constant(1, 1, 3, 3, 0.9);
    auto gct = Tensor4<double>::constant(1, 1, 3, 3, 0.7);
    gsp(0, 0, 1, 2) = 0.0;
    gct(0, 0, 2, 0) = 0.0;
    const auto f = fuse(x, gch, gsp, gct);
    ok = true;
    for (Index c = 0; c < 4; ++c) ok = ok && f(0, c, 1, 2) == 0.0 && f(0, c, 2, 0) == 0.0 && f(0, c, 0, 0) != 0.0;
    return std::string("zeroed gate suppresses every channel");
  });

  add(r, "batch_independence", [&](bool& ok) {
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto p = LcaParams<float>::random(cfg, 40 + s);
      const auto a = Tensor4<float>::random(1, 8, 6, 6, 400 + s);
      const auto b = Tensor4<float>::random(1, 8, 6, 6, 500 + s, -5.0f, 5.0f);
      const auto both = lca_forward(Tensor4<float>::concat_batch(a, b), p).phi;
      const auto joined = Tensor4<float>::concat_batch(lca_forward(a, p).phi, lca_forward(b, p).phi);
      worst = std::max(worst, static_cast<double>((both.data() - joined.data()).abs().maxCoeff()));
    }
    ok = worst <= 1e-7;
    return fmt("max |diff| = %.3g", worst);
  });

  add(r, "gate_saturation", [&](bool& ok) {
    auto p = LcaParams<double>::random(cfg, 9);
    p.gate[0] = -50.0;
    const auto x = Tensor4<double>::random(1, 8, 5, 5, 11);
    const auto y = fixed_linear_block<double>(8, 3)(x);
    const double diff = (gated_residual(y, x, p).data() - y.data()).abs().maxCoeff();
    ok = diff <= 1e-9;
    return fmt("max |diff| = %.3g", diff);
  });

  add(r, "loss_identities", [&](bool& ok) {
    const auto z = Tensor4<double>::random(1, 1, 4, 4, 5, -4.0, 4.0);
    auto z2 = z;
    z2.data()[3] += 0.5;
    const std::vector<InstanceLoss> k = {{0.4, 0.1}, {0.6, 0.3}};
    const double combined = combine_losses(k, LossWeights{0.5, 0.1});
    const std::vector<InstanceLoss> none = {{0.4, 0.1}, {0.6, 0.3}};
    ok = consistency_loss(z, z) == 0.0 && consistency_loss(z, z2) > 0.0 &&
         std::abs(combined - 0.52) < 1e-12 && std::abs(combine_losses(none, LossWeights{0.5, 0.0}) - 0.5) < 1e-12;
    return fmt("K=2 example = %.12f", combined);
  });

  add(r, "gradient_check", [&](bool& ok) {
    double worst = 0.0;
    std::size_t coords = 0;
    ok = true;
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto p = LcaParams<double>::random(cfg, s);
      const auto m = AdaptedBlock<double>::with_seed(cfg.channels, 100 + s);
      PairBatch<double> b{Tensor4<double>::random(2, 8, 6, 6, 7 * s), Tensor4<double>::random(2, 8, 6, 6, 7 * s + 1),
                          Tensor4<double>(2, 1, 6, 6)};
      CounterRng rng(13 * s);
      for (Index i = 0; i < b.masks.size(); ++i) b.masks.data()[i] = rng.uniform() < 0.5 ? 1.0 : 0.0;
      const LossWeights w;
      LcaParams<double> g;
      pair_loss_grad(m, p, b, w, g);
      const auto rep = grad_check([&](const LcaParams<double>& q) { return pair_loss(m, q, b, w); }, p, g, 1e-4,
                                  1e-3, [&](const LcaParams<double>& q) { return branch_signature(m, q, b); });
      ok = ok && rep.ok();
      worst = std::max(worst, rep.max_rel_error());
      for (const auto& t : rep.tensors) coords += t.coordinates;
    }
    return fmt("max relative error %.3g", worst) + " over " + std::to_string(coords) + " coordinates, 5 seeds";
  });

  return r;
}

}  // namespace lumaforge::lca
