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
#ifndef LUMAFORGE_LCA_MODULE_HPP_
#define LUMAFORGE_LCA_MODULE_HPP_

#include <functional>
#include <vector>

#include "lumaforge/lca/params.hpp"
#include "lumaforge/lca/tensor.hpp"

namespace lumaforge::lca {
namespace detail {

// Zero-padded, size-preserving cross-correlation of one H x W plane with a
// k x k kernel; accumulates into `out`.
template <typename Scalar, typename Kernel>
void correlate(const Scalar* in, Index h, Index w, const Kernel* kernel, int k, Scalar* out) {
  const int pad = k / 2;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      Scalar acc = 0;
      for (int ky = 0; ky < k; ++ky) {
        const Index sy = y + ky - pad;
        if (sy < 0 || sy >= h) continue;
        for (int kx = 0; kx < k; ++kx) {
          const Index sx = x + kx - pad;
          if (sx < 0 || sx >= w) continue;
          acc += static_cast<Scalar>(kernel[ky * k + kx]) * in[sy * w + sx];
        }
      }
      out[y * w + x] += acc;
    }
  }
}

// Adjoint of correlate with respect to its input.
template <typename Scalar, typename Kernel>
void correlate_adjoint(const Scalar* dout, Index h, Index w, const Kernel* kernel, int k, Scalar* din) {
  const int pad = k / 2;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const Scalar g = dout[y * w + x];
      if (g == Scalar(0)) continue;
      for (int ky = 0; ky < k; ++ky) {
        const Index sy = y + ky - pad;
        if (sy < 0 || sy >= h) continue;
        for (int kx = 0; kx < k; ++kx) {
          const Index sx = x + kx - pad;
          if (sx < 0 || sx >= w) continue;
          din[sy * w + sx] += static_cast<Scalar>(kernel[ky * k + kx]) * g;
        }
      }
    }
  }
}

// Gradient of correlate with respect to its kernel.
template <typename Scalar>
void correlate_kernel_grad(const Scalar* dout, const Scalar* in, Index h, Index w, int k, Scalar* dkernel) {
  const int pad = k / 2;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const Scalar g = dout[y * w + x];
      for (int ky = 0; ky < k; ++ky) {
        const Index sy = y + ky - pad;
        if (sy < 0 || sy >= h) continue;
        for (int kx = 0; kx < k; ++kx) {
          const Index sx = x + kx - pad;
          if (sx < 0 || sx >= w) continue;
          dkernel[ky * k + kx] += g * in[sy * w + sx];
        }
      }
    }
  }
}

template <typename Scalar>
Scalar* plane_ptr(Tensor4<Scalar>& t, Index b, Index c) {
  return t.data().data() + (b * t.channels() + c) * t.plane();
}

template <typename Scalar>
const Scalar* plane_ptr(const Tensor4<Scalar>& t, Index b, Index c) {
  return t.data().data() + (b * t.channels() + c) * t.plane();
}

}  // namespace detail

/// Intermediates of one forward pass, kept for inspection and backward.
template <typename Scalar>
struct LcaTrace {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  // channel gate: pooled statistics and MLP pre-activations, one column per sample
  Matrix pooled_avg, pooled_max;
  Matrix hidden_avg, hidden_max;
  Tensor4<Scalar> channel_gate;  // (B, C, 1, 1)

  Tensor4<Scalar> spatial_input;  // (B, 2, H, W): channel mean and max
  Tensor4<Scalar> spatial_gate;   // (B, 1, H, W)

  Tensor4<Scalar> gray;        // (B, 1, H, W)
  Tensor4<Scalar> edges;       // Laplacian response
  Tensor4<Scalar> edges_norm;  // per-sample min-max normalized, in [0, 1)
  std::vector<Index> edge_argmin, edge_argmax;
  std::vector<Scalar> edge_range;  // max - min + eps per sample
  Tensor4<Scalar> contrast_gate;   // (B, 1, H, W)

  Tensor4<Scalar> attended;    // x * all gates
  Tensor4<Scalar> depthwise;   // DW(attended)
  Tensor4<Scalar> normalized;  // GroupNorm standardized, before affine
  Tensor4<Scalar> activated;   // ReLU(GN(depthwise))
  std::vector<Scalar> gn_rstd;  // per (sample, group)
  Tensor4<Scalar> phi;
};

template <typename Scalar>
void check_input(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p) {
  p.config.check();
  if (x.channels() != p.config.channels) {
    throw ContractError("LCA: input has " + std::to_string(x.channels()) + " channels, params expect " +
                        std::to_string(p.config.channels));
  }
  if (x.height() < 1 || x.width() < 1 || x.batch() < 1) throw ContractError("LCA: empty input " + x.shape_string());
}

template <typename Scalar>
void channel_gate_forward(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p, LcaTrace<Scalar>& t) {
  const Index B = x.batch(), C = x.channels();
  t.pooled_avg.resize(C, B);
  t.pooled_max.resize(C, B);
  for (Index b = 0; b < B; ++b) {
    const auto s = x.sample(b);
    t.pooled_avg.col(b) = s.rowwise().mean().transpose();
    t.pooled_max.col(b) = s.rowwise().maxCoeff().transpose();
  }
  t.hidden_avg = p.mlp_w1 * t.pooled_avg;
  t.hidden_avg.colwise() += p.mlp_b1;
  t.hidden_max = p.mlp_w1 * t.pooled_max;
  t.hidden_max.colwise() += p.mlp_b1;
  const auto relu = [](Scalar v) { return v > Scalar(0) ? v : Scalar(0); };
  typename LcaTrace<Scalar>::Matrix z = p.mlp_w2 * (t.hidden_avg.unaryExpr(relu) + t.hidden_max.unaryExpr(relu));
  z.colwise() += Scalar(2) * p.mlp_b2;
  t.channel_gate = Tensor4<Scalar>(B, C, 1, 1);
  for (Index b = 0; b < B; ++b) {
    for (Index c = 0; c < C; ++c) t.channel_gate(b, c, 0, 0) = sigmoid(z(c, b));
  }
}

template <typename Scalar>
void spatial_gate_forward(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p, LcaTrace<Scalar>& t) {
  const Index B = x.batch(), H = x.height(), W = x.width();
  t.spatial_input = Tensor4<Scalar>(B, 2, H, W);
  t.spatial_gate = Tensor4<Scalar>(B, 1, H, W);
  for (Index b = 0; b < B; ++b) {
    const auto s = x.sample(b);
    Eigen::Map<Eigen::Matrix<Scalar, 1, Eigen::Dynamic>> mean(detail::plane_ptr(t.spatial_input, b, 0), H * W);
    Eigen::Map<Eigen::Matrix<Scalar, 1, Eigen::Dynamic>> max(detail::plane_ptr(t.spatial_input, b, 1), H * W);
    mean = s.colwise().mean();
    max = s.colwise().maxCoeff();
    Scalar* a = detail::plane_ptr(t.spatial_gate, b, 0);
    for (Index ch = 0; ch < 2; ++ch) {
      detail::correlate(detail::plane_ptr(t.spatial_input, b, ch), H, W,
                        p.spatial_kernel.data() + ch * kSpatialKernel * kSpatialKernel, kSpatialKernel, a);
    }
  }
  t.spatial_gate.data() = t.spatial_gate.data().unaryExpr([](Scalar v) { return sigmoid(v); });
}

/// Fixed-Laplacian response of a (B, 1, H, W) map with zero padding.
template <typename Scalar>
Tensor4<Scalar> laplacian_response(const Tensor4<Scalar>& g) {
  if (g.channels() != 1) throw ContractError("laplacian_response expects a single-channel map");
  Tensor4<Scalar> e(g.batch(), 1, g.height(), g.width());
  for (Index b = 0; b < g.batch(); ++b) {
    detail::correlate(detail::plane_ptr(g, b, 0), g.height(), g.width(), kLaplacian.data(), 3,
                      detail::plane_ptr(e, b, 0));
  }
  return e;
}

template <typename Scalar>
void contrast_gate_forward(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p, LcaTrace<Scalar>& t) {
  const Index B = x.batch(), H = x.height(), W = x.width();
  t.gray = Tensor4<Scalar>(B, 1, H, W);
  for (Index b = 0; b < B; ++b) {
    Eigen::Map<Eigen::Matrix<Scalar, 1, Eigen::Dynamic>> g(detail::plane_ptr(t.gray, b, 0), H * W);
    g = p.gray_weight.transpose() * x.sample(b);
    g.array() += p.gray_bias[0];
  }
  t.edges = laplacian_response(t.gray);
  t.edges_norm = Tensor4<Scalar>(B, 1, H, W);
  t.edge_argmin.assign(static_cast<std::size_t>(B), 0);
  t.edge_argmax.assign(static_cast<std::size_t>(B), 0);
  t.edge_range.assign(static_cast<std::size_t>(B), Scalar(0));
  const Scalar eps = static_cast<Scalar>(p.config.epsilon);
  t.contrast_gate = Tensor4<Scalar>(B, 1, H, W);
  for (Index b = 0; b < B; ++b) {
    Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> e(detail::plane_ptr(t.edges, b, 0), H * W);
    Index imin = 0, imax = 0;
    const Scalar mn = e.minCoeff(&imin);
    const Scalar mx = e.maxCoeff(&imax);
    const Scalar range = mx - mn + eps;
    t.edge_argmin[static_cast<std::size_t>(b)] = imin;
    t.edge_argmax[static_cast<std::size_t>(b)] = imax;
    t.edge_range[static_cast<std::size_t>(b)] = range;
    Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>> en(detail::plane_ptr(t.edges_norm, b, 0), H * W);
    en = (e - mn) / range;
    Scalar* r = detail::plane_ptr(t.contrast_gate, b, 0);
    detail::correlate(en.data(), H, W, p.refine_kernel.data(), kRefineKernel, r);
    for (Index i = 0; i < H * W; ++i) r[i] = sigmoid(r[i] + p.refine_bias[0]);
  }
}

/// x * g_ch * g_sp * g_ct with broadcasting over (B,C,1,1) and (B,1,H,W).
template <typename Scalar>
Tensor4<Scalar> fuse(const Tensor4<Scalar>& x, const Tensor4<Scalar>& g_ch, const Tensor4<Scalar>& g_sp,
                     const Tensor4<Scalar>& g_ct) {
  const Index B = x.batch(), C = x.channels(), H = x.height(), W = x.width();
  const auto expect = [](const Tensor4<Scalar>& t, Index b, Index c, Index h, Index w, const char* what) {
    if (t.batch() != b || t.channels() != c || t.height() != h || t.width() != w) {
      throw ContractError(std::string("fuse: ") + what + " gate has shape " + t.shape_string());
    }
  };
  expect(g_ch, B, C, 1, 1, "channel");
  expect(g_sp, B, 1, H, W, "spatial");
  expect(g_ct, B, 1, H, W, "contrast");
  Tensor4<Scalar> out(B, C, H, W);
  for (Index b = 0; b < B; ++b) {
    Eigen::Map<const Eigen::Array<Scalar, 1, Eigen::Dynamic>> sp(detail::plane_ptr(g_sp, b, 0), H * W);
    Eigen::Map<const Eigen::Array<Scalar, 1, Eigen::Dynamic>> ct(detail::plane_ptr(g_ct, b, 0), H * W);
    const Eigen::Array<Scalar, 1, Eigen::Dynamic> local = sp * ct;
    auto ob = out.sample(b);
    const auto xb = x.sample(b);
    for (Index c = 0; c < C; ++c) ob.row(c).array() = xb.row(c).array() * g_ch(b, c, 0, 0) * local;
  }
  return out;
}

template <typename Scalar>
void project_forward(const Tensor4<Scalar>& attended, const LcaParams<Scalar>& p, LcaTrace<Scalar>& t) {
  const Index B = attended.batch(), C = attended.channels(), H = attended.height(), W = attended.width();
  if (C != p.config.channels) throw ContractError("project: channel mismatch");
  if (C % p.config.groups != 0) throw ContractError("project: channels not divisible by GroupNorm groups");
  const Index G = p.config.groups;
  const Index per_group = C / G;
  t.depthwise = Tensor4<Scalar>(B, C, H, W);
  for (Index b = 0; b < B; ++b) {
    for (Index c = 0; c < C; ++c) {
      Scalar* h = detail::plane_ptr(t.depthwise, b, c);
      detail::correlate(detail::plane_ptr(attended, b, c), H, W, p.dw_kernel.data() + c * 9, kDepthwiseKernel, h);
      for (Index i = 0; i < H * W; ++i) h[i] += p.dw_bias[c];
    }
  }
  t.normalized = Tensor4<Scalar>(B, C, H, W);
  t.activated = Tensor4<Scalar>(B, C, H, W);
  t.gn_rstd.assign(static_cast<std::size_t>(B * G), Scalar(0));
  const Index n = per_group * H * W;
  for (Index b = 0; b < B; ++b) {
    for (Index g = 0; g < G; ++g) {
      const Index off = (b * C + g * per_group) * H * W;
      Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> h(t.depthwise.data().data() + off, n);
      const Scalar mean = h.mean();
      const Scalar var = (h - mean).square().mean();
      const Scalar rstd = Scalar(1) / std::sqrt(var + static_cast<Scalar>(p.config.gn_epsilon));
      t.gn_rstd[static_cast<std::size_t>(b * G + g)] = rstd;
      Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>> nh(t.normalized.data().data() + off, n);
      nh = (h - mean) * rstd;
      for (Index cc = 0; cc < per_group; ++cc) {
        const Index c = g * per_group + cc;
        const auto nrm = t.normalized.sample(b);
        auto act = t.activated.sample(b);
        act.row(c).array() = (nrm.row(c).array() * p.gn_scale[c] + p.gn_shift[c]).cwiseMax(Scalar(0));
      }
    }
  }
  t.phi = Tensor4<Scalar>(B, C, H, W);
  for (Index b = 0; b < B; ++b) t.phi.sample(b).noalias() = p.pw_weight * t.activated.sample(b);
}

template <typename Scalar>
Tensor4<Scalar> channel_gate(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p) {
  check_input(x, p);
  LcaTrace<Scalar> t;
  channel_gate_forward(x, p, t);
  return t.channel_gate;
}

template <typename Scalar>
Tensor4<Scalar> spatial_gate(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p) {
  check_input(x, p);
  LcaTrace<Scalar> t;
  spatial_gate_forward(x, p, t);
  return t.spatial_gate;
}

template <typename Scalar>
Tensor4<Scalar> contrast_gate(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p) {
  check_input(x, p);
  LcaTrace<Scalar> t;
  contrast_gate_forward(x, p, t);
  return t.contrast_gate;
}

/// PW(ReLU(GN(DW(x_att)))).
template <typename Scalar>
Tensor4<Scalar> project(const Tensor4<Scalar>& attended, const LcaParams<Scalar>& p) {
  p.config.check();
  LcaTrace<Scalar> t;
  project_forward(attended, p, t);
  return t.phi;
}

/// Full adapter forward: three gates, multiplicative fusion, projection.
template <typename Scalar>
LcaTrace<Scalar> lca_forward(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p) {
  check_input(x, p);
  LcaTrace<Scalar> t;
  channel_gate_forward(x, p, t);
  spatial_gate_forward(x, p, t);
  contrast_gate_forward(x, p, t);
  t.attended = fuse(x, t.channel_gate, t.spatial_gate, t.contrast_gate);
  project_forward(t.attended, p, t);
  return t;
}

/// Parameter gradients of <dphi, phi(x)>. The gate entry is left at zero.
template <typename Scalar>
LcaParams<Scalar> lca_backward(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p, const LcaTrace<Scalar>& t,
                               const Tensor4<Scalar>& dphi) {
  using Matrix = typename LcaTrace<Scalar>::Matrix;
  require_same_shape(dphi, t.phi, "lca_backward");
  const Index B = x.batch(), C = x.channels(), H = x.height(), W = x.width(), HW = H * W;
  const Index G = p.config.groups;
  const Index per_group = C / G;
  LcaParams<Scalar> grad = LcaParams<Scalar>::zeros(p.config);

  // Pointwise projection.
  Tensor4<Scalar> d_act(B, C, H, W);
  for (Index b = 0; b < B; ++b) {
    grad.pw_weight.noalias() += dphi.sample(b) * t.activated.sample(b).transpose();
    d_act.sample(b).noalias() = p.pw_weight.transpose() * dphi.sample(b);
  }

  // ReLU, GroupNorm affine and standardization.
  Tensor4<Scalar> d_dw(B, C, H, W);
  const Index n = per_group * HW;
  for (Index b = 0; b < B; ++b) {
    for (Index g = 0; g < G; ++g) {
      Eigen::Array<Scalar, Eigen::Dynamic, 1> d_norm(n);
      const auto nrm_b = t.normalized.sample(b);
      const auto act_b = t.activated.sample(b);
      const auto dact_b = d_act.sample(b);
      for (Index cc = 0; cc < per_group; ++cc) {
        const Index c = g * per_group + cc;
        const Eigen::Array<Scalar, 1, Eigen::Dynamic> dy =
            (act_b.row(c).array() > Scalar(0)).select(dact_b.row(c).array(), Scalar(0));
        grad.gn_scale[c] += (dy * nrm_b.row(c).array()).sum();
        grad.gn_shift[c] += dy.sum();
        d_norm.segment(cc * HW, HW) = (dy * p.gn_scale[c]).transpose();
      }
      const Index off = (b * C + g * per_group) * HW;
      Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> nrm(t.normalized.data().data() + off, n);
      const Scalar rstd = t.gn_rstd[static_cast<std::size_t>(b * G + g)];
      Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>> dh(d_dw.data().data() + off, n);
      dh = rstd * (d_norm - d_norm.mean() - nrm * (d_norm * nrm).mean());
    }
  }

  // Depthwise convolution.
  Tensor4<Scalar> d_att(B, C, H, W);
  for (Index b = 0; b < B; ++b) {
    for (Index c = 0; c < C; ++c) {
      const Scalar* dh = detail::plane_ptr(d_dw, b, c);
      detail::correlate_kernel_grad(dh, detail::plane_ptr(t.attended, b, c), H, W, kDepthwiseKernel,
                                    grad.dw_kernel.data() + c * 9);
      grad.dw_bias[c] += Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>(dh, HW).sum();
      detail::correlate_adjoint(dh, H, W, p.dw_kernel.data() + c * 9, kDepthwiseKernel, detail::plane_ptr(d_att, b, c));
    }
  }

  // Fusion -> per-gate gradients.
  Matrix d_gch(C, B);
  Tensor4<Scalar> d_gsp(B, 1, H, W);
  Tensor4<Scalar> d_gct(B, 1, H, W);
  for (Index b = 0; b < B; ++b) {
    Eigen::Map<const Eigen::Array<Scalar, 1, Eigen::Dynamic>> sp(detail::plane_ptr(t.spatial_gate, b, 0), HW);
    Eigen::Map<const Eigen::Array<Scalar, 1, Eigen::Dynamic>> ct(detail::plane_ptr(t.contrast_gate, b, 0), HW);
    Eigen::Map<Eigen::Array<Scalar, 1, Eigen::Dynamic>> dsp(detail::plane_ptr(d_gsp, b, 0), HW);
    Eigen::Map<Eigen::Array<Scalar, 1, Eigen::Dynamic>> dct(detail::plane_ptr(d_gct, b, 0), HW);
    const auto datt_b = d_att.sample(b);
    const auto x_b = x.sample(b);
    for (Index c = 0; c < C; ++c) {
      const Eigen::Array<Scalar, 1, Eigen::Dynamic> gx = datt_b.row(c).array() * x_b.row(c).array();
      const Scalar gch = t.channel_gate(b, c, 0, 0);
      d_gch(c, b) = (gx * sp * ct).sum();
      dsp += gx * gch * ct;
      dct += gx * gch * sp;
    }
  }

  // Channel gate: shared MLP on both pooled statistics.
  {
    Matrix dz(C, B);
    for (Index b = 0; b < B; ++b) {
      for (Index c = 0; c < C; ++c) {
        const Scalar g = t.channel_gate(b, c, 0, 0);
        dz(c, b) = d_gch(c, b) * g * (Scalar(1) - g);
      }
    }
    const auto relu = [](Scalar v) { return v > Scalar(0) ? v : Scalar(0); };
    const auto step = [](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(0); };
    for (const auto* path : {&t.hidden_avg, &t.hidden_max}) {
      const Matrix& pooled = path == &t.hidden_avg ? t.pooled_avg : t.pooled_max;
      grad.mlp_w2.noalias() += dz * path->unaryExpr(relu).transpose();
      grad.mlp_b2 += dz.rowwise().sum();
      const Matrix dh = ((p.mlp_w2.transpose() * dz).array() * path->unaryExpr(step).array()).matrix();
      grad.mlp_w1.noalias() += dh * pooled.transpose();
      grad.mlp_b1 += dh.rowwise().sum();
    }
  }

  // Spatial gate.
  for (Index b = 0; b < B; ++b) {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> da(HW);
    const Scalar* gsp = detail::plane_ptr(t.spatial_gate, b, 0);
    const Scalar* dsp = detail::plane_ptr(d_gsp, b, 0);
    for (Index i = 0; i < HW; ++i) da[i] = dsp[i] * gsp[i] * (Scalar(1) - gsp[i]);
    for (Index ch = 0; ch < 2; ++ch) {
      detail::correlate_kernel_grad(da.data(), detail::plane_ptr(t.spatial_input, b, ch), H, W, kSpatialKernel,
                                    grad.spatial_kernel.data() + ch * kSpatialKernel * kSpatialKernel);
    }
  }

  // Contrast gate: refine conv, min-max normalization, Laplacian, projection.
  for (Index b = 0; b < B; ++b) {
    const auto sb = static_cast<std::size_t>(b);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> dr(HW);
    const Scalar* gct = detail::plane_ptr(t.contrast_gate, b, 0);
    const Scalar* dct = detail::plane_ptr(d_gct, b, 0);
    for (Index i = 0; i < HW; ++i) dr[i] = dct[i] * gct[i] * (Scalar(1) - gct[i]);
    const Scalar* en = detail::plane_ptr(t.edges_norm, b, 0);
    detail::correlate_kernel_grad(dr.data(), en, H, W, kRefineKernel, grad.refine_kernel.data());
    grad.refine_bias[0] += dr.sum();

    Eigen::Array<Scalar, Eigen::Dynamic, 1> den = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(HW);
    detail::correlate_adjoint(dr.data(), H, W, p.refine_kernel.data(), kRefineKernel, den.data());

    Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> en_v(en, HW);
    const Scalar range = t.edge_range[sb];
    // en = (e - min) / (max - min + eps)
    Eigen::Array<Scalar, Eigen::Dynamic, 1> de = den / range;
    const Scalar s_den = den.sum();
    const Scalar s_den_en = (den * en_v).sum();
    de[t.edge_argmin[sb]] += (-s_den + s_den_en) / range;
    de[t.edge_argmax[sb]] += -s_den_en / range;

    Eigen::Array<Scalar, Eigen::Dynamic, 1> dg = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(HW);
    detail::correlate_adjoint(de.data(), H, W, kLaplacian.data(), 3, dg.data());
    grad.gray_weight.noalias() += x.sample(b) * dg.matrix();
    grad.gray_bias[0] += dg.sum();
  }
  return grad;
}

/// Frozen host block; the reference ships an identity and a fixed linear mix.
template <typename Scalar>
using Block = std::function<Tensor4<Scalar>(const Tensor4<Scalar>&)>;

template <typename Scalar>
Block<Scalar> identity_block() {
  return [](const Tensor4<Scalar>& x) { return x; };
}

/// Per-pixel channel mix with M = I + 0.1 R, R uniform in [-1, 1).
template <typename Scalar>
Block<Scalar> fixed_linear_block(Index channels, std::uint64_t seed) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix m = Matrix::Identity(channels, channels);
  CounterRng rng(seed);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] += static_cast<Scalar>(0.1 * rng.uniform(-1.0, 1.0));
  return [m](const Tensor4<Scalar>& x) {
    if (x.channels() != m.cols()) throw ContractError("fixed_linear_block: channel mismatch");
    Tensor4<Scalar> y(x.batch(), x.channels(), x.height(), x.width());
    for (Index b = 0; b < x.batch(); ++b) y.sample(b).noalias() = m * x.sample(b);
    return y;
  };
}

template <typename Scalar>
struct ResidualTrace {
  LcaTrace<Scalar> lca;
  Scalar gate_value = 0;  // sigmoid(gamma)
  Tensor4<Scalar> output;
};

/// block_out + sigmoid(gamma) * phi(x); phi sees the block input, not its output.
template <typename Scalar>
ResidualTrace<Scalar> gated_residual_traced(const Tensor4<Scalar>& block_out, const Tensor4<Scalar>& x,
                                            const LcaParams<Scalar>& p) {
  ResidualTrace<Scalar> r;
  r.lca = lca_forward(x, p);
  require_same_shape(block_out, r.lca.phi, "gated_residual");
  r.gate_value = sigmoid(p.gate_scalar());
  r.output = block_out;
  r.output.data() += r.gate_value * r.lca.phi.data();
  return r;
}

template <typename Scalar>
Tensor4<Scalar> gated_residual(const Tensor4<Scalar>& block_out, const Tensor4<Scalar>& x,
                               const LcaParams<Scalar>& p) {
  return gated_residual_traced(block_out, x, p).output;
}

/// Parameter gradients of <dout, gated_residual(...)>, including the gate.
template <typename Scalar>
LcaParams<Scalar> gated_residual_backward(const Tensor4<Scalar>& x, const LcaParams<Scalar>& p,
                                          const ResidualTrace<Scalar>& r, const Tensor4<Scalar>& dout) {
  require_same_shape(dout, r.output, "gated_residual_backward");
  Tensor4<Scalar> dphi = dout;
  dphi.data() *= r.gate_value;
  LcaParams<Scalar> grad = lca_backward(x, p, r.lca, dphi);
  grad.gate[0] = r.gate_value * (Scalar(1) - r.gate_value) * (dout.data() * r.lca.phi.data()).sum();
  return grad;
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_MODULE_HPP_
