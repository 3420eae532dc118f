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
#ifndef LUMAFORGE_LCA_TENSOR_HPP_
#define LUMAFORGE_LCA_TENSOR_HPP_

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "lumaforge/errors.hpp"
#include "lumaforge/rng.hpp"

namespace lumaforge::lca {

using Index = Eigen::Index;

/// Dense (B, C, H, W) tensor, row-major with W fastest.
template <typename Scalar>
class Tensor4 {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using PlaneMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tensor4() = default;
  Tensor4(Index b, Index c, Index h, Index w) : b_(b), c_(c), h_(h), w_(w), data_(Array::Zero(b * c * h * w)) {
    if (b < 0 || c < 0 || h < 0 || w < 0) throw ContractError("Tensor4: negative dimension");
  }

  static Tensor4 constant(Index b, Index c, Index h, Index w, Scalar v) {
    Tensor4 t(b, c, h, w);
    t.data_.setConstant(v);
    return t;
  }

  /// Uniform samples in [lo, hi) from a counter-based stream.
  static Tensor4 random(Index b, Index c, Index h, Index w, std::uint64_t seed, Scalar lo = -1, Scalar hi = 1) {
    Tensor4 t(b, c, h, w);
    CounterRng rng(seed);
    for (Index i = 0; i < t.size(); ++i) t.data_[i] = static_cast<Scalar>(rng.uniform(lo, hi));
    return t;
  }

  Index batch() const { return b_; }
  Index channels() const { return c_; }
  Index height() const { return h_; }
  Index width() const { return w_; }
  Index plane() const { return h_ * w_; }
  Index size() const { return data_.size(); }

  Scalar& operator()(Index b, Index c, Index y, Index x) { return data_[((b * c_ + c) * h_ + y) * w_ + x]; }
  Scalar operator()(Index b, Index c, Index y, Index x) const { return data_[((b * c_ + c) * h_ + y) * w_ + x]; }

  Array& data() { return data_; }
  const Array& data() const { return data_; }

  /// Sample b viewed as a C x (H*W) matrix.
  Eigen::Map<PlaneMatrix> sample(Index b) { return {data_.data() + b * c_ * plane(), c_, plane()}; }
  Eigen::Map<const PlaneMatrix> sample(Index b) const { return {data_.data() + b * c_ * plane(), c_, plane()}; }

  bool same_shape(const Tensor4& o) const { return b_ == o.b_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_; }

  std::string shape_string() const {
    return "(" + std::to_string(b_) + "," + std::to_string(c_) + "," + std::to_string(h_) + "," +
           std::to_string(w_) + ")";
  }

  Tensor4 slice_batch(Index first, Index count) const {
    if (first < 0 || count < 0 || first + count > b_) throw ContractError("Tensor4: batch slice out of range");
    Tensor4 out(count, c_, h_, w_);
    out.data_ = data_.segment(first * c_ * plane(), count * c_ * plane());
    return out;
  }

  static Tensor4 concat_batch(const Tensor4& a, const Tensor4& b) {
    if (a.c_ != b.c_ || a.h_ != b.h_ || a.w_ != b.w_) throw ContractError("Tensor4: concat shape mismatch");
    Tensor4 out(a.b_ + b.b_, a.c_, a.h_, a.w_);
    out.data_ << a.data_, b.data_;
    return out;
  }

  template <typename Other>
  Tensor4<Other> cast() const {
    Tensor4<Other> out(b_, c_, h_, w_);
    out.data() = data_.template cast<Other>();
    return out;
  }

 private:
  Index b_ = 0;
  Index c_ = 0;
  Index h_ = 0;
  Index w_ = 0;
  Array data_;
};

template <typename Scalar>
void require_same_shape(const Tensor4<Scalar>& a, const Tensor4<Scalar>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ContractError(std::string(what) + ": shape " + a.shape_string() + " vs " + b.shape_string());
  }
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_TENSOR_HPP_
