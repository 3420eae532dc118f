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
#ifndef LUMAFORGE_LCA_IO_HPP_
#define LUMAFORGE_LCA_IO_HPP_

#include <fstream>
#include <string>

#include "json.hpp"
#include "lumaforge/lca/params.hpp"

namespace lumaforge::lca {

/// Tensor dump: {"format": "lumaforge-lca", "version": 1, "config": {...},
/// "tensors": {name: [flat values in storage order]}}. Matrices are stored
/// column-major (fc1 is hidden x C, fc2 is C x hidden, pw is out x in).
template <typename Scalar>
nlohmann::json params_to_json(const LcaParams<Scalar>& p) {
  nlohmann::json j;
  j["format"] = "lumaforge-lca";
  j["version"] = 1;
  j["config"] = {{"channels", p.config.channels},
                 {"reduction", p.config.reduction},
                 {"groups", p.config.groups},
                 {"epsilon", p.config.epsilon},
                 {"gn_epsilon", p.config.gn_epsilon}};
  nlohmann::json tensors = nlohmann::json::object();
  p.for_each_trainable([&tensors](const char* name, std::span<const Scalar> s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Scalar v : s) arr.push_back(static_cast<double>(v));
    tensors[name] = std::move(arr);
  });
  j["tensors"] = std::move(tensors);
  return j;
}

template <typename Scalar>
LcaParams<Scalar> params_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "lumaforge-lca" || j.value("version", 0) != 1) {
    throw ParameterError("LCA weights: unrecognized format header");
  }
  LcaConfig c;
  const auto& jc = j.at("config");
  c.channels = jc.at("channels").get<Index>();
  c.reduction = jc.at("reduction").get<Index>();
  c.groups = jc.at("groups").get<Index>();
  c.epsilon = jc.at("epsilon").get<double>();
  c.gn_epsilon = jc.at("gn_epsilon").get<double>();
  LcaParams<Scalar> p = LcaParams<Scalar>::zeros(c);
  const auto& tensors = j.at("tensors");
  p.for_each_trainable([&tensors](const char* name, std::span<Scalar> s) {
    if (!tensors.contains(name)) throw ParameterError(std::string("LCA weights: missing tensor ") + name);
    const auto& arr = tensors.at(name);
    if (!arr.is_array() || arr.size() != s.size()) {
      throw ParameterError(std::string("LCA weights: tensor ") + name + " has " + std::to_string(arr.size()) +
                           " values, expected " + std::to_string(s.size()));
    }
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<Scalar>(arr[i].get<double>());
  });
  return p;
}

template <typename Scalar>
void save_params(const LcaParams<Scalar>& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << params_to_json(p).dump(1) << '\n';
}

template <typename Scalar>
LcaParams<Scalar> load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return params_from_json<Scalar>(nlohmann::json::parse(in));
}

}  // namespace lumaforge::lca

#endif  // LUMAFORGE_LCA_IO_HPP_
