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
#ifndef LUMAFORGE_SERIALIZATION_HPP_
#define LUMAFORGE_SERIALIZATION_HPP_

#include "json.hpp"

#include "lumaforge/lightops.hpp"
#include "lumaforge/sampler.hpp"
#include "lumaforge/severity_config.hpp"

namespace lumaforge {

using nlohmann::json;

/// {"op": "<kind>", <param>: <value>, ...}
json op_to_json(const OpParams& params);
OpParams op_from_json(const json& j);

json recipe_to_json(const VariantRecipe& recipe);
VariantRecipe recipe_from_json(const json& j);

json config_to_json(const SeverityConfig& config);
SeverityConfig config_from_json(const json& j);

}  // namespace lumaforge

#endif  // LUMAFORGE_SERIALIZATION_HPP_
