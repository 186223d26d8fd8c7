/*
 * Copyright 2026 The yanc authors
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

#pragma once

#include "yanc/ofp/codec.hpp"
#include "yanc/schema/fields.hpp"

namespace yanc::ofp {

/// Absent field => wildcard bit set; a /L prefix becomes a 32-L mask-length
/// subfield. Output is canonical.
OfMatch match_from_schema(const schema::FlowMatch&);

/// Inverse on canonical matches (a /0 prefix and an absent field both map to
/// the fully wildcarded wire form, which reads back as absent).
schema::FlowMatch match_to_schema(const OfMatch&);

std::vector<Action> actions_from_schema(const std::vector<schema::FlowAction>&);

}  // namespace yanc::ofp
