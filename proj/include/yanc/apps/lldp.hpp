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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "yanc/values.hpp"

namespace yanc::apps {

/// Discovery probes: LLDP frames whose chassis-id and port-id TLVs carry the
/// sender's datapath id (16 hex chars) and port number (decimal), both with
/// the locally-assigned subtype. Frames from other LLDP speakers decode to
/// nothing and are ignored.
struct LldpProbe {
    std::string chassis;  // 16 lowercase hex chars
    uint16_t port = 0;
    uint16_t ttl = 120;

    bool operator==(const LldpProbe&) const = default;
};

std::string encode_lldp(const LldpProbe&, const Mac& src);
std::optional<LldpProbe> decode_lldp(std::string_view frame);

}  // namespace yanc::apps
