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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yanc/errors.hpp"
#include "yanc/values.hpp"

namespace yanc::schema {

// Flow entries are directories of small text files. Every match field is a
// separate optional file; an absent file means that field is wildcarded.

constexpr uint16_t kDefaultPriority = 32768;
constexpr uint16_t kVlanUntagged = 0xffff;  // "65535" matches untagged frames

/// Schema-side 12-tuple. std::nullopt == wildcard.
struct FlowMatch {
    std::optional<uint16_t> in_port;
    std::optional<Mac> dl_src;
    std::optional<Mac> dl_dst;
    std::optional<uint16_t> dl_vlan;
    std::optional<uint8_t> dl_vlan_pcp;
    std::optional<uint16_t> dl_type;
    std::optional<uint8_t> nw_tos;
    std::optional<uint8_t> nw_proto;
    std::optional<Cidr> nw_src;
    std::optional<Cidr> nw_dst;
    std::optional<uint16_t> tp_src;
    std::optional<uint16_t> tp_dst;

    bool operator==(const FlowMatch&) const = default;
};

struct FlowAction {
    enum class Kind { output, set_dl_src, set_dl_dst };

    uint32_t index = 0;
    Kind kind = Kind::output;
    uint16_t port = 0;  // output; symbolic ports use the reserved wire numbers
    Mac mac{};          // set_dl_*

    bool operator==(const FlowAction&) const = default;
};

/// A committed flow: the exact field set present at the instant of the
/// version bump. Drivers act on images, never on staged files.
struct FlowImage {
    FlowMatch match;
    uint16_t priority = kDefaultPriority;
    uint16_t idle_timeout = 0;
    uint16_t hard_timeout = 0;
    std::vector<FlowAction> actions;  // sorted by index
    uint64_t version = 0;

    bool operator==(const FlowImage&) const = default;
};

bool is_match_field(std::string_view file_name);  // "match.*" names

/// Validates one flow-file value. `file_name` is the name inside the flow
/// directory ("match.nw_src", "priority", "action.0.output", ...).
Status validate_flow_file(std::string_view file_name, std::string_view value);

/// Assembles an image from a flow directory's staged files (sans version).
/// Performs whole-set validation: every file parses, action indexes are
/// unique, and transport matches do not contradict their prerequisites
/// (tp_* files require dl_type 0x0800 and nw_proto 6/17 unless wildcarded).
/// On failure `bad_field` (when given) names the offending file.
Result<FlowImage> image_from_files(const std::map<std::string, std::string>& files,
                                   std::string* bad_field = nullptr);

/// Inverse of image_from_files: the file set that stages this image.
std::map<std::string, std::string> files_from_image(const FlowImage&);

Status set_match_field(FlowMatch&, std::string_view field, std::string_view value);
std::map<std::string, std::string> files_from_match(const FlowMatch&);  // "match.*" names

/// Schema-level predicate: field presence + CIDR membership. Kept separate
/// from the wire-level wildcard-bit semantics so the two can be checked
/// against each other.
struct PacketFields {
    uint16_t in_port = 0;
    Mac dl_src{};
    Mac dl_dst{};
    uint16_t dl_vlan = kVlanUntagged;
    uint8_t dl_vlan_pcp = 0;
    uint16_t dl_type = 0;
    bool has_l3 = false;
    uint8_t nw_tos = 0;
    uint8_t nw_proto = 0;
    uint32_t nw_src = 0;
    uint32_t nw_dst = 0;
    bool has_l4 = false;
    uint16_t tp_src = 0;
    uint16_t tp_dst = 0;
};

bool flow_match_covers(const FlowMatch&, const PacketFields&);

}  // namespace yanc::schema
