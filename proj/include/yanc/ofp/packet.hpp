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

#include "yanc/ofp/codec.hpp"
#include "yanc/schema/fields.hpp"
#include "yanc/values.hpp"

namespace yanc::ofp {

constexpr uint16_t kEthIpv4 = 0x0800;
constexpr uint16_t kEthArp = 0x0806;
constexpr uint16_t kEthVlan = 0x8100;
constexpr uint16_t kEthLldp = 0x88cc;
constexpr uint8_t kIpTcp = 6;
constexpr uint8_t kIpUdp = 17;

/// The 12-tuple view over a raw frame; dl_vlan is kVlanNone for untagged
/// frames. Parsing tolerates truncation: layers missing bytes stay unset.
using HeaderTuple = schema::PacketFields;

HeaderTuple parse_packet(std::string_view frame, uint16_t in_port);

/// Wire-level match semantics: a field takes part in the comparison only
/// when its wildcard bit is clear; nw fields compare under the prefix mask.
/// A constrained L3/L4 field never matches a frame lacking that layer.
bool match_covers(const OfMatch& match, const HeaderTuple& pkt);

// frame builders (tests, probes)

struct VlanTag {
    uint16_t vid = 0;
    uint8_t pcp = 0;
};

std::string make_eth(const Mac& dst, const Mac& src, uint16_t ethertype,
                     std::string_view payload, std::optional<VlanTag> vlan = std::nullopt);

struct Ipv4Spec {
    uint32_t src = 0;
    uint32_t dst = 0;
    uint8_t proto = 0;
    uint8_t tos = 0;
};

std::string make_ipv4(const Mac& dl_dst, const Mac& dl_src, const Ipv4Spec& ip,
                      std::string_view l4, std::optional<VlanTag> vlan = std::nullopt);

std::string make_tcp(const Mac& dl_dst, const Mac& dl_src, const Ipv4Spec& ip, uint16_t sport,
                     uint16_t dport, std::string_view payload = {});
std::string make_udp(const Mac& dl_dst, const Mac& dl_src, const Ipv4Spec& ip, uint16_t sport,
                     uint16_t dport, std::string_view payload = {});

}  // namespace yanc::ofp
