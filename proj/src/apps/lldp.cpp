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

#include "yanc/apps/lldp.hpp"

#include "yanc/ofp/packet.hpp"
#include "yanc/util.hpp"

namespace yanc::apps {

namespace {

constexpr uint8_t kTlvEnd = 0;
constexpr uint8_t kTlvChassis = 1;
constexpr uint8_t kTlvPort = 2;
constexpr uint8_t kTlvTtl = 3;
constexpr uint8_t kSubtypeLocal = 7;
constexpr Mac kLldpMulticast{{0x01, 0x80, 0xc2, 0x00, 0x00, 0x0e}};

void put_tlv(std::string& out, uint8_t type, std::string_view value)
{
    uint16_t head = uint16_t((uint16_t(type) << 9) | (value.size() & 0x1ff));
    out += char(head >> 8);
    out += char(head & 0xff);
    out += value;
}

}  // namespace

std::string encode_lldp(const LldpProbe& probe, const Mac& src)
{
    std::string body;
    put_tlv(body, kTlvChassis, std::string(1, char(kSubtypeLocal)) + probe.chassis);
    put_tlv(body, kTlvPort, std::string(1, char(kSubtypeLocal)) + std::to_string(probe.port));
    std::string ttl;
    ttl += char(probe.ttl >> 8);
    ttl += char(probe.ttl & 0xff);
    put_tlv(body, kTlvTtl, ttl);
    put_tlv(body, kTlvEnd, "");
    return ofp::make_eth(kLldpMulticast, src, ofp::kEthLldp, body);
}

std::optional<LldpProbe> decode_lldp(std::string_view frame)
{
    if (frame.size() < 14) return std::nullopt;
    uint16_t ethertype = uint16_t((uint8_t(frame[12]) << 8) | uint8_t(frame[13]));
    if (ethertype != ofp::kEthLldp) return std::nullopt;

    LldpProbe probe;
    bool have_chassis = false, have_port = false;
    size_t at = 14;
    while (at + 2 <= frame.size()) {
        uint16_t head = uint16_t((uint8_t(frame[at]) << 8) | uint8_t(frame[at + 1]));
        at += 2;
        uint8_t type = uint8_t(head >> 9);
        size_t len = head & 0x1ff;
        if (at + len > frame.size()) return std::nullopt;
        std::string_view value = frame.substr(at, len);
        at += len;
        if (type == kTlvEnd) break;
        switch (type) {
            case kTlvChassis: {
                if (value.size() != 17 || uint8_t(value[0]) != kSubtypeLocal)
                    return std::nullopt;  // not one of our probes
                std::string_view chassis = value.substr(1);
                if (!dpid_from_name(chassis)) return std::nullopt;
                probe.chassis = std::string(chassis);
                have_chassis = true;
                break;
            }
            case kTlvPort: {
                if (value.size() < 2 || uint8_t(value[0]) != kSubtypeLocal) return std::nullopt;
                auto n = parse_uint(value.substr(1), 65535);
                if (!n || n.value() == 0) return std::nullopt;
                probe.port = uint16_t(n.value());
                have_port = true;
                break;
            }
            case kTlvTtl: {
                if (value.size() != 2) return std::nullopt;
                probe.ttl = uint16_t((uint8_t(value[0]) << 8) | uint8_t(value[1]));
                break;
            }
            default:
                break;  // foreign TLVs are fine as long as ours are present
        }
    }
    if (!have_chassis || !have_port) return std::nullopt;
    return probe;
}

}  // namespace yanc::apps
