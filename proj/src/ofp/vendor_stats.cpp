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

#include "yanc/ofp/vendor_stats.hpp"

namespace yanc::ofp {

namespace {

void put16(std::string& out, uint16_t v)
{
    out += char(v >> 8);
    out += char(v & 0xff);
}

void put32(std::string& out, uint32_t v)
{
    put16(out, uint16_t(v >> 16));
    put16(out, uint16_t(v));
}

void put64(std::string& out, uint64_t v)
{
    put32(out, uint32_t(v >> 32));
    put32(out, uint32_t(v));
}

struct Rd {
    std::string_view b;
    size_t pos = 0;
    bool fail = false;

    uint16_t u16()
    {
        if (pos + 2 > b.size()) {
            fail = true;
            return 0;
        }
        uint16_t v = uint16_t((uint8_t(b[pos]) << 8) | uint8_t(b[pos + 1]));
        pos += 2;
        return v;
    }
    uint32_t u32()
    {
        uint32_t v = uint32_t(u16()) << 16;
        return v | u16();
    }
    uint64_t u64()
    {
        uint64_t v = uint64_t(u32()) << 32;
        return v | u32();
    }
    std::string_view take(size_t n)
    {
        if (pos + n > b.size()) {
            fail = true;
            return {};
        }
        auto v = b.substr(pos, n);
        pos += n;
        return v;
    }
};

}  // namespace

Unknown encode_stats_push(const StatsPush& push, uint32_t xid)
{
    Unknown u;
    u.xid = xid;
    u.msg_type = kTypeVendor;
    put32(u.body, kStatsVendorId);
    put16(u.body, uint16_t(push.flows.size()));
    put16(u.body, uint16_t(push.ports.size()));
    for (const auto& f : push.flows) {
        append_match(u.body, f.match);
        put16(u.body, f.priority);
        put16(u.body, 0);
        put64(u.body, f.packet_count);
        put64(u.body, f.byte_count);
    }
    for (const auto& p : push.ports) {
        put16(u.body, p.port_no);
        put16(u.body, 0);
        put64(u.body, p.rx_packets);
        put64(u.body, p.tx_packets);
    }
    return u;
}

std::optional<StatsPush> decode_stats_push(const Unknown& u)
{
    if (u.msg_type != kTypeVendor) return std::nullopt;
    Rd r{u.body};
    if (r.u32() != kStatsVendorId || r.fail) return std::nullopt;
    StatsPush out;
    uint16_t n_flows = r.u16();
    uint16_t n_ports = r.u16();
    for (uint16_t i = 0; i < n_flows && !r.fail; ++i) {
        FlowCounters f;
        auto m = parse_match40(r.take(kMatchWireLen));
        if (!m) return std::nullopt;
        f.match = m.value();
        f.priority = r.u16();
        r.u16();
        f.packet_count = r.u64();
        f.byte_count = r.u64();
        out.flows.push_back(f);
    }
    for (uint16_t i = 0; i < n_ports && !r.fail; ++i) {
        PortCounters p;
        p.port_no = r.u16();
        r.u16();
        p.rx_packets = r.u64();
        p.tx_packets = r.u64();
        out.ports.push_back(p);
    }
    if (r.fail) return std::nullopt;
    return out;
}

}  // namespace yanc::ofp
