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

#include "yanc/ofp/packet.hpp"

#include <cstring>

namespace yanc::ofp {

namespace {

uint16_t rd16(std::string_view b, size_t at)
{
    return uint16_t((uint8_t(b[at]) << 8) | uint8_t(b[at + 1]));
}

uint32_t rd32(std::string_view b, size_t at)
{
    return (uint32_t(rd16(b, at)) << 16) | rd16(b, at + 2);
}

Mac rd_mac(std::string_view b, size_t at)
{
    Mac m;
    std::memcpy(m.bytes.data(), b.data() + at, 6);
    return m;
}

void wr16(std::string& out, uint16_t v)
{
    out += char(v >> 8);
    out += char(v & 0xff);
}

void wr32(std::string& out, uint32_t v)
{
    wr16(out, uint16_t(v >> 16));
    wr16(out, uint16_t(v & 0xffff));
}

}  // namespace

HeaderTuple parse_packet(std::string_view frame, uint16_t in_port)
{
    HeaderTuple h;
    h.in_port = in_port;
    if (frame.size() < 14) return h;
    h.dl_dst = rd_mac(frame, 0);
    h.dl_src = rd_mac(frame, 6);
    size_t at = 12;
    uint16_t ethertype = rd16(frame, at);
    at += 2;
    if (ethertype == kEthVlan) {
        if (frame.size() < at + 4) return h;
        uint16_t tci = rd16(frame, at);
        h.dl_vlan = tci & 0x0fff;
        h.dl_vlan_pcp = uint8_t(tci >> 13);
        ethertype = rd16(frame, at + 2);
        at += 4;
    }
    h.dl_type = ethertype;
    if (ethertype != kEthIpv4) return h;
    if (frame.size() < at + 20) return h;
    uint8_t ver_ihl = uint8_t(frame[at]);
    if ((ver_ihl >> 4) != 4) return h;
    size_t ihl = size_t(ver_ihl & 0x0f) * 4;
    if (ihl < 20 || frame.size() < at + ihl) return h;
    h.has_l3 = true;
    h.nw_tos = uint8_t(frame[at + 1]);
    h.nw_proto = uint8_t(frame[at + 9]);
    h.nw_src = rd32(frame, at + 12);
    h.nw_dst = rd32(frame, at + 16);
    at += ihl;
    if ((h.nw_proto == kIpTcp || h.nw_proto == kIpUdp) && frame.size() >= at + 4) {
        h.has_l4 = true;
        h.tp_src = rd16(frame, at);
        h.tp_dst = rd16(frame, at + 2);
    }
    return h;
}

bool match_covers(const OfMatch& match, const HeaderTuple& pkt)
{
    const uint32_t w = match.wildcards;
    if (!(w & fw::in_port) && match.in_port != pkt.in_port) return false;
    if (!(w & fw::dl_src) && match.dl_src != pkt.dl_src) return false;
    if (!(w & fw::dl_dst) && match.dl_dst != pkt.dl_dst) return false;
    if (!(w & fw::dl_vlan) && match.dl_vlan != pkt.dl_vlan) return false;
    if (!(w & fw::dl_vlan_pcp) && match.dl_vlan_pcp != pkt.dl_vlan_pcp) return false;
    if (!(w & fw::dl_type) && match.dl_type != pkt.dl_type) return false;
    if (!(w & fw::nw_tos)) {
        if (!pkt.has_l3 || match.nw_tos != pkt.nw_tos) return false;
    }
    if (!(w & fw::nw_proto)) {
        if (!pkt.has_l3 || match.nw_proto != pkt.nw_proto) return false;
    }
    uint8_t src_bits = match.nw_src_bits();
    if (src_bits < 32) {
        uint32_t mask = src_bits == 0 ? ~uint32_t(0) : ~uint32_t(0) << src_bits;
        if (!pkt.has_l3 || (pkt.nw_src & mask) != (match.nw_src & mask)) return false;
    }
    uint8_t dst_bits = match.nw_dst_bits();
    if (dst_bits < 32) {
        uint32_t mask = dst_bits == 0 ? ~uint32_t(0) : ~uint32_t(0) << dst_bits;
        if (!pkt.has_l3 || (pkt.nw_dst & mask) != (match.nw_dst & mask)) return false;
    }
    if (!(w & fw::tp_src)) {
        if (!pkt.has_l4 || match.tp_src != pkt.tp_src) return false;
    }
    if (!(w & fw::tp_dst)) {
        if (!pkt.has_l4 || match.tp_dst != pkt.tp_dst) return false;
    }
    return true;
}

std::string make_eth(const Mac& dst, const Mac& src, uint16_t ethertype, std::string_view payload,
                     std::optional<VlanTag> vlan)
{
    std::string out;
    out.append(reinterpret_cast<const char*>(dst.bytes.data()), 6);
    out.append(reinterpret_cast<const char*>(src.bytes.data()), 6);
    if (vlan) {
        wr16(out, kEthVlan);
        wr16(out, uint16_t((uint16_t(vlan->pcp) << 13) | (vlan->vid & 0x0fff)));
    }
    wr16(out, ethertype);
    out += payload;
    return out;
}

std::string make_ipv4(const Mac& dl_dst, const Mac& dl_src, const Ipv4Spec& ip,
                      std::string_view l4, std::optional<VlanTag> vlan)
{
    std::string pkt;
    pkt += char(0x45);  // version 4, ihl 5
    pkt += char(ip.tos);
    wr16(pkt, uint16_t(20 + l4.size()));
    wr16(pkt, 0);       // id
    wr16(pkt, 0x4000);  // don't fragment
    pkt += char(64);    // ttl
    pkt += char(ip.proto);
    wr16(pkt, 0);  // checksum left zero; nothing in this fabric verifies it
    wr32(pkt, ip.src);
    wr32(pkt, ip.dst);
    pkt += l4;
    return make_eth(dl_dst, dl_src, kEthIpv4, pkt, vlan);
}

std::string make_tcp(const Mac& dl_dst, const Mac& dl_src, const Ipv4Spec& ip, uint16_t sport,
                     uint16_t dport, std::string_view payload)
{
    std::string seg;
    wr16(seg, sport);
    wr16(seg, dport);
    wr32(seg, 0);       // seq
    wr32(seg, 0);       // ack
    wr16(seg, 0x5002);  // data offset 5, SYN
    wr16(seg, 0xffff);  // window
    wr16(seg, 0);       // checksum
    wr16(seg, 0);       // urgent
    seg += payload;
    Ipv4Spec spec = ip;
    spec.proto = kIpTcp;
    return make_ipv4(dl_dst, dl_src, spec, seg);
}

std::string make_udp(const Mac& dl_dst, const Mac& dl_src, const Ipv4Spec& ip, uint16_t sport,
                     uint16_t dport, std::string_view payload)
{
    std::string seg;
    wr16(seg, sport);
    wr16(seg, dport);
    wr16(seg, uint16_t(8 + payload.size()));
    wr16(seg, 0);  // checksum
    seg += payload;
    Ipv4Spec spec = ip;
    spec.proto = kIpUdp;
    return make_ipv4(dl_dst, dl_src, spec, seg);
}

}  // namespace yanc::ofp
