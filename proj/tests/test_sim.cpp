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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "yanc/sim/fabric.hpp"
#include "sim_oracle.hpp"

using namespace yanc;
using namespace yanc::ofp;
using namespace yanc::sim;

namespace {

std::mt19937 rng(424242);

Mac mk_mac(uint64_t v)
{
    return Mac{{uint8_t(v >> 40), uint8_t(v >> 32), uint8_t(v >> 24), uint8_t(v >> 16),
                uint8_t(v >> 8), uint8_t(v)}};
}

HeaderTuple random_packet()
{
    HeaderTuple h;
    h.in_port = uint16_t(rng() % 4 + 1);
    h.dl_src = mk_mac(rng() % 8);
    h.dl_dst = mk_mac(rng() % 8);
    h.dl_vlan = rng() % 2 ? kVlanNone : uint16_t(rng() % 16);
    h.dl_vlan_pcp = h.dl_vlan == kVlanNone ? 0 : uint8_t(rng() % 8);
    switch (rng() % 4) {
        case 0:
            h.dl_type = kEthArp;
            break;
        default:
            h.dl_type = kEthIpv4;
            h.has_l3 = true;
            h.nw_tos = uint8_t((rng() % 4) << 2);
            h.nw_src = 0x0a000000 | uint32_t(rng() % 512);
            h.nw_dst = 0x0a000000 | uint32_t(rng() % 512);
            h.nw_proto = rng() % 2 ? 6 : 17;
            h.has_l4 = true;
            h.tp_src = uint16_t(rng() % 64);
            h.tp_dst = uint16_t(rng() % 64);
    }
    return h;
}

// A match derived from a packet with a random subset of fields wildcarded;
// this keeps collision rates high enough to exercise precedence.
OfMatch match_from_packet(const HeaderTuple& h)
{
    OfMatch m;
    uint32_t keep = rng();
    if (keep & 1) {
        m.wildcards &= ~fw::in_port;
        m.in_port = h.in_port;
    }
    if (keep & 2) {
        m.wildcards &= ~fw::dl_src;
        m.dl_src = h.dl_src;
    }
    if (keep & 4) {
        m.wildcards &= ~fw::dl_dst;
        m.dl_dst = h.dl_dst;
    }
    if (keep & 8) {
        m.wildcards &= ~fw::dl_vlan;
        m.dl_vlan = h.dl_vlan;
    }
    if (keep & 16) {
        m.wildcards &= ~fw::dl_vlan_pcp;
        m.dl_vlan_pcp = h.dl_vlan_pcp;
    }
    if (keep & 32) {
        m.wildcards &= ~fw::dl_type;
        m.dl_type = h.dl_type;
    }
    if (h.has_l3) {
        if (keep & 64) {
            m.wildcards &= ~fw::nw_tos;
            m.nw_tos = h.nw_tos;
        }
        if (keep & 128) {
            m.wildcards &= ~fw::nw_proto;
            m.nw_proto = h.nw_proto;
        }
        if (keep & 256) m.set_nw_src(h.nw_src, uint8_t(rng() % 33));
        if (keep & 512) m.set_nw_dst(h.nw_dst, uint8_t(rng() % 33));
        if (h.has_l4) {
            if (keep & 1024) {
                m.wildcards &= ~fw::tp_src;
                m.tp_src = h.tp_src;
            }
            if (keep & 2048) {
                m.wildcards &= ~fw::tp_dst;
                m.tp_dst = h.tp_dst;
            }
        }
    }
    m.canonicalize();
    return m;
}

std::string frame_for(const HeaderTuple& h)
{
    std::optional<VlanTag> vlan;
    if (h.dl_vlan != kVlanNone) vlan = VlanTag{h.dl_vlan, h.dl_vlan_pcp};
    if (!h.has_l3) return make_eth(h.dl_dst, h.dl_src, h.dl_type, "payload", vlan);
    if (h.has_l4 && h.nw_proto == 6)
        return make_tcp(h.dl_dst, h.dl_src, Ipv4Spec{h.nw_src, h.nw_dst, 6, h.nw_tos}, h.tp_src,
                        h.tp_dst);
    if (h.has_l4)
        return make_udp(h.dl_dst, h.dl_src, Ipv4Spec{h.nw_src, h.nw_dst, 17, h.nw_tos}, h.tp_src,
                        h.tp_dst);
    return make_ipv4(h.dl_dst, h.dl_src, Ipv4Spec{h.nw_src, h.nw_dst, h.nw_proto, h.nw_tos}, "");
}

}  // namespace

TEST_CASE("lookup equals the naive all-entries oracle")
{
    for (int trial = 0; trial < 300; ++trial) {
        SimSwitch sw(1, {1, 2, 3, 4});
        size_t entries = rng() % 33;
        std::vector<HeaderTuple> bases;
        for (int i = 0; i < 4; ++i) bases.push_back(random_packet());
        for (size_t i = 0; i < entries; ++i) {
            FlowMod fm;
            fm.command = FlowModCommand::add;
            fm.match = match_from_packet(bases[rng() % bases.size()]);
            fm.priority = uint16_t(rng() % 4);  // few levels -> many ties
            fm.actions.push_back(ActionOutput{uint16_t(rng() % 4 + 1), 0});
            sw.handle_flow_mod(fm);
        }
        for (int p = 0; p < 40; ++p) {
            HeaderTuple pkt = rng() % 2 ? bases[rng() % bases.size()] : random_packet();
            const TableEntry* want = oracle_lookup(sw.table(), pkt);
            const TableEntry* got = sw.lookup(pkt);
            if (want == nullptr) {
                CHECK(got == nullptr);
            } else {
                REQUIRE(got != nullptr);
                CHECK(got->order == want->order);
            }
        }
    }
}

TEST_CASE("exact entries beat any wildcard priority")
{
    HeaderTuple pkt = random_packet();
    while (!pkt.has_l4) pkt = random_packet();

    // fully specified match for the packet
    OfMatch exact;
    exact.wildcards = 0;
    exact.in_port = pkt.in_port;
    exact.dl_src = pkt.dl_src;
    exact.dl_dst = pkt.dl_dst;
    exact.dl_vlan = pkt.dl_vlan;
    exact.dl_vlan_pcp = pkt.dl_vlan_pcp;
    exact.dl_type = pkt.dl_type;
    exact.nw_tos = pkt.nw_tos;
    exact.nw_proto = pkt.nw_proto;
    exact.set_nw_src(pkt.nw_src, 32);
    exact.set_nw_dst(pkt.nw_dst, 32);
    exact.tp_src = pkt.tp_src;
    exact.tp_dst = pkt.tp_dst;
    exact.canonicalize();
    REQUIRE(exact.is_exact());

    for (int order = 0; order < 2; ++order) {
        SimSwitch sw(1, {1, 2});
        FlowMod low;
        low.match = exact;
        low.priority = 1;
        FlowMod high;
        high.match = match_all();
        high.priority = 65535;
        if (order == 0) {
            sw.handle_flow_mod(low);
            sw.handle_flow_mod(high);
        } else {
            sw.handle_flow_mod(high);
            sw.handle_flow_mod(low);
        }
        auto* winner = sw.lookup(pkt);
        REQUIRE(winner != nullptr);
        CHECK(winner->match == exact);  // either insertion order
    }

    // among wildcarded entries higher priority wins
    SimSwitch sw(1, {1, 2});
    FlowMod a;
    a.match = match_all();
    a.priority = 100;
    FlowMod b;
    b.match = match_all();
    b.priority = 200;
    b.actions.push_back(ActionOutput{2, 0});
    sw.handle_flow_mod(a);
    sw.handle_flow_mod(b);
    auto* w = sw.lookup(pkt);
    REQUIRE(w != nullptr);
    CHECK(w->priority == 200);

    // nothing matches an empty table
    SimSwitch fresh(2, {1});
    CHECK(fresh.lookup(pkt) == nullptr);
}

TEST_CASE("flow mod add, modify, delete semantics")
{
    SimSwitch sw(1, {1, 2});
    FlowMod add;
    add.match.wildcards &= ~fw::in_port;
    add.match.in_port = 1;
    add.match.canonicalize();
    add.priority = 10;
    add.actions.push_back(ActionOutput{2, 0});
    sw.handle_flow_mod(add);
    REQUIRE(sw.table().size() == 1);

    // identical (match, priority) replaces and resets counters
    HeaderTuple pkt;
    pkt.in_port = 1;
    sw.receive_frame(1, "0123456789abcdef");
    CHECK(sw.table()[0].packet_count == 1);
    sw.handle_flow_mod(add);
    REQUIRE(sw.table().size() == 1);
    CHECK(sw.table()[0].packet_count == 0);

    // modify keeps counters, swaps actions
    sw.receive_frame(1, "0123456789abcdef");
    FlowMod mod = add;
    mod.command = FlowModCommand::modify;
    mod.actions = {Action{ActionOutput{1, 0}}};
    sw.handle_flow_mod(mod);
    REQUIRE(sw.table().size() == 1);
    CHECK(sw.table()[0].packet_count == 1);
    CHECK(std::get<ActionOutput>(sw.table()[0].actions[0]).port == 1);

    // delete_strict removes the exact pair only
    FlowMod del = add;
    del.command = FlowModCommand::remove_strict;
    del.priority = 11;  // wrong priority: no effect
    sw.handle_flow_mod(del);
    CHECK(sw.table().size() == 1);
    del.priority = 10;
    sw.handle_flow_mod(del);
    CHECK(sw.table().empty());

    // non-strict delete removes everything the pattern subsumes
    FlowMod narrow;
    narrow.match.wildcards &= ~fw::in_port;
    narrow.match.in_port = 1;
    narrow.match.set_nw_src(0x0a000000, 24);
    narrow.match.canonicalize();
    sw.handle_flow_mod(narrow);
    FlowMod other;
    other.match.wildcards &= ~fw::in_port;
    other.match.in_port = 2;
    other.match.canonicalize();
    sw.handle_flow_mod(other);
    REQUIRE(sw.table().size() == 2);

    FlowMod wipe_port1;
    wipe_port1.command = FlowModCommand::remove;
    wipe_port1.match.wildcards &= ~fw::in_port;
    wipe_port1.match.in_port = 1;
    wipe_port1.match.canonicalize();
    sw.handle_flow_mod(wipe_port1);
    REQUIRE(sw.table().size() == 1);
    CHECK(sw.table()[0].match.in_port == 2);

    // all-wildcard delete empties the table (reconciliation depends on it)
    sw.handle_flow_mod(narrow);
    FlowMod wipe;
    wipe.command = FlowModCommand::remove;
    wipe.match = match_all();
    sw.handle_flow_mod(wipe);
    CHECK(sw.table().empty());

    // unknown commands are counted, not fatal
    FlowMod weird;
    weird.command = FlowModCommand(9);
    sw.handle_flow_mod(weird);
    CHECK(sw.unknown_commands == 1);
}

TEST_CASE("fabric: table miss produces one packet-in and no emissions")
{
    Fabric fab;
    fab.add_switch(0xa1, 2);
    auto rep = fab.inject(0xa1, 1, "somepacketbytes");
    REQUIRE(rep.ok());
    CHECK(rep.value().emissions.empty());
    REQUIRE(rep.value().packet_ins.size() == 1);
    CHECK(rep.value().packet_ins[0].reason == kReasonNoMatch);
    CHECK(rep.value().packet_ins[0].dpid == 0xa1);
    CHECK(rep.value().packet_ins[0].port == 1);

    CHECK(fab.inject(0x99, 1, "x").error() == Errc::not_found);
    CHECK(fab.inject(0xa1, 9, "x").error() == Errc::not_found);
}

TEST_CASE("fabric: single rule forwards with no packet-in")
{
    Fabric fab;
    auto& sw = fab.add_switch(0xa1, 2);
    FlowMod fm;
    fm.match.wildcards &= ~fw::in_port;
    fm.match.in_port = 1;
    fm.match.canonicalize();
    fm.actions.push_back(ActionOutput{2, 0});
    sw.handle_flow_mod(fm);

    auto rep = fab.inject(0xa1, 1, "payload");
    REQUIRE(rep.ok());
    CHECK(rep.value().packet_ins.empty());
    auto egress = rep.value().egress();
    REQUIRE(egress.size() == 1);
    CHECK(egress[0].dpid == 0xa1);
    CHECK(egress[0].port == 2);
    CHECK(egress[0].frame == "payload");
}

TEST_CASE("fabric: hand-traced linear chain delivers at the far edge")
{
    // A(1 edge, 2) -- (1)B(2) -- (1)C(2 edge)
    Fabric fab;
    auto& a = fab.add_switch(0xa, 2);
    auto& b = fab.add_switch(0xb, 2);
    auto& c = fab.add_switch(0xc, 2);
    REQUIRE(fab.link(0xa, 2, 0xb, 1).ok());
    REQUIRE(fab.link(0xb, 2, 0xc, 1).ok());

    auto install = [](SimSwitch& sw, uint16_t in, uint16_t out) {
        FlowMod fm;
        fm.match.wildcards &= ~fw::in_port;
        fm.match.in_port = in;
        fm.match.canonicalize();
        fm.actions.push_back(ActionOutput{out, 0});
        sw.handle_flow_mod(fm);
    };
    install(a, 1, 2);
    install(b, 1, 2);
    install(c, 1, 2);

    auto rep = fab.inject(0xa, 1, "trace");
    REQUIRE(rep.ok());
    CHECK(rep.value().receptions == 3);  // A, B and C each saw the frame once
    auto egress = rep.value().egress();
    REQUIRE(egress.size() == 1);
    CHECK(egress[0].dpid == 0xc);
    CHECK(egress[0].port == 2);
    CHECK(rep.value().packet_ins.empty());
}

TEST_CASE("fabric: forwarding loops trip the hop limit")
{
    Fabric fab;
    auto& a = fab.add_switch(1, 2);
    auto& b = fab.add_switch(2, 2);
    REQUIRE(fab.link(1, 1, 2, 1).ok());
    REQUIRE(fab.link(1, 2, 2, 2).ok());
    auto cross = [](SimSwitch& sw) {
        for (uint16_t in : {1, 2}) {
            FlowMod fm;
            fm.match.wildcards &= ~fw::in_port;
            fm.match.in_port = in;
            fm.match.canonicalize();
            fm.actions.push_back(ActionOutput{uint16_t(in == 1 ? 2 : 1), 0});
            sw.handle_flow_mod(fm);
        }
    };
    cross(a);
    cross(b);
    CHECK(fab.inject(1, 1, "loop").error() == Errc::loop_detected);
}

TEST_CASE("flood never emits on the ingress or admin-down ports")
{
    Fabric fab;
    auto& sw = fab.add_switch(7, 4);
    sw.port(3)->admin_down = true;
    FlowMod fm;
    fm.match = match_all();
    fm.actions.push_back(ActionOutput{kPortFlood, 0});
    sw.handle_flow_mod(fm);

    auto rep = fab.inject(7, 1, "bcast");
    REQUIRE(rep.ok());
    std::set<uint16_t> out_ports;
    for (const auto& e : rep.value().emissions) out_ports.insert(e.port);
    CHECK(out_ports == std::set<uint16_t>{2, 4});

    // injecting into a downed port is refused
    CHECK(!fab.inject(7, 3, "x").ok());
}

TEST_CASE("counter conservation across random traffic")
{
    for (int trial = 0; trial < 20; ++trial) {
        SimSwitch sw(1, {1, 2, 3, 4});
        std::vector<HeaderTuple> bases;
        for (int i = 0; i < 3; ++i) bases.push_back(random_packet());
        size_t entries = rng() % 16;
        for (size_t i = 0; i < entries; ++i) {
            FlowMod fm;
            fm.match = match_from_packet(bases[rng() % bases.size()]);
            fm.priority = uint16_t(rng() % 8);
            fm.actions.push_back(ActionOutput{uint16_t(rng() % 4 + 1), 0});
            sw.handle_flow_mod(fm);
        }
        int n = 200;
        for (int i = 0; i < n; ++i) {
            HeaderTuple pkt = rng() % 2 ? bases[rng() % bases.size()] : random_packet();
            sw.receive_frame(pkt.in_port, frame_for(pkt));
        }
        uint64_t matched = 0;
        for (const auto& e : sw.table()) matched += e.packet_count;
        CHECK(matched + sw.miss_packet_ins == sw.receptions);
        CHECK(sw.receptions == uint64_t(n));
    }
}

TEST_CASE("topology files parse into switches and links")
{
    auto spec = parse_topo(
        "# three switches in a line\n"
        "switch a ports=2\n"
        "switch b ports=2\n"
        "switch 0xc ports=2\n"
        "link a:2 b:1\n"
        "link b:2 c:1\n");
    REQUIRE(spec.ok());
    CHECK(spec.value().switches.size() == 3);
    CHECK(spec.value().links.size() == 2);
    CHECK(spec.value().switches[0] == std::pair<uint64_t, uint16_t>{0xa, 2});

    Fabric fab;
    REQUIRE(fab.apply(spec.value()).ok());
    CHECK(fab.peer_of(0xa, 2) == std::pair<uint64_t, uint16_t>{0xb, 1});
    CHECK(fab.peer_of(0xb, 1) == std::pair<uint64_t, uint16_t>{0xa, 2});
    CHECK(!fab.peer_of(0xa, 1).has_value());

    CHECK(!parse_topo("switch zz ports=\n").ok());
    CHECK(!parse_topo("nonsense\n").ok());

    // ports are link-exclusive
    Fabric f2;
    f2.add_switch(1, 2);
    f2.add_switch(2, 2);
    f2.add_switch(3, 2);
    REQUIRE(f2.link(1, 1, 2, 1).ok());
    CHECK(f2.link(1, 1, 3, 1).error() == Errc::already_exists);
}
