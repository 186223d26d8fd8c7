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

#include <set>

#include "pump.hpp"
#include "yanc/apps/lldp.hpp"
#include "yanc/apps/routerd.hpp"
#include "yanc/apps/topod.hpp"
#include "yanc/driver/driver.hpp"
#include "yanc/fs.hpp"
#include "yanc/sim/fabric.hpp"
#include "yanc/util.hpp"

using namespace yanc;
using namespace yanc::apps;
using namespace yanc::testing;

namespace {

Mac mk_mac(uint8_t low)
{
    return Mac{{0xaa, 0, 0, 0, 0, low}};
}

// Full in-process stack: fabric wired to the driver over pipes.
struct World {
    store::Store store;
    schema::Netfs net{store};
    LocalFs fs{net, "test"};
    driver::Controller ctl{net};
    sim::Fabric fab;

    void boot(const char* topo_text)
    {
        auto spec = sim::parse_topo(topo_text);
        REQUIRE(spec.ok());
        REQUIRE(fab.apply(spec.value()).ok());
        fab.connect_all([&](uint64_t) {
            auto [sw_end, drv_end] = driver::make_pipe();
            ctl.attach(drv_end);
            return sw_end;
        });
        pump_until_idle(ctl, fab);
    }

    std::string sw_path(uint64_t dpid)
    {
        return "/net/switches/" + dpid_to_name(dpid);
    }

    // the peer-symlink graph as sorted endpoint pairs
    std::set<std::pair<std::string, std::string>> peer_graph()
    {
        std::set<std::pair<std::string, std::string>> out;
        auto switches = fs.list("/net/switches").value();
        for (const auto& sw : switches) {
            std::string base = "/net/switches/" + sw + "/ports";
            auto ports = fs.list(base).value();
            for (const auto& port : ports) {
                auto peer = fs.readlink(base + "/" + port + "/peer");
                if (!peer) continue;
                std::string here = base + "/" + port;
                auto key = std::minmax(here, peer.value());
                out.insert({key.first, key.second});
            }
        }
        return out;
    }

    std::set<std::pair<std::string, std::string>> fabric_graph()
    {
        std::set<std::pair<std::string, std::string>> out;
        for (uint64_t d : fab.dpids()) {
            auto* sw = fab.find(d);
            for (const auto& [no, port] : sw->ports()) {
                auto peer = fab.peer_of(d, no);
                if (!peer) continue;
                std::string here = sw_path(d) + "/ports/" + std::to_string(no);
                std::string there =
                    sw_path(peer->first) + "/ports/" + std::to_string(peer->second);
                auto key = std::minmax(here, there);
                out.insert({key.first, key.second});
            }
        }
        return out;
    }

    size_t flows_named(const std::string& prefix)
    {
        size_t n = 0;
        auto switches = fs.list("/net/switches").value();
        for (const auto& sw : switches) {
            auto flows = fs.list("/net/switches/" + sw + "/flows").value();
            for (const auto& f : flows)
                if (f.rfind(prefix, 0) == 0) ++n;
        }
        return n;
    }
};

// drain the full cascade: misses, floods, copies, their misses
void settle(World& w, Routerd& router)
{
    for (int i = 0; i < 16; ++i) {
        pump_until_idle(w.ctl, w.fab);
        if (router.poll() == 0) break;
    }
    pump_until_idle(w.ctl, w.fab);
}

constexpr const char* kLinear3 =
    "switch a ports=2\n"
    "switch b ports=2\n"
    "switch c ports=2\n"
    "link a:2 b:1\n"
    "link b:2 c:1\n";

constexpr const char* kRing4 =
    "switch 1 ports=3\n"
    "switch 2 ports=3\n"
    "switch 3 ports=3\n"
    "switch 4 ports=3\n"
    "link 1:2 2:3\n"
    "link 2:2 3:3\n"
    "link 3:2 4:3\n"
    "link 4:2 1:3\n";

}  // namespace

TEST_CASE("lldp probes survive the encoder and reject foreign frames")
{
    LldpProbe probe;
    probe.chassis = "00000000000000a1";
    probe.port = 7;
    probe.ttl = 120;
    Mac src = mk_mac(1);

    auto frame = encode_lldp(probe, src);
    auto back = decode_lldp(frame);
    REQUIRE(back.has_value());
    CHECK(*back == probe);

    // property: identity over a range of ports and chassis ids
    for (uint16_t port = 1; port < 400; port += 13) {
        LldpProbe p;
        p.chassis = dpid_to_name(0xdeadbeef00ull + port);
        p.port = port;
        p.ttl = uint16_t(port * 3);
        auto b = decode_lldp(encode_lldp(p, src));
        REQUIRE(b.has_value());
        CHECK(*b == p);
    }

    // a chassis id with the MAC subtype is some other vendor's LLDP
    std::string foreign;
    auto put_tlv = [&](uint8_t type, std::string value) {
        uint16_t head = uint16_t((type << 9) | value.size());
        foreign += char(head >> 8);
        foreign += char(head & 0xff);
        foreign += value;
    };
    put_tlv(1, std::string(1, 4) + "abcdef");  // chassis, MAC subtype
    put_tlv(2, std::string(1, 7) + "3");
    put_tlv(0, "");
    auto eth = ofp::make_eth(mk_mac(9), src, ofp::kEthLldp, foreign);
    CHECK(!decode_lldp(eth).has_value());

    CHECK(!decode_lldp("short").has_value());
    CHECK(!decode_lldp(ofp::make_eth(mk_mac(9), src, 0x0800, "ip")).has_value());
}

TEST_CASE("topod discovers links and ages them out")
{
    World w;
    w.boot(kLinear3);
    LocalFs topo_fs(w.net, "topod");
    Topod topod(topo_fs);

    auto round = [&] {
        topod.run_round();
        pump_until_idle(w.ctl, w.fab);
    };

    // after two rounds the peer graph equals the fabric link table
    round();
    round();
    CHECK(w.peer_graph() == w.fabric_graph());
    CHECK(w.peer_graph().size() == 2);

    // peers point at each other, e.g. a:2 <-> b:1
    auto a2 = w.fs.readlink(w.sw_path(0xa) + "/ports/2/peer");
    REQUIRE(a2.ok());
    CHECK(a2.value() == w.sw_path(0xb) + "/ports/1");
    auto b1 = w.fs.readlink(w.sw_path(0xb) + "/ports/1/peer");
    REQUIRE(b1.ok());
    CHECK(b1.value() == w.sw_path(0xa) + "/ports/2");

    // repeated rounds are steady state
    round();
    CHECK(w.peer_graph() == w.fabric_graph());

    // cut one link while this round's probes are still in flight: the
    // observations stop and three rounds later exactly its two symlinks go
    topod.run_round();
    REQUIRE(w.fab.unlink(0xa, 2).ok());
    pump_until_idle(w.ctl, w.fab);
    auto before = w.peer_graph();
    round();
    round();
    CHECK(w.peer_graph() == before);  // two rounds: not yet aged out
    round();
    auto after = w.peer_graph();
    CHECK(after.size() == 1);
    std::string b2 = w.sw_path(0xb) + "/ports/2", c1 = w.sw_path(0xc) + "/ports/1";
    CHECK(after.count(std::make_pair(std::min(b2, c1), std::max(b2, c1))) == 1);
}

TEST_CASE("topod ignores frames that are not discovery probes")
{
    World w;
    w.boot(kLinear3);
    LocalFs topo_fs(w.net, "topod");
    Topod topod(topo_fs);
    topod.run_round();
    pump_until_idle(w.ctl, w.fab);

    // a broadcast lands in the topod buffer alongside the probes
    auto bcast = ofp::make_eth(Mac{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}, mk_mac(1), 0x0806, "arp");
    REQUIRE(w.fab.inject(0xa, 1, bcast).ok());
    pump_until_idle(w.ctl, w.fab);

    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    topod.run_round();
    CHECK(w.peer_graph() == w.fabric_graph());
}

TEST_CASE("routerd installs an exact-match path for a known destination")
{
    World w;
    w.boot(kLinear3);
    LocalFs topo_fs(w.net, "topod"), router_fs(w.net, "routerd");
    Topod topod(topo_fs);
    Routerd router(router_fs);

    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    router.poll();  // opens buffers and swallows the probe-era records

    Mac x = mk_mac(1), y = mk_mac(2);
    // teach the router where y lives: y sends something first
    auto hello = ofp::make_udp(x, y, ofp::Ipv4Spec{0x0a000002, 0x0a000001, 17, 0}, 5000, 5001);
    REQUIRE(w.fab.inject(0xc, 2, hello).ok());
    settle(w, router);
    REQUIRE(router.macs().count(y) == 1);
    CHECK(router.macs().at(y).switch_path == w.sw_path(0xc));
    CHECK(router.macs().at(y).port == 2);

    // first x->y frame: three exact-match flows, one packet-out at c's edge
    w.fab.take_report();
    auto frame = ofp::make_tcp(y, x, ofp::Ipv4Spec{0x0a000001, 0x0a000002, 6, 0}, 1234, 80);
    REQUIRE(w.fab.inject(0xa, 1, frame).ok());
    pump_until_idle(w.ctl, w.fab);
    CHECK(router.poll() == 1);
    pump_until_idle(w.ctl, w.fab);

    CHECK(router.paths_installed() == 1);
    CHECK(w.flows_named("routerd-") == 3);
    REQUIRE(router.last_path().size() == 3);
    CHECK(router.last_path()[0].switch_path == w.sw_path(0xa));
    CHECK(router.last_path()[0].in_port == 1);  // the learning attachment point
    CHECK(router.last_path()[2].switch_path == w.sw_path(0xc));
    CHECK(router.last_path()[2].out_port == 2);

    auto rep = w.fab.take_report();
    bool delivered = false;
    for (const auto& e : rep.egress())
        if (e.dpid == 0xc && e.port == 2 && e.frame == frame) delivered = true;
    CHECK(delivered);

    // hop flows carry the full 12-tuple of the triggering packet
    auto img = router_fs.committed_flow(w.sw_path(0xa) + "/flows/" +
                                        w.fs.list(w.sw_path(0xa) + "/flows").value()[0]);
    REQUIRE(img.ok());
    CHECK(img.value().match.tp_dst == uint16_t(80));
    CHECK(img.value().match.nw_src == Cidr{0x0a000001, 32});
    CHECK(img.value().match.dl_vlan == uint16_t(schema::kVlanUntagged));
    CHECK(img.value().priority == 32768);

    // second identical frame crosses the fabric with zero packet-ins
    w.fab.take_report();
    REQUIRE(w.fab.inject(0xa, 1, frame).ok());
    pump_until_idle(w.ctl, w.fab);
    rep = w.fab.take_report();
    CHECK(rep.packet_ins.empty());
    REQUIRE(rep.egress().size() == 1);
    CHECK(rep.egress()[0].dpid == 0xc);
    CHECK(rep.egress()[0].port == 2);
    CHECK(rep.egress()[0].frame == frame);
    CHECK(router.poll() == 0);
}

TEST_CASE("routerd floods unknown destinations exactly once")
{
    World w;
    w.boot(kRing4);
    LocalFs topo_fs(w.net, "topod"), router_fs(w.net, "routerd");
    Topod topod(topo_fs);
    Routerd router(router_fs);
    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    router.poll();

    // unknown destination: one flood packet-out, no flows
    auto frame = ofp::make_udp(mk_mac(0x77), mk_mac(1), ofp::Ipv4Spec{1, 2, 17, 0}, 1, 2);
    REQUIRE(w.fab.inject(1, 1, frame).ok());
    // drain the whole cascade: misses, floods, copies, their misses
    for (int i = 0; i < 8; ++i) {
        pump_until_idle(w.ctl, w.fab);
        router.poll();
    }
    pump_until_idle(w.ctl, w.fab);

    CHECK(router.floods_sent() == 1);  // <= fabric diameter (2), no storm
    CHECK(w.flows_named("routerd-") == 0);
    CHECK(router.paths_installed() == 0);
}

TEST_CASE("routerd takes the short way around a ring")
{
    World w;
    w.boot(kRing4);
    LocalFs topo_fs(w.net, "topod"), router_fs(w.net, "routerd");
    Topod topod(topo_fs);
    Routerd router(router_fs);
    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    topod.run_round();
    pump_until_idle(w.ctl, w.fab);
    router.poll();

    Mac x = mk_mac(1), y = mk_mac(2);
    // y attaches at switch 2 (adjacent to 1): shortest path is one hop over
    auto hello = ofp::make_udp(x, y, ofp::Ipv4Spec{9, 8, 17, 0}, 1, 2);
    REQUIRE(w.fab.inject(2, 1, hello).ok());
    settle(w, router);

    auto frame = ofp::make_udp(y, x, ofp::Ipv4Spec{8, 9, 17, 0}, 3, 4);
    REQUIRE(w.fab.inject(1, 1, frame).ok());
    pump_until_idle(w.ctl, w.fab);
    router.poll();
    pump_until_idle(w.ctl, w.fab);

    REQUIRE(router.paths_installed() == 1);
    CHECK(router.last_path().size() == 2);  // 1 -> 2 direct, not around
    CHECK(w.flows_named("routerd-") == 2);

    // path hops are chained by real links and visit no switch twice
    std::set<std::string> visited;
    for (const auto& hop : router.last_path()) CHECK(visited.insert(hop.switch_path).second);
}
