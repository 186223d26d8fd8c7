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

#include <algorithm>
#include <random>
#include <set>

#include "yanc/fs.hpp"
#include "yanc/schema/schema.hpp"
#include "yanc/util.hpp"

using namespace yanc;
using namespace yanc::schema;

namespace {

constexpr const char* kSw = "/net/switches/00000000000000a1";

struct Harness {
    store::Store store;
    Netfs net;
    LocalFs fs;

    explicit Harness(Netfs::Options opt = {}) : net(store, opt), fs(net, "test") {}
};

std::set<std::string> names_of(Fs& fs, std::string_view p)
{
    auto v = fs.list(p).value();
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("cidr parsing against independent bit arithmetic")
{
    // oracle: assemble the address from octets by shifting, no parser involved
    auto addr_of = [](unsigned a, unsigned b, unsigned c, unsigned d) {
        return (uint32_t(a) << 24) | (uint32_t(b) << 16) | (uint32_t(c) << 8) | uint32_t(d);
    };

    auto r = parse_cidr("10.0.0.0/24");
    REQUIRE(r.ok());
    CHECK(r.value().addr == addr_of(10, 0, 0, 0));
    CHECK(r.value().addr == 0x0A000000);
    CHECK(r.value().prefix == 24);

    auto all = parse_cidr("0.0.0.0/0");
    REQUIRE(all.ok());
    CHECK(all.value().addr == 0);
    CHECK(all.value().prefix == 0);
    CHECK(all.value().contains(0xdeadbeef));
    CHECK(all.value().contains(0));

    auto host = parse_cidr("10.0.0.1");
    REQUIRE(host.ok());
    CHECK(host.value().addr == addr_of(10, 0, 0, 1));
    CHECK(host.value().prefix == 32);
    CHECK(parse_cidr("10.0.0.1/32").value() == host.value());

    CHECK(!parse_cidr("300.1.1.1/24").ok());
    CHECK(!parse_cidr("1.2.3/8").ok());
    CHECK(!parse_cidr("1.2.3.4/33").ok());
    CHECK(!parse_cidr("1.2.3.4/").ok());
    CHECK(!parse_cidr("").ok());
    CHECK(parse_cidr("10.0.0.0/24\n").ok());  // single trailing newline tolerated

    // round-trip identity on canonical forms
    std::mt19937 rng(11);
    for (int i = 0; i < 500; ++i) {
        Cidr c{uint32_t(rng()), uint8_t(rng() % 33)};
        auto back = parse_cidr(format_cidr(c));
        REQUIRE(back.ok());
        CHECK(back.value() == c);
    }
}

TEST_CASE("mac and uint grammar")
{
    auto m = parse_mac("aa:bb:cc:dd:ee:ff");
    REQUIRE(m.ok());
    CHECK(format_mac(m.value()) == "aa:bb:cc:dd:ee:ff");
    CHECK(parse_mac("AA:BB:CC:DD:EE:0F").ok());
    CHECK(!parse_mac("aa:bb:cc:dd:ee").ok());
    CHECK(!parse_mac("aa-bb-cc-dd-ee-ff").ok());

    CHECK(parse_uint("0x0800", 65535).value() == 0x0800);
    CHECK(parse_uint("22", 65535).value() == 22);
    CHECK(parse_uint("22\n", 65535).value() == 22);
    CHECK(parse_uint("70000", 65535).error() == Errc::range_error);
    CHECK(parse_uint("2x", 65535).error() == Errc::parse_error);
}

TEST_CASE("the net root carries the view skeleton")
{
    Harness h;
    CHECK(names_of(h.fs, "/net") == std::set<std::string>{"hosts", "switches", "views"});
}

TEST_CASE("semantic creation per schema point")
{
    Harness h;

    SUBCASE("view")
    {
        REQUIRE(h.fs.mkdir("/net/views/new_view").ok());
        CHECK(names_of(h.fs, "/net/views/new_view") ==
              std::set<std::string>{"hosts", "switches", "views"});
    }
    SUBCASE("switch")
    {
        REQUIRE(h.fs.mkdir(kSw).ok());
        CHECK(names_of(h.fs, kSw) ==
              std::set<std::string>{"ports", "flows", "events", "packets_out"});
        CHECK(h.fs.mkdir("/net/switches/not-hex").error() == Errc::invalid_name);
        CHECK(h.fs.mkdir("/net/switches/00000000000000A1").error() == Errc::invalid_name);
    }
    SUBCASE("port")
    {
        REQUIRE(h.fs.mkdir(kSw).ok());
        REQUIRE(h.fs.mkdir(std::string(kSw) + "/ports/2").ok());
        CHECK(names_of(h.fs, std::string(kSw) + "/ports/2") ==
              std::set<std::string>{"hw_addr", "config.port_down", "config.port_status",
                                    "stats.rx_packets", "stats.tx_packets"});
        CHECK(h.fs.read(std::string(kSw) + "/ports/2/config.port_down").value() == "0");
        CHECK(h.fs.mkdir(std::string(kSw) + "/ports/0").error() == Errc::invalid_name);
        CHECK(h.fs.mkdir(std::string(kSw) + "/ports/02").error() == Errc::invalid_name);
        CHECK(h.fs.mkdir(std::string(kSw) + "/ports/x").error() == Errc::invalid_name);
    }
    SUBCASE("flow")
    {
        REQUIRE(h.fs.mkdir(kSw).ok());
        REQUIRE(h.fs.mkdir(std::string(kSw) + "/flows/f1").ok());
        CHECK(names_of(h.fs, std::string(kSw) + "/flows/f1") ==
              std::set<std::string>{"version", "stats.packet_count", "stats.byte_count"});
        CHECK(h.fs.read(std::string(kSw) + "/flows/f1/version").value() == "0");
        CHECK(h.fs.mkdir(std::string(kSw) + "/flows/a,b").error() == Errc::invalid_name);
        CHECK(h.fs.mkdir(std::string(kSw) + "/flows/a,b", true).ok());  // engine-reserved
    }
    SUBCASE("buffer and packet-out record")
    {
        REQUIRE(h.fs.mkdir(kSw).ok());
        REQUIRE(h.fs.mkdir(std::string(kSw) + "/events/routerd").ok());
        CHECK(names_of(h.fs, std::string(kSw) + "/events/routerd").empty());
        REQUIRE(h.fs.mkdir(std::string(kSw) + "/packets_out/p1").ok());
        CHECK(names_of(h.fs, std::string(kSw) + "/packets_out/p1") ==
              std::set<std::string>{"send"});
    }
    SUBCASE("semantic creation closure across every schema point")
    {
        // walk the schema table: create one object of each kind and compare
        // the created children exactly
        struct Point {
            std::string path;
            std::set<std::string> children;
        };
        REQUIRE(h.fs.mkdir("/net/views/v").ok());
        std::vector<Point> points = {
            {"/net/views/v/views/inner", {"hosts", "switches", "views"}},
            {"/net/views/v/switches/00000000000000ff", {"ports", "flows", "events", "packets_out"}},
            {"/net/switches/0000000000000001", {"ports", "flows", "events", "packets_out"}},
            {"/net/switches/0000000000000001/ports/7",
             {"hw_addr", "config.port_down", "config.port_status", "stats.rx_packets",
              "stats.tx_packets"}},
            {"/net/switches/0000000000000001/flows/f",
             {"version", "stats.packet_count", "stats.byte_count"}},
            {"/net/switches/0000000000000001/events/app", {}},
            {"/net/switches/0000000000000001/packets_out/r", {"send"}},
        };
        for (const auto& pt : points) {
            REQUIRE(h.fs.mkdir(pt.path).ok());
            CHECK(names_of(h.fs, pt.path) == pt.children);
        }
    }
    SUBCASE("one created event per node")
    {
        auto w = h.net.watch("/net", true, 256).value();
        REQUIRE(h.fs.mkdir(kSw).ok());
        int created = 0;
        while (auto e = w->poll()) {
            CHECK(e->kind == store::EventKind::created);
            ++created;
        }
        CHECK(created == 5);  // the switch dir and its four subdirectories
    }
}

TEST_CASE("mkdir placement rules")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    REQUIRE(h.fs.mkdir(std::string(kSw) + "/flows/f").ok());

    CHECK(h.fs.mkdir(std::string(kSw) + "/flows/f/sub").error() == Errc::not_a_schema_point);
    CHECK(h.fs.mkdir(std::string(kSw) + "/events").error() == Errc::already_exists);
    REQUIRE(h.fs.mkdir(std::string(kSw) + "/events/app").ok());
    CHECK(h.fs.mkdir(std::string(kSw) + "/events/app/fake").error() == Errc::not_a_schema_point);

    // free zones: hosts, custom entries under views and switches
    CHECK(h.fs.mkdir("/net/hosts/h1").ok());
    CHECK(h.fs.mkdir("/net/views/v1").ok());
    CHECK(h.fs.mkdir("/net/views/v1/.slice").ok());
    CHECK(h.fs.mkdir(std::string(kSw) + "/notes").ok());
    CHECK(h.fs.mkdir("/scratch").ok());
}

TEST_CASE("recursive typed removal")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    for (int i = 0; i < 50; ++i) {
        std::string f = std::string(kSw) + "/flows/flow" + std::to_string(i);
        REQUIRE(h.fs.mkdir(f).ok());
        REQUIRE(h.fs.write(f + "/match.tp_dst", std::to_string(i)).ok());
    }
    for (int p = 1; p <= 4; ++p)
        REQUIRE(h.fs.mkdir(std::string(kSw) + "/ports/" + std::to_string(p)).ok());

    auto w = h.net.watch("/net/switches", true, 8192).value();
    while (w->poll()) {
    }
    REQUIRE(h.fs.rm_semantic(kSw).ok());

    CHECK(!h.net.store().exists(kSw));
    // zero orphan paths anywhere under the switch
    auto snap = h.net.store().snapshot();
    CHECK(snap.find("00000000000000a1") == std::string::npos);
    // watchers got only removed events for that subtree
    int n = 0;
    while (auto e = w->poll()) {
        CHECK(e->kind == store::EventKind::removed);
        ++n;
    }
    CHECK(n > 50);
    CHECK(h.fs.rm_semantic(kSw).error() == Errc::not_found);
}

TEST_CASE("flow field staging validates eagerly")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string f = std::string(kSw) + "/flows/f";
    REQUIRE(h.fs.mkdir(f).ok());

    CHECK(h.net.write_flow_field(f, "match.nw_src", "10.0.0.0/24", "t").ok());
    CHECK(h.fs.read(f + "/match.nw_src").value() == "10.0.0.0/24");
    CHECK(h.net.write_flow_field(f, "match.tp_dst", "22", "t").ok());
    CHECK(h.net.write_flow_field(f, "priority", "70000", "t").error() == Errc::range_error);
    CHECK(h.net.write_flow_field(f, "match.bogus", "1", "t").error() == Errc::unknown_field);
    CHECK(h.net.write_flow_field(f, "match.nw_src", "300.1.1.1/24", "t").error() ==
          Errc::parse_error);
    CHECK(h.fs.write(f + "/match.dl_src", "aa:bb:cc:dd:ee:ff").ok());
    CHECK(h.fs.write(f + "/action.0.output", "3").ok());
    CHECK(h.fs.write(f + "/action.1.output", "controller").ok());
    CHECK(h.fs.write(f + "/action.0.set_dl_src", "11:22:33:44:55:66").ok());
}

TEST_CASE("commit bumps the version and snapshots the staged set")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string f = std::string(kSw) + "/flows/f";
    REQUIRE(h.fs.mkdir(f).ok());
    REQUIRE(h.fs.write(f + "/match.tp_dst", "22").ok());
    REQUIRE(h.fs.write(f + "/action.0.output", "3").ok());

    auto wv = h.net.watch(f + "/version", false, 16).value();
    auto v1 = h.fs.commit_flow(f);
    REQUIRE(v1.ok());
    CHECK(v1.value() == 1);
    CHECK(h.fs.read(f + "/version").value() == "1");

    // exactly one modified event on the version file
    auto ev = wv->poll();
    REQUIRE(ev.has_value());
    CHECK(ev->kind == store::EventKind::modified);
    CHECK(!wv->poll().has_value());

    auto img = h.fs.committed_flow(f);
    REQUIRE(img.ok());
    CHECK(img.value().version == 1);
    CHECK(img.value().match.tp_dst == uint16_t(22));
    CHECK(!img.value().match.nw_src.has_value());
    CHECK(img.value().priority == kDefaultPriority);
    REQUIRE(img.value().actions.size() == 1);
    CHECK(img.value().actions[0].port == 3);

    // a write to the version file is the same commit operation
    REQUIRE(h.fs.write(f + "/version", "1").ok());
    CHECK(h.fs.read(f + "/version").value() == "2");
    CHECK(h.fs.committed_flow(f).value().version == 2);

    // staged-only changes stay invisible to the committed image
    REQUIRE(h.fs.write(f + "/match.tp_dst", "23").ok());
    CHECK(h.fs.committed_flow(f).value().match.tp_dst == uint16_t(22));

    // wildcard-by-absence: removing the match file and committing widens it
    REQUIRE(h.fs.remove(f + "/match.tp_dst", false).ok());
    REQUIRE(h.fs.commit_flow(f).ok());
    CHECK(!h.fs.committed_flow(f).value().match.tp_dst.has_value());
}

TEST_CASE("commit with zero action files is a valid drop rule")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string f = std::string(kSw) + "/flows/drop";
    REQUIRE(h.fs.mkdir(f).ok());
    REQUIRE(h.fs.write(f + "/match.tp_dst", "22").ok());
    auto v = h.fs.commit_flow(f);
    REQUIRE(v.ok());
    CHECK(h.fs.committed_flow(f).value().actions.empty());
}

TEST_CASE("commit validation failures leave the version untouched")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string f = std::string(kSw) + "/flows/f";
    REQUIRE(h.fs.mkdir(f).ok());

    // contradiction: transport match against a non-IP dl_type
    REQUIRE(h.fs.write(f + "/match.tp_dst", "22").ok());
    REQUIRE(h.fs.write(f + "/match.dl_type", "0x0806").ok());
    auto wv = h.net.watch(f + "/version", false, 16).value();
    CHECK(h.fs.commit_flow(f).error() == Errc::validation_failed);
    CHECK(h.fs.read(f + "/version").value() == "0");
    CHECK(!wv->poll().has_value());  // no event on a rejected commit
    CHECK(h.fs.committed_flow(f).error() == Errc::not_found);

    // fixing the prerequisite makes the same staged set valid
    REQUIRE(h.fs.write(f + "/match.dl_type", "0x0800").ok());
    REQUIRE(h.fs.write(f + "/match.nw_proto", "6").ok());
    CHECK(h.fs.commit_flow(f).value() == 1);

    // tp_dst with everything else wildcarded is fine
    std::string g = std::string(kSw) + "/flows/g";
    REQUIRE(h.fs.mkdir(g).ok());
    REQUIRE(h.fs.write(g + "/match.tp_dst", "22").ok());
    CHECK(h.fs.commit_flow(g).ok());

    // duplicate action indexes are contradictory
    std::string d = std::string(kSw) + "/flows/d";
    REQUIRE(h.fs.mkdir(d).ok());
    REQUIRE(h.fs.write(d + "/action.0.output", "1").ok());
    REQUIRE(h.fs.write(d + "/action.0.set_dl_src", "aa:aa:aa:aa:aa:aa").ok());
    CHECK(h.fs.commit_flow(d).error() == Errc::validation_failed);
}

TEST_CASE("a version-file watcher always observes the committed set")
{
    // the committed image equals the match files as of the commit instant,
    // regardless of staging writes around it
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string f = std::string(kSw) + "/flows/f";
    REQUIRE(h.fs.mkdir(f).ok());

    auto wv = h.net.watch(f + "/version", false, 256).value();
    std::mt19937 rng(5);
    std::vector<FlowMatch> committed_history;
    for (int round = 0; round < 40; ++round) {
        // stage a random subset
        if (rng() % 2) h.fs.write(f + "/match.tp_dst", std::to_string(rng() % 1000));
        if (rng() % 2) h.fs.write(f + "/match.nw_src", "10.0." + std::to_string(rng() % 99) + ".0/24");
        if (rng() % 3 == 0) h.fs.remove(f + "/match.tp_dst", false);
        if (rng() % 2) {
            REQUIRE(h.fs.commit_flow(f).ok());
            committed_history.push_back(h.fs.committed_flow(f).value().match);
        }
    }
    size_t seen = 0;
    while (auto e = wv->poll()) {
        REQUIRE(e->kind == store::EventKind::modified);
        ++seen;
    }
    CHECK(seen == committed_history.size());
}

TEST_CASE("packet-in buffers fan out byte-identical records")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    auto b1 = h.fs.open_event_buffer(kSw, "routerd");
    auto b2 = h.fs.open_event_buffer(kSw, "topod");
    REQUIRE(b1.ok());
    REQUIRE(b2.ok());
    CHECK(b1.value() == std::string(kSw) + "/events/routerd");
    // opening twice is idempotent
    CHECK(h.fs.open_event_buffer(kSw, "routerd").ok());

    EventIn ev;
    ev.in_port = 3;
    ev.total_len = 5;
    ev.data = std::string("\x01\x02\x03\x04\x05", 5);
    REQUIRE(h.fs.enqueue_event(kSw, ev).ok());

    auto l1 = h.fs.list(b1.value()).value();
    auto l2 = h.fs.list(b2.value()).value();
    REQUIRE(l1.size() == 1);
    CHECK(l1 == l2);  // identical names preserve ordering across buffers
    std::string r1 = b1.value() + "/" + l1[0];
    std::string r2 = b2.value() + "/" + l2[0];
    for (const char* file : {"buffer_id", "in_port", "reason", "total_len", "data"})
        CHECK(h.fs.read(r1 + "/" + file).value() == h.fs.read(r2 + "/" + file).value());
    CHECK(h.fs.read(r1 + "/data").value() == ev.data);
    CHECK(h.fs.read(r1 + "/reason").value() == "no_match");
    CHECK(h.fs.read(r1 + "/in_port").value() == "3");

    // records are immutable; consuming means removing
    CHECK(h.fs.write(r1 + "/data", "x").error() == Errc::permission_denied);
    REQUIRE(h.fs.ack_event(r1).ok());
    CHECK(h.fs.list(b1.value()).value().empty());
    CHECK(h.fs.list(b2.value()).value().size() == 1);

    // no buffers open: silently dropped
    std::string sw2 = "/net/switches/00000000000000b2";
    REQUIRE(h.fs.mkdir(sw2).ok());
    CHECK(h.fs.enqueue_event(sw2, ev).ok());
}

TEST_CASE("all buffers hold byte-identical record sequences")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::vector<std::string> bufs;
    for (const char* app : {"one", "two", "three"})
        bufs.push_back(h.fs.open_event_buffer(kSw, app).value());

    std::mt19937 rng(77);
    for (int i = 0; i < 30; ++i) {
        EventIn ev;
        ev.in_port = uint16_t(rng() % 8 + 1);
        ev.reason = rng() % 2 ? "no_match" : "action";
        size_t len = rng() % 40;
        for (size_t j = 0; j < len; ++j) ev.data += char(rng());
        ev.total_len = ev.data.size();
        REQUIRE(h.fs.enqueue_event(kSw, ev).ok());
        if (rng() % 4 == 0) {
            // consuming from one buffer must not disturb the others
            auto names = h.fs.list(bufs[0]).value();
            if (!names.empty()) REQUIRE(h.fs.ack_event(bufs[0] + "/" + names[0]).ok());
        }
    }

    // the unconsumed buffers carry identical sequences, record for record
    auto base = h.fs.list(bufs[1]).value();
    CHECK(base == h.fs.list(bufs[2]).value());
    for (const auto& rec : base) {
        for (const char* f : {"buffer_id", "in_port", "reason", "total_len", "data"}) {
            CHECK(h.fs.read(bufs[1] + "/" + rec + "/" + f).value() ==
                  h.fs.read(bufs[2] + "/" + rec + "/" + f).value());
        }
    }
}

TEST_CASE("buffer overflow drops the oldest and leaves a marker file")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    REQUIRE(h.fs.open_event_buffer(kSw, "app").ok());
    std::string buf = std::string(kSw) + "/events/app";

    EventIn ev;
    ev.data = "x";
    for (int i = 0; i < 1025; ++i) REQUIRE(h.fs.enqueue_event(kSw, ev).ok());

    auto entries = h.fs.list(buf).value();
    size_t records = 0;
    bool overflowed = false;
    std::string oldest;
    for (const auto& e : entries) {
        if (e == "overflowed") {
            overflowed = true;
            continue;
        }
        if (oldest.empty()) oldest = e;
        ++records;
    }
    CHECK(records == 1024);
    CHECK(overflowed);
    // the very first record (lowest sequence) is the one that was dropped
    auto all = h.fs.list(buf).value();
    CHECK(std::find(all.begin(), all.end(), render_record_name(1)) == all.end());
}

TEST_CASE("port config values are validated")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    REQUIRE(h.fs.mkdir(std::string(kSw) + "/ports/2").ok());
    std::string down = std::string(kSw) + "/ports/2/config.port_down";
    CHECK(h.fs.write(down, "1").ok());
    CHECK(h.fs.write(down, "1\n").ok());  // echo appends a newline
    CHECK(h.fs.write(down, "2").error() == Errc::parse_error);
    CHECK(h.fs.write(std::string(kSw) + "/ports/2/hw_addr", "not-a-mac").error() ==
          Errc::parse_error);
    CHECK(h.fs.write(std::string(kSw) + "/ports/2/madeup", "1").error() == Errc::unknown_field);
}

TEST_CASE("peer links must point at ports")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    REQUIRE(h.fs.mkdir("/net/switches/00000000000000b2").ok());
    REQUIRE(h.fs.mkdir(std::string(kSw) + "/ports/1").ok());
    REQUIRE(h.fs.mkdir("/net/switches/00000000000000b2/ports/3").ok());

    std::string peer = std::string(kSw) + "/ports/1/peer";
    CHECK(h.fs.symlink(peer, "/net/switches/00000000000000b2").error() == Errc::invalid_name);
    REQUIRE(h.fs.symlink(peer, "/net/switches/00000000000000b2/ports/3").ok());
    CHECK(h.fs.readlink(peer).value() == "/net/switches/00000000000000b2/ports/3");
    // dangling is fine as long as the shape is a port
    CHECK(h.fs.symlink(peer, "/net/switches/00000000000000c3/ports/9").ok());
}

TEST_CASE("switch files accept only their grammar")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    CHECK(h.fs.write(std::string(kSw) + "/capabilities", "0x000000c7").ok());
    CHECK(h.fs.write(std::string(kSw) + "/n_buffers", "256").ok());
    CHECK(h.fs.write(std::string(kSw) + "/n_tables", "300").error() == Errc::range_error);
    CHECK(h.fs.write(std::string(kSw) + "/status", "connected").ok());
    CHECK(h.fs.write(std::string(kSw) + "/status", "sleepy").error() == Errc::parse_error);
    CHECK(h.fs.write(std::string(kSw) + "/randomfile", "1").error() == Errc::unknown_field);
}

TEST_CASE("packet-out records hold data, port and actions")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string rec = std::string(kSw) + "/packets_out/r1";
    REQUIRE(h.fs.mkdir(rec).ok());
    REQUIRE(h.fs.write(rec + "/data", "rawframe").ok());
    REQUIRE(h.fs.write(rec + "/in_port", "none").ok());
    REQUIRE(h.fs.write(rec + "/action.0.output", "2").ok());
    REQUIRE(h.fs.write(rec + "/action.1.output", "flood").ok());

    auto po = h.net.read_packet_out(rec);
    REQUIRE(po.ok());
    CHECK(po.value().data == "rawframe");
    CHECK(po.value().in_port == 0xffff);
    REQUIRE(po.value().actions.size() == 2);
    CHECK(po.value().actions[0].port == 2);

    CHECK(h.fs.write(rec + "/send", "yes").error() == Errc::parse_error);
    CHECK(h.fs.write(rec + "/send", "1").ok());

    std::string bad = std::string(kSw) + "/packets_out/r2";
    REQUIRE(h.fs.mkdir(bad).ok());
    CHECK(h.net.read_packet_out(bad).error() == Errc::validation_failed);  // no data file
}

TEST_CASE("renames keep schema classes and rekey committed images")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    std::string f = std::string(kSw) + "/flows/f";
    REQUIRE(h.fs.mkdir(f).ok());
    REQUIRE(h.fs.write(f + "/match.tp_dst", "22").ok());
    REQUIRE(h.fs.commit_flow(f).ok());

    REQUIRE(h.fs.rename(f, std::string(kSw) + "/flows/g").ok());
    CHECK(h.fs.committed_flow(std::string(kSw) + "/flows/g").ok());
    CHECK(h.fs.committed_flow(f).error() == Errc::not_found);

    // switch renames keep the dpid grammar
    CHECK(h.fs.rename(kSw, "/net/switches/zz").error() == Errc::invalid_name);
    REQUIRE(h.fs.rename(kSw, "/net/switches/00000000000000b9").ok());
    CHECK(h.fs.committed_flow("/net/switches/00000000000000b9/flows/g").ok());

    // cross-class renames are refused
    CHECK(h.fs.rename("/net/switches/00000000000000b9/flows/g",
                      "/net/switches/00000000000000b9/ports/1")
              .error() == Errc::invalid_name);
}

TEST_CASE("structure containers cannot be removed or written")
{
    Harness h;
    REQUIRE(h.fs.mkdir(kSw).ok());
    CHECK(h.fs.remove(std::string(kSw) + "/flows", true).error() == Errc::permission_denied);
    CHECK(h.fs.remove("/net", true).error() == Errc::permission_denied);
    CHECK(h.fs.write(std::string(kSw) + "/flows", "x").error() == Errc::is_a_directory);
    CHECK(h.fs.write("/net/switches/00000000000000ee", "x").error() == Errc::not_a_schema_point);
}
