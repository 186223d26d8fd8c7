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

// simfab: the software switch fabric. Builds the topology from a file and
// dials the controller like real hardware would.
//
//   simfab --topo ring.topo --connect 127.0.0.1:6633

#include <CLI11.hpp>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "yanc/driver/transport.hpp"
#include "yanc/sim/fabric.hpp"
#include "yanc/util.hpp"

using namespace yanc;

namespace {

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"simfab - software switch fabric"};
    std::string topo_file;
    std::string connect = "127.0.0.1:6633";
    int interval_ms = 2;
    int stats_every = 0;  // pump cycles between counter pushes; 0 = never
    std::string inject;   // dpid:port:hexbytes, one-shot after boot
    app.add_option("--topo", topo_file, "topology description file")->required();
    app.add_option("--connect", connect, "controller endpoint")->capture_default_str();
    app.add_option("--interval", interval_ms, "pump interval (ms)")->capture_default_str();
    app.add_option("--stats-interval", stats_every, "pumps between counter pushes");
    app.add_option("--inject", inject, "inject a frame once: dpid:port:hexbytes");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(topo_file);
    if (!in.good()) {
        std::fprintf(stderr, "simfab: cannot read %s\n", topo_file.c_str());
        return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto spec = sim::parse_topo(ss.str());
    if (!spec) {
        std::fprintf(stderr, "simfab: bad topology file\n");
        return 2;
    }

    sim::Fabric fab;
    if (!fab.apply(spec.value())) {
        std::fprintf(stderr, "simfab: inconsistent topology\n");
        return 2;
    }

    auto ep = driver::parse_endpoint(connect);
    if (!ep) {
        std::fprintf(stderr, "simfab: bad endpoint %s\n", connect.c_str());
        return 2;
    }
    for (uint64_t dpid : fab.dpids()) {
        auto t = driver::TcpTransport::dial(ep.value().first, ep.value().second);
        if (!t) {
            std::fprintf(stderr, "simfab: cannot reach controller at %s\n", connect.c_str());
            return 3;
        }
        fab.find(dpid)->connect(t.value());
    }
    std::fprintf(stderr, "simfab: %zu switches up, controller %s\n", fab.dpids().size(),
                 connect.c_str());

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    bool injected = inject.empty();
    uint64_t cycles = 0;
    while (!g_stop) {
        size_t work = fab.pump();
        if (!injected && cycles > 50) {  // give the handshake a moment
            injected = true;
            size_t c1 = inject.find(':'), c2 = inject.find(':', c1 + 1);
            if (c1 != std::string::npos && c2 != std::string::npos) {
                auto dpid = parse_uint("0x" + inject.substr(0, c1), ~uint64_t(0));
                auto port = parse_uint(inject.substr(c1 + 1, c2 - c1 - 1), 65535);
                auto bytes = hex_undump(inject.substr(c2 + 1));
                if (dpid && port && bytes) {
                    fab.inject(dpid.value(), uint16_t(port.value()), *bytes);
                    std::fprintf(stderr, "simfab: injected %zu bytes\n", bytes->size());
                }
            }
        }
        if (stats_every > 0 && cycles % uint64_t(stats_every) == 0) {
            for (uint64_t dpid : fab.dpids()) fab.find(dpid)->push_counters();
        }
        ++cycles;
        if (!work) std::this_thread::sleep_for(std::chrono::milliseconds(interval_ms));
    }
    return 0;
}
