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

#include <map>
#include <string>
#include <vector>

#include "yanc/fs.hpp"
#include "yanc/ofp/packet.hpp"

namespace yanc::apps {

/// Where a MAC was last seen entering the network. Only edge ports (ports
/// without a peer link) count as attachment points, so flood copies crossing
/// the fabric never corrupt the table.
struct MacEntry {
    std::string switch_path;
    uint16_t port = 0;
    uint64_t last_seen = 0;  // observation counter
};

using MacTable = std::map<Mac, MacEntry>;

/// One hop of an installed path.
struct PathHop {
    std::string switch_path;
    uint16_t in_port = 0;
    uint16_t out_port = 0;
};

/// The reactive router: consumes table-miss records, learns source
/// attachment points, and for known destinations installs one exact-match
/// flow per hop along a shortest peer-link path, then packet-outs the
/// triggering frame at the last hop. Unknown destinations get a single
/// flood packet-out at the ingress switch, restricted to edge ports plus
/// the spanning tree of the discovered topology.
class Routerd {
public:
    struct Options {
        std::string net_root = "/net";
        uint16_t flow_priority = 32768;
    };

    explicit Routerd(Fs& fs) : Routerd(fs, Options{}) {}
    Routerd(Fs& fs, Options opt) : fs_(fs), opt_(std::move(opt)) {}

    /// Consumes every pending record once; returns how many were handled.
    size_t poll();

    const MacTable& macs() const { return macs_; }
    uint64_t floods_sent() const { return floods_sent_; }
    uint64_t paths_installed() const { return paths_installed_; }
    uint64_t no_route_drops() const { return no_route_drops_; }

    /// The last path this router committed (for inspection).
    const std::vector<PathHop>& last_path() const { return last_path_; }

private:
    struct Topology {
        // port -> (peer switch path, peer port), per switch
        std::map<std::string, std::map<uint16_t, std::pair<std::string, uint16_t>>> adj;
        std::map<std::string, std::vector<uint16_t>> edge_ports;
        std::map<std::string, std::vector<uint16_t>> tree_ports;  // spanning tree membership
    };

    Topology load_topology();
    void handle_miss(const Topology&, const std::string& sw_path, uint16_t in_port,
                     const std::string& frame);
    void flood(const Topology&, const std::string& sw_path, uint16_t in_port,
               const std::string& frame);
    void install_path(const Topology&, const std::string& src_sw, uint16_t src_port,
                      const MacEntry& dst, const ofp::HeaderTuple& tuple,
                      const std::string& frame);
    Status commit_hop(const PathHop&, const ofp::HeaderTuple&);
    void packet_out(const std::string& sw_path, uint16_t out_port, const std::string& frame);

    Fs& fs_;
    Options opt_;
    MacTable macs_;
    uint64_t obs_counter_ = 0;
    uint64_t pout_seq_ = 0;
    uint64_t floods_sent_ = 0;
    uint64_t paths_installed_ = 0;
    uint64_t no_route_drops_ = 0;
    std::vector<PathHop> last_path_;
};

/// Exact-match fields for a parsed frame: the full 12-tuple for TCP/UDP
/// over IPv4, the L2 subset with L3/L4 wildcarded otherwise.
schema::FlowMatch exact_match_for(const ofp::HeaderTuple&);

}  // namespace yanc::apps
