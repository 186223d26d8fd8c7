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

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "yanc/driver/transport.hpp"
#include "yanc/ofp/codec.hpp"
#include "yanc/ofp/packet.hpp"

namespace yanc::sim {

struct TableEntry {
    ofp::OfMatch match;
    uint16_t priority = 0x8000;
    std::vector<ofp::Action> actions;
    uint16_t idle_timeout = 0;  // stored, never fired in this fabric
    uint16_t hard_timeout = 0;
    uint64_t packet_count = 0;
    uint64_t byte_count = 0;
    uint64_t order = 0;  // insertion tiebreak
};

struct SimPort {
    uint16_t port_no = 0;
    Mac hw_addr{};
    bool admin_down = false;
    uint64_t rx_packets = 0;
    uint64_t tx_packets = 0;
};

/// A software OpenFlow 1.0 switch. Lookup precedence: fully specified
/// entries always beat wildcarded ones; among wildcarded entries the highest
/// priority wins and ties break by earliest insertion.
class SimSwitch {
public:
    SimSwitch(uint64_t dpid, std::vector<uint16_t> port_numbers);

    uint64_t dpid() const { return dpid_; }
    const std::map<uint16_t, SimPort>& ports() const { return ports_; }
    SimPort* port(uint16_t no);
    const std::vector<TableEntry>& table() const { return table_; }

    void connect(driver::TransportRef t);  // says Hello immediately
    void disconnect();
    bool connected() const;
    size_t pump();  // handle buffered controller messages

    /// Runs one frame through the pipeline: lookup, counters, actions or a
    /// no_match packet-in.
    void receive_frame(uint16_t in_port, std::string_view frame);

    TableEntry* lookup(const ofp::HeaderTuple& pkt);
    void handle_flow_mod(const ofp::FlowMod& fm);

    void emit_packet_in(std::string_view frame, uint16_t in_port, uint8_t reason);

    /// Pushes per-entry counters to the controller as a vendor message (the
    /// stats side contract; see vendor_stats.hpp).
    void push_counters();

    uint64_t receptions = 0;
    uint64_t miss_packet_ins = 0;
    uint64_t total_packet_ins = 0;
    uint64_t unknown_commands = 0;

    // fabric wiring
    std::function<void(uint16_t out_port, std::string_view frame)> on_emit;
    std::function<void(uint16_t in_port, uint8_t reason, std::string_view frame)> on_packet_in;

private:
    void handle(const ofp::OfMessage& msg);
    void apply_actions(const std::vector<ofp::Action>& actions, uint16_t in_port,
                       std::string frame);
    void emit(uint16_t port_no, std::string_view frame);
    std::vector<ofp::PhyPort> phy_ports() const;

    uint64_t dpid_;
    std::map<uint16_t, SimPort> ports_;
    std::vector<TableEntry> table_;
    uint64_t next_order_ = 0;
    driver::TransportRef transport_;
    ofp::Decoder decoder_;
    uint32_t xid_ = 0;
};

/// Wire-level subsumption: every packet matched by `narrow` is matched by
/// `wide` (the delete/modify selection rule).
bool match_subsumes(const ofp::OfMatch& wide, const ofp::OfMatch& narrow);

struct TopoSpec {
    struct Link {
        uint64_t a;
        uint16_t ap;
        uint64_t b;
        uint16_t bp;
    };
    std::vector<std::pair<uint64_t, uint16_t>> switches;  // dpid, port count
    std::vector<Link> links;
};

/// Line format: `switch <dpid-hex> ports=<n>` and
/// `link <dpidA>:<port> <dpidB>:<port>`; '#' starts a comment.
Result<TopoSpec> parse_topo(std::string_view text);

/// Switches plus a symmetric, port-exclusive virtual link fabric with
/// deterministic FIFO delivery. The fabric advances only when driven.
class Fabric {
public:
    struct Emission {
        uint64_t dpid;
        uint16_t port;
        std::string frame;
        bool to_link;  // false: left the fabric on an edge port
    };
    struct Pin {
        uint64_t dpid;
        uint16_t port;
        uint8_t reason;
        std::string frame;
    };
    struct Report {
        std::vector<Emission> emissions;
        std::vector<Pin> packet_ins;
        uint64_t receptions = 0;
        bool hop_limit = false;

        std::vector<Emission> egress() const;
        void merge(const Report& other);
    };

    SimSwitch& add_switch(uint64_t dpid, uint16_t n_ports);
    Status apply(const TopoSpec&);
    Status link(uint64_t a, uint16_t ap, uint64_t b, uint16_t bp);
    Status unlink(uint64_t a, uint16_t ap);
    std::optional<std::pair<uint64_t, uint16_t>> peer_of(uint64_t dpid, uint16_t port) const;

    SimSwitch* find(uint64_t dpid);
    std::vector<uint64_t> dpids() const;

    /// Injects one frame and runs the pipeline to quiescence (hop limit 64).
    Result<Report> inject(uint64_t dpid, uint16_t port, std::string frame);

    /// Drains every switch's controller messages and delivers in-flight
    /// frames; returns the amount of work done (0 == quiescent).
    size_t pump();

    void connect_all(const std::function<driver::TransportRef(uint64_t)>& dial);
    Report take_report();

private:
    struct Pending {
        uint64_t dpid;
        uint16_t port;
        std::string frame;
    };

    Report run(uint64_t budget);
    void wire(SimSwitch& sw);

    std::map<uint64_t, std::unique_ptr<SimSwitch>> switches_;
    std::map<std::pair<uint64_t, uint16_t>, std::pair<uint64_t, uint16_t>> links_;
    std::deque<Pending> pending_;
    Report current_;    // scratch for the run in progress
    Report cumulative_; // everything since the last take_report()
};

}  // namespace yanc::sim
