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

#include "yanc/apps/routerd.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>

#include "yanc/path.hpp"
#include "yanc/util.hpp"

namespace yanc::apps {

namespace {

constexpr const char* kBufferName = "routerd";

uint64_t fnv1a(std::string_view data)
{
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

schema::FlowMatch exact_match_for(const ofp::HeaderTuple& h)
{
    schema::FlowMatch m;
    m.in_port = h.in_port;
    m.dl_src = h.dl_src;
    m.dl_dst = h.dl_dst;
    m.dl_vlan = h.dl_vlan;  // kVlanUntagged pins untagged frames exactly
    m.dl_vlan_pcp = h.dl_vlan_pcp;
    m.dl_type = h.dl_type;
    if (h.has_l3) {
        m.nw_tos = h.nw_tos;
        m.nw_proto = h.nw_proto;
        m.nw_src = Cidr{h.nw_src, 32};
        m.nw_dst = Cidr{h.nw_dst, 32};
        if (h.has_l4) {
            m.tp_src = h.tp_src;
            m.tp_dst = h.tp_dst;
        }
    }
    return m;
}

Routerd::Topology Routerd::load_topology()
{
    Topology topo;
    std::string switches_dir = path::join(opt_.net_root, "switches");
    auto switches = fs_.list(switches_dir);
    if (!switches) return topo;

    for (const auto& sw : switches.value()) {
        std::string sw_path = path::join(switches_dir, sw);
        auto ports = fs_.list(path::join(sw_path, "ports"));
        if (!ports) continue;
        topo.adj[sw_path];
        for (const auto& port : ports.value()) {
            auto port_no = parse_uint(port, 65535);
            if (!port_no) continue;
            std::string pdir = path::join(path::join(sw_path, "ports"), port);
            bool down = false;
            if (auto d = fs_.read(path::join(pdir, "config.port_down")))
                down = chomp(d.value()) == "1";
            if (down) continue;
            auto peer = fs_.readlink(path::join(pdir, "peer"));
            if (peer) {
                // target shape: .../switches/<dpid>/ports/<port>
                std::string target = peer.value();
                std::string_view peer_port = path::basename(target);
                std::string_view peer_sw = path::parent(path::parent(target));
                auto pn = parse_uint(peer_port, 65535);
                if (pn && fs_.stat(target).ok()) {
                    topo.adj[sw_path][uint16_t(port_no.value())] = {std::string(peer_sw),
                                                                    uint16_t(pn.value())};
                    continue;
                }
            }
            topo.edge_ports[sw_path].push_back(uint16_t(port_no.value()));
        }
    }

    // spanning tree over the peer graph, rooted at the smallest switch,
    // neighbors explored in (path, port) order for determinism
    if (!topo.adj.empty()) {
        std::set<std::string> seen;
        std::deque<std::string> queue;
        queue.push_back(topo.adj.begin()->first);
        seen.insert(queue.front());
        while (!queue.empty()) {
            std::string here = std::move(queue.front());
            queue.pop_front();
            for (const auto& [port, peer] : topo.adj[here]) {
                if (seen.count(peer.first)) continue;
                seen.insert(peer.first);
                topo.tree_ports[here].push_back(port);
                topo.tree_ports[peer.first].push_back(peer.second);
                queue.push_back(peer.first);
            }
        }
    }
    return topo;
}

size_t Routerd::poll()
{
    std::string switches_dir = path::join(opt_.net_root, "switches");
    auto switches = fs_.list(switches_dir);
    if (!switches) return 0;
    for (const auto& sw : switches.value())
        fs_.open_event_buffer(path::join(switches_dir, sw), kBufferName);

    Topology topo = load_topology();
    size_t handled = 0;
    for (const auto& sw : switches.value()) {
        std::string sw_path = path::join(switches_dir, sw);
        std::string buf = path::join(path::join(sw_path, "events"), kBufferName);
        auto records = fs_.list(buf);
        if (!records) continue;
        for (const auto& rec : records.value()) {
            std::string rpath = path::join(buf, rec);
            if (rec == "overflowed") {
                fs_.remove(rpath, false);
                continue;
            }
            auto reason = fs_.read(path::join(rpath, "reason"));
            auto in_port = fs_.read(path::join(rpath, "in_port"));
            auto data = fs_.read(path::join(rpath, "data"));
            fs_.ack_event(rpath);
            if (!reason || !in_port || !data) continue;
            if (chomp(reason.value()) != "no_match") continue;
            auto port_no = parse_uint(in_port.value(), 65535);
            if (!port_no) continue;
            handle_miss(topo, sw_path, uint16_t(port_no.value()), data.value());
            ++handled;
        }
    }
    return handled;
}

void Routerd::handle_miss(const Topology& topo, const std::string& sw_path, uint16_t in_port,
                          const std::string& frame)
{
    ofp::HeaderTuple h = ofp::parse_packet(frame, in_port);
    if (h.dl_type == ofp::kEthLldp) return;  // discovery traffic is topod's

    bool edge_ingress = true;
    if (auto it = topo.adj.find(sw_path); it != topo.adj.end())
        edge_ingress = !it->second.count(in_port);
    if (edge_ingress) macs_[h.dl_src] = MacEntry{sw_path, in_port, ++obs_counter_};

    auto dst = macs_.find(h.dl_dst);
    if (h.dl_dst.is_broadcast() || dst == macs_.end()) {
        // flood only at the source's own attachment switch: copies seen at
        // transit switches must not re-flood, or cyclic fabrics storm
        auto src = macs_.find(h.dl_src);
        if (src != macs_.end() && src->second.switch_path == sw_path &&
            src->second.port == in_port) {
            flood(topo, sw_path, in_port, frame);
        }
        return;
    }
    install_path(topo, sw_path, in_port, dst->second, h, frame);
}

void Routerd::flood(const Topology& topo, const std::string& sw_path, uint16_t in_port,
                    const std::string& frame)
{
    std::set<uint16_t> out;
    if (auto it = topo.edge_ports.find(sw_path); it != topo.edge_ports.end())
        out.insert(it->second.begin(), it->second.end());
    if (auto it = topo.tree_ports.find(sw_path); it != topo.tree_ports.end())
        out.insert(it->second.begin(), it->second.end());
    out.erase(in_port);
    if (out.empty()) return;

    std::string rec =
        path::join(path::join(sw_path, "packets_out"), "routerd" + std::to_string(++pout_seq_));
    if (!fs_.mkdir(rec)) return;
    fs_.write(path::join(rec, "data"), frame);
    fs_.write(path::join(rec, "in_port"), std::to_string(in_port));
    int index = 0;
    for (uint16_t port : out)
        fs_.write(path::join(rec, "action." + std::to_string(index++) + ".output"),
                  std::to_string(port));
    fs_.write(path::join(rec, "send"), "1");
    ++floods_sent_;
}

Status Routerd::commit_hop(const PathHop& hop, const ofp::HeaderTuple& tuple)
{
    ofp::HeaderTuple hop_tuple = tuple;
    hop_tuple.in_port = hop.in_port;
    schema::FlowMatch match = exact_match_for(hop_tuple);
    auto files = schema::files_from_match(match);
    files["priority"] = std::to_string(opt_.flow_priority);
    files["action.0.output"] = std::to_string(hop.out_port);

    // deterministic name: re-learning the same conversation rewrites the
    // same flow instead of stacking duplicates
    std::string blob = hop.switch_path;
    for (const auto& [k, v] : files) blob += "|" + k + "=" + v;
    char name[32];
    std::snprintf(name, sizeof name, "routerd-%016llx",
                  static_cast<unsigned long long>(fnv1a(blob)));
    std::string flow = path::join(path::join(hop.switch_path, "flows"), name);
    if (!fs_.stat(flow).ok()) {
        Status made = fs_.mkdir(flow);
        if (!made) return made;
    }
    for (const auto& [k, v] : files) {
        Status wrote = fs_.write(path::join(flow, k), v);
        if (!wrote) return wrote;
    }
    auto version = fs_.commit_flow(flow);
    return version ? Status{} : Status{version.error()};
}

void Routerd::packet_out(const std::string& sw_path, uint16_t out_port, const std::string& frame)
{
    std::string rec =
        path::join(path::join(sw_path, "packets_out"), "routerd" + std::to_string(++pout_seq_));
    if (!fs_.mkdir(rec)) return;
    fs_.write(path::join(rec, "data"), frame);
    fs_.write(path::join(rec, "in_port"), "none");
    fs_.write(path::join(rec, "action.0.output"), std::to_string(out_port));
    fs_.write(path::join(rec, "send"), "1");
}

void Routerd::install_path(const Topology& topo, const std::string& src_sw, uint16_t src_port,
                           const MacEntry& dst, const ofp::HeaderTuple& tuple,
                           const std::string& frame)
{
    // breadth-first over peer links, unit weights, deterministic expansion
    std::map<std::string, std::pair<std::string, uint16_t>> via;  // switch -> (prev, prev out)
    std::deque<std::string> queue;
    std::set<std::string> seen{src_sw};
    queue.push_back(src_sw);
    bool found = src_sw == dst.switch_path;
    while (!queue.empty() && !found) {
        std::string here = std::move(queue.front());
        queue.pop_front();
        auto it = topo.adj.find(here);
        if (it == topo.adj.end()) continue;
        for (const auto& [port, peer] : it->second) {
            if (seen.count(peer.first)) continue;
            seen.insert(peer.first);
            via[peer.first] = {here, port};
            if (peer.first == dst.switch_path) {
                found = true;
                break;
            }
            queue.push_back(peer.first);
        }
    }
    if (!found) {
        ++no_route_drops_;
        return;
    }

    // walk back collecting (switch, out_port), then forward-fill in_ports
    std::vector<std::pair<std::string, uint16_t>> reversed;  // switch, out_port
    std::string cursor = dst.switch_path;
    reversed.emplace_back(cursor, dst.port);
    while (cursor != src_sw) {
        auto [prev, out] = via.at(cursor);
        reversed.emplace_back(prev, out);
        cursor = prev;
    }

    std::vector<PathHop> hops;
    uint16_t in_port = src_port;
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
        PathHop hop;
        hop.switch_path = it->first;
        hop.in_port = in_port;
        hop.out_port = it->second;
        hops.push_back(hop);
        auto adj_it = topo.adj.find(it->first);
        if (adj_it != topo.adj.end()) {
            auto link = adj_it->second.find(it->second);
            if (link != adj_it->second.end()) in_port = link->second.second;
        }
    }

    for (const auto& hop : hops) {
        if (!commit_hop(hop, tuple)) {
            ++no_route_drops_;
            return;
        }
    }
    last_path_ = hops;
    ++paths_installed_;
    packet_out(hops.back().switch_path, hops.back().out_port, frame);
}

}  // namespace yanc::apps
