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

#include <algorithm>

#include "yanc/ofp/vendor_stats.hpp"
#include "yanc/sim/fabric.hpp"

namespace yanc::sim {

using namespace ofp;

SimSwitch::SimSwitch(uint64_t dpid, std::vector<uint16_t> port_numbers) : dpid_(dpid)
{
    for (uint16_t no : port_numbers) {
        SimPort p;
        p.port_no = no;
        // locally administered address derived from dpid and port
        p.hw_addr = Mac{{0x02, 0x00, uint8_t(dpid >> 16), uint8_t(dpid >> 8), uint8_t(dpid),
                         uint8_t(no)}};
        ports_.emplace(no, p);
    }
}

SimPort* SimSwitch::port(uint16_t no)
{
    auto it = ports_.find(no);
    return it == ports_.end() ? nullptr : &it->second;
}

void SimSwitch::connect(driver::TransportRef t)
{
    transport_ = std::move(t);
    decoder_ = Decoder{};
    transport_->send(serialize(Hello{++xid_}).value());
}

void SimSwitch::disconnect()
{
    if (transport_) transport_->close();
    transport_.reset();
}

bool SimSwitch::connected() const { return transport_ && transport_->alive(); }

std::vector<PhyPort> SimSwitch::phy_ports() const
{
    std::vector<PhyPort> out;
    for (const auto& [no, p] : ports_) {
        PhyPort w;
        w.port_no = no;
        w.hw_addr = p.hw_addr;
        w.name = "p" + std::to_string(no);
        w.config = p.admin_down ? kPortConfigDown : 0;
        w.state = 0;
        out.push_back(std::move(w));
    }
    return out;
}

size_t SimSwitch::pump()
{
    if (!transport_) return 0;
    size_t work = 0;
    std::string rx = transport_->drain_rx();
    if (!rx.empty()) decoder_.feed(rx);
    for (;;) {
        auto next = decoder_.next();
        if (!next.ok()) break;  // bad frame: drop and move on
        if (!next.value().has_value()) break;
        handle(*next.value());
        ++work;
    }
    return work;
}

void SimSwitch::handle(const OfMessage& msg)
{
    if (std::holds_alternative<Hello>(msg)) return;
    if (const auto* echo = std::get_if<EchoRequest>(&msg)) {
        transport_->send(serialize(EchoReply{echo->xid, echo->data}).value());
        return;
    }
    if (std::holds_alternative<FeaturesRequest>(msg)) {
        FeaturesReply reply;
        reply.xid = xid_of(msg);
        reply.datapath_id = dpid_;
        reply.n_buffers = 256;
        reply.n_tables = 1;
        reply.capabilities = 0;
        reply.actions = 0x31;  // output, set_dl_src, set_dl_dst
        reply.ports = phy_ports();
        transport_->send(serialize(reply).value());
        return;
    }
    if (const auto* fm = std::get_if<FlowMod>(&msg)) {
        handle_flow_mod(*fm);
        return;
    }
    if (const auto* po = std::get_if<PacketOut>(&msg)) {
        apply_actions(po->actions, po->in_port, po->data);
        return;
    }
    if (const auto* pm = std::get_if<PortMod>(&msg)) {
        if (auto* p = port(pm->port_no)) {
            if (pm->mask & kPortConfigDown)
                p->admin_down = (pm->config & kPortConfigDown) != 0;
            PortStatus st;
            st.xid = ++xid_;
            st.reason = kPortModify;
            for (const auto& w : phy_ports())
                if (w.port_no == pm->port_no) st.port = w;
            transport_->send(serialize(st).value());
        }
        return;
    }
    // everything else is ignored
}

TableEntry* SimSwitch::lookup(const HeaderTuple& pkt)
{
    TableEntry* exact = nullptr;
    TableEntry* wild = nullptr;
    for (auto& e : table_) {
        if (!match_covers(e.match, pkt)) continue;
        if (e.match.is_exact()) {
            if (!exact || e.order < exact->order) exact = &e;
        } else if (!wild || e.priority > wild->priority ||
                   (e.priority == wild->priority && e.order < wild->order)) {
            wild = &e;
        }
    }
    return exact ? exact : wild;
}

bool match_subsumes(const OfMatch& wide, const OfMatch& narrow)
{
    const uint32_t ww = wide.wildcards, nw = narrow.wildcards;
    auto field = [&](uint32_t bit, auto wv, auto nv) {
        if (ww & bit) return true;        // wide doesn't care
        if (nw & bit) return false;       // narrow is looser here
        return wv == nv;
    };
    if (!field(fw::in_port, wide.in_port, narrow.in_port)) return false;
    if (!field(fw::dl_src, wide.dl_src, narrow.dl_src)) return false;
    if (!field(fw::dl_dst, wide.dl_dst, narrow.dl_dst)) return false;
    if (!field(fw::dl_vlan, wide.dl_vlan, narrow.dl_vlan)) return false;
    if (!field(fw::dl_vlan_pcp, wide.dl_vlan_pcp, narrow.dl_vlan_pcp)) return false;
    if (!field(fw::dl_type, wide.dl_type, narrow.dl_type)) return false;
    if (!field(fw::nw_tos, wide.nw_tos, narrow.nw_tos)) return false;
    if (!field(fw::nw_proto, wide.nw_proto, narrow.nw_proto)) return false;
    if (!field(fw::tp_src, wide.tp_src, narrow.tp_src)) return false;
    if (!field(fw::tp_dst, wide.tp_dst, narrow.tp_dst)) return false;

    auto prefix_ok = [](uint8_t wide_bits, uint32_t wide_addr, uint8_t narrow_bits,
                        uint32_t narrow_addr) {
        if (wide_bits >= 32) return true;
        if (narrow_bits > wide_bits) return false;  // narrow has the shorter prefix
        uint32_t mask = wide_bits == 0 ? ~uint32_t(0) : ~uint32_t(0) << wide_bits;
        return (wide_addr & mask) == (narrow_addr & mask);
    };
    if (!prefix_ok(wide.nw_src_bits(), wide.nw_src, narrow.nw_src_bits(), narrow.nw_src))
        return false;
    if (!prefix_ok(wide.nw_dst_bits(), wide.nw_dst, narrow.nw_dst_bits(), narrow.nw_dst))
        return false;
    return true;
}

namespace {

bool outputs_to(const TableEntry& e, uint16_t port)
{
    for (const auto& a : e.actions) {
        if (const auto* o = std::get_if<ActionOutput>(&a)) {
            if (o->port == port) return true;
        }
    }
    return false;
}

}  // namespace

void SimSwitch::handle_flow_mod(const FlowMod& fm)
{
    switch (fm.command) {
        case FlowModCommand::add: {
            std::erase_if(table_, [&](const TableEntry& e) {
                return e.match == fm.match && e.priority == fm.priority;
            });
            TableEntry e;
            e.match = fm.match;
            e.priority = fm.priority;
            e.actions = fm.actions;
            e.idle_timeout = fm.idle_timeout;
            e.hard_timeout = fm.hard_timeout;
            e.order = next_order_++;
            table_.push_back(std::move(e));
            break;
        }
        case FlowModCommand::modify:
        case FlowModCommand::modify_strict: {
            bool strict = fm.command == FlowModCommand::modify_strict;
            bool touched = false;
            for (auto& e : table_) {
                bool hit = strict ? (e.match == fm.match && e.priority == fm.priority)
                                  : e.match == fm.match;
                if (hit) {
                    e.actions = fm.actions;  // counters survive a modify
                    e.idle_timeout = fm.idle_timeout;
                    e.hard_timeout = fm.hard_timeout;
                    touched = true;
                }
            }
            if (!touched) {
                FlowMod add = fm;
                add.command = FlowModCommand::add;
                handle_flow_mod(add);
            }
            break;
        }
        case FlowModCommand::remove: {
            std::erase_if(table_, [&](const TableEntry& e) {
                if (!match_subsumes(fm.match, e.match)) return false;
                if (fm.out_port != kPortNone && !outputs_to(e, fm.out_port)) return false;
                return true;
            });
            break;
        }
        case FlowModCommand::remove_strict: {
            std::erase_if(table_, [&](const TableEntry& e) {
                if (e.match != fm.match || e.priority != fm.priority) return false;
                if (fm.out_port != kPortNone && !outputs_to(e, fm.out_port)) return false;
                return true;
            });
            break;
        }
        default:
            ++unknown_commands;
    }
}

void SimSwitch::emit(uint16_t port_no, std::string_view frame)
{
    auto* p = port(port_no);
    if (!p || p->admin_down) return;
    p->tx_packets++;
    if (on_emit) on_emit(port_no, frame);
}

void SimSwitch::apply_actions(const std::vector<Action>& actions, uint16_t in_port,
                              std::string frame)
{
    for (const auto& a : actions) {
        if (const auto* out = std::get_if<ActionOutput>(&a)) {
            uint16_t target = out->port;
            if (target == kPortController) {
                emit_packet_in(frame, in_port, kReasonAction);
            } else if (target == kPortFlood || target == kPortAll) {
                for (const auto& [no, p] : ports_) {
                    if (no == in_port || p.admin_down) continue;
                    emit(no, frame);
                }
            } else if (target == kPortInPort) {
                emit(in_port, frame);
            } else if (target <= kPortMax) {
                emit(target, frame);
            }
            // local/none and the rest are dropped
        } else if (const auto* ss = std::get_if<ActionSetDlSrc>(&a)) {
            if (frame.size() >= 12)
                std::copy(ss->mac.bytes.begin(), ss->mac.bytes.end(), frame.begin() + 6);
        } else if (const auto* sd = std::get_if<ActionSetDlDst>(&a)) {
            if (frame.size() >= 12)
                std::copy(sd->mac.bytes.begin(), sd->mac.bytes.end(), frame.begin());
        }
        // unknown actions are ignored
    }
}

void SimSwitch::emit_packet_in(std::string_view frame, uint16_t in_port, uint8_t reason)
{
    ++total_packet_ins;
    if (reason == kReasonNoMatch) ++miss_packet_ins;
    if (on_packet_in) on_packet_in(in_port, reason, frame);
    if (connected()) {
        PacketIn pi;
        pi.xid = ++xid_;
        pi.buffer_id = kBufferNone;  // full frames inline, no buffering
        pi.total_len = uint16_t(frame.size());
        pi.in_port = in_port;
        pi.reason = reason;
        pi.data = std::string(frame);
        transport_->send(serialize(pi).value());
    }
}

void SimSwitch::receive_frame(uint16_t in_port, std::string_view frame)
{
    ++receptions;
    if (auto* p = port(in_port)) p->rx_packets++;
    HeaderTuple pkt = parse_packet(frame, in_port);
    TableEntry* entry = lookup(pkt);
    if (!entry) {
        emit_packet_in(frame, in_port, kReasonNoMatch);
        return;
    }
    entry->packet_count++;
    entry->byte_count += frame.size();
    apply_actions(entry->actions, in_port, std::string(frame));
}

void SimSwitch::push_counters()
{
    if (!connected()) return;
    StatsPush push;
    for (const auto& e : table_)
        push.flows.push_back(FlowCounters{e.match, e.priority, e.packet_count, e.byte_count});
    for (const auto& [no, p] : ports_)
        push.ports.push_back(PortCounters{no, p.rx_packets, p.tx_packets});
    transport_->send(serialize(OfMessage{encode_stats_push(push, ++xid_)}).value());
}

}  // namespace yanc::sim
