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

#include "yanc/driver/driver.hpp"

#include <cstdio>

#include "yanc/ofp/translate.hpp"
#include "yanc/ofp/vendor_stats.hpp"
#include "yanc/path.hpp"
#include "yanc/util.hpp"

namespace yanc::driver {

using namespace ofp;
using schema::PathClass;

namespace {

constexpr const char* kIdentity = "driver";

std::string hex32(uint32_t v)
{
    char buf[12];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

}  // namespace

Controller::Controller(schema::Netfs& fs, Options opt) : fs_(fs), opt_(std::move(opt)) {}

void Controller::attach(TransportRef t)
{
    auto s = std::make_unique<Session>();
    s->id = next_session_id_++;
    s->transport = std::move(t);
    s->state = Session::State::hello_sent;
    send(*s, Hello{++s->xid});
    sessions_.push_back(std::move(s));
}

bool Controller::send(Session& s, const OfMessage& msg)
{
    if (!s.transport || !s.transport->alive()) return false;
    auto bytes = serialize(msg);
    if (!bytes) return false;
    return s.transport->send(bytes.value());
}

size_t Controller::pump()
{
    size_t work = 0;
    for (auto& sp : sessions_) {
        Session& s = *sp;
        if (s.state == Session::State::dead) continue;
        if (!s.transport->alive()) {
            mark_dead(s, true);
            ++work;
            continue;
        }
        std::string rx = s.transport->drain_rx();
        if (!rx.empty()) s.decoder.feed(rx);
        for (;;) {
            auto next = s.decoder.next();
            if (!next.ok()) {
                // peers speaking another protocol version are abandoned
                mark_dead(s, true);
                ++work;
                break;
            }
            if (!next.value().has_value()) break;
            handle_message(s, *next.value());
            ++work;
            if (s.state == Session::State::dead) break;
        }
        if (s.state != Session::State::dead && !s.transport->alive()) {
            mark_dead(s, true);
            ++work;
        }
    }
    for (auto& [path, ctx] : switches_) work += drain_watches(*ctx);
    return work;
}

void Controller::handle_message(Session& s, const OfMessage& msg)
{
    if (std::holds_alternative<Hello>(msg)) {
        if (s.state == Session::State::hello_sent) {
            send(s, FeaturesRequest{++s.xid});
            s.state = Session::State::features_pending;
        }
        return;
    }
    if (const auto* echo = std::get_if<EchoRequest>(&msg)) {
        send(s, EchoReply{echo->xid, echo->data});  // replies reuse the request xid
        return;
    }
    if (const auto* feat = std::get_if<FeaturesReply>(&msg)) {
        if (s.state == Session::State::features_pending) on_features_reply(s, *feat);
        return;
    }
    if (s.state != Session::State::ready) return;

    if (const auto* pin = std::get_if<PacketIn>(&msg)) {
        schema::EventIn ev;
        ev.buffer_id = pin->buffer_id == kBufferNone ? "none" : std::to_string(pin->buffer_id);
        ev.in_port = pin->in_port;
        ev.reason = pin->reason == kReasonAction ? "action" : "no_match";
        ev.total_len = pin->total_len;
        ev.data = pin->data;
        fs_.enqueue_event(s.ctx->path, ev);
        return;
    }
    if (const auto* ps = std::get_if<PortStatus>(&msg)) {
        if (ps->reason == kPortDelete) {
            fs_.rm_semantic(
                path::join(path::join(s.ctx->path, "ports"), std::to_string(ps->port.port_no)));
        } else {
            materialize_port(s.ctx->path, ps->port);
        }
        return;
    }
    if (const auto* u = std::get_if<Unknown>(&msg)) {
        apply_stats(*s.ctx, *u);
        return;
    }
}

void Controller::materialize_port(const std::string& switch_path, const PhyPort& p)
{
    if (p.port_no > kPortMax) return;
    std::string ppath = path::join(path::join(switch_path, "ports"), std::to_string(p.port_no));
    bool fresh = !fs_.store().exists(ppath);
    if (fresh) fs_.mk_semantic(ppath, kIdentity);
    fs_.write(path::join(ppath, "hw_addr"), format_mac(p.hw_addr), kIdentity);
    fs_.write(path::join(ppath, "config.port_status"),
              (p.state & kPortStateLinkDown) ? "down" : "up", kIdentity);
    // admin state is application intent: seeded once, never overwritten
    if (fresh)
        fs_.write(path::join(ppath, "config.port_down"),
                  (p.config & kPortConfigDown) ? "1" : "0", kIdentity);
}

void Controller::on_features_reply(Session& s, const FeaturesReply& feat)
{
    // one session per dpid: a newer connection supersedes the old one
    if (auto it = by_dpid_.find(feat.datapath_id); it != by_dpid_.end()) {
        Session* old = it->second;
        if (old != &s && old->state != Session::State::dead) mark_dead(*old, false);
    }

    s.dpid = feat.datapath_id;
    by_dpid_[s.dpid] = &s;
    std::string sw_path = path::join(path::join(opt_.net_root, "switches"), dpid_to_name(s.dpid));

    if (!fs_.store().exists(sw_path)) fs_.mk_semantic(sw_path, kIdentity);
    fs_.write(path::join(sw_path, "capabilities"), hex32(feat.capabilities), kIdentity);
    fs_.write(path::join(sw_path, "n_buffers"), std::to_string(feat.n_buffers), kIdentity);
    fs_.write(path::join(sw_path, "n_tables"), std::to_string(int(feat.n_tables)), kIdentity);
    fs_.write(path::join(sw_path, "status"), "connected", kIdentity);
    for (const auto& p : feat.ports) materialize_port(sw_path, p);

    auto& ctx = switches_[sw_path];
    if (!ctx) {
        ctx = std::make_unique<SwitchCtx>();
        ctx->path = sw_path;
        ctx->flows_w = fs_.watch(path::join(sw_path, "flows"), true, opt_.watch_capacity).value();
        ctx->pouts_w =
            fs_.watch(path::join(sw_path, "packets_out"), true, opt_.watch_capacity).value();
        ctx->ports_w = fs_.watch(path::join(sw_path, "ports"), true, opt_.watch_capacity).value();
    }
    ctx->session = &s;
    s.ctx = ctx.get();
    s.state = Session::State::ready;

    // the tree is authoritative from here on; drop anything queued before
    // or during materialization (it is about to be reconciled wholesale)
    while (ctx->flows_w->poll()) {
    }
    while (ctx->ports_w->poll()) {
    }
    while (ctx->pouts_w->poll()) {
    }
    reconcile(s, feat);
}

ofp::FlowMod Controller::flow_mod_for(Session& s, const schema::FlowImage& img,
                                      FlowModCommand cmd)
{
    FlowMod fm;
    fm.xid = ++s.xid;
    fm.command = cmd;
    fm.match = match_from_schema(img.match);
    fm.idle_timeout = img.idle_timeout;
    fm.hard_timeout = img.hard_timeout;
    fm.priority = img.priority;
    if (cmd != FlowModCommand::remove_strict) fm.actions = actions_from_schema(img.actions);
    return fm;
}

// Wipe-and-replay: one wildcard-all delete, an add per committed flow, port
// admin reasserted from the files, pending packet-out triggers flushed.
void Controller::reconcile(Session& s, const FeaturesReply& feat)
{
    SwitchCtx& ctx = *s.ctx;
    FlowMod wipe;
    wipe.xid = ++s.xid;
    wipe.command = FlowModCommand::remove;
    wipe.match = match_all();
    wipe.priority = 0;
    send(s, wipe);

    ctx.sent.clear();
    for (auto& [fpath, img] : fs_.committed_under(path::join(ctx.path, "flows") + "/")) {
        send(s, flow_mod_for(s, img, FlowModCommand::add));
        ctx.sent[fpath] = img;
    }

    for (const auto& p : feat.ports) {
        auto desired = fs_.read(path::join(
            path::join(path::join(ctx.path, "ports"), std::to_string(p.port_no)),
            "config.port_down"));
        if (!desired) continue;
        bool want_down = chomp(desired.value()) == "1";
        bool is_down = (p.config & kPortConfigDown) != 0;
        if (want_down != is_down) {
            PortMod pm;
            pm.xid = ++s.xid;
            pm.port_no = p.port_no;
            pm.hw_addr = p.hw_addr;
            pm.config = want_down ? kPortConfigDown : 0;
            pm.mask = kPortConfigDown;
            send(s, pm);
        }
    }

    std::string pouts = path::join(ctx.path, "packets_out");
    if (auto records = fs_.list(pouts)) {
        for (const auto& r : records.value()) {
            std::string rpath = path::join(pouts, r);
            auto info = fs_.stat(rpath);
            if (!info || info.value().kind != store::NodeKind::directory) continue;
            auto trigger = fs_.read(path::join(rpath, "send"));
            if (trigger && chomp(trigger.value()) == "1") send_packet_out(ctx, rpath);
        }
    }
}

size_t Controller::drain_watches(SwitchCtx& ctx)
{
    size_t work = 0;
    bool ready = ctx.session && ctx.session->state == Session::State::ready;
    while (auto ev = ctx.flows_w->poll()) {
        ++work;
        if (!ready) continue;  // changes accumulate; reconnect reconciles
        std::string_view base = path::basename(ev->path);
        if (ev->kind == store::EventKind::modified && base == "version" &&
            fs_.classify(path::parent(ev->path)) == PathClass::flow) {
            sync_flow(ctx, std::string(path::parent(ev->path)));
        } else if (ev->kind == store::EventKind::removed &&
                   fs_.classify(ev->path) == PathClass::flow) {
            remove_flow(ctx, ev->path);
        } else if (ev->kind == store::EventKind::renamed &&
                   fs_.classify(ev->path) == PathClass::flow) {
            auto it = ctx.sent.find(ev->old_path);
            if (it != ctx.sent.end()) {
                ctx.sent[ev->path] = std::move(it->second);
                ctx.sent.erase(it);
            }
        }
    }
    while (auto ev = ctx.pouts_w->poll()) {
        ++work;
        if (ev->kind == store::EventKind::modified && path::basename(ev->path) == "send" &&
            fs_.classify(path::parent(ev->path)) == PathClass::pout_record) {
            auto val = fs_.read(ev->path);
            if (val && chomp(val.value()) == "1")
                send_packet_out(ctx, std::string(path::parent(ev->path)));
        }
    }
    while (auto ev = ctx.ports_w->poll()) {
        ++work;
        if (!ready) continue;
        if (ev->kind == store::EventKind::modified &&
            path::basename(ev->path) == "config.port_down" &&
            fs_.classify(path::parent(ev->path)) == PathClass::port) {
            apply_port_config(ctx, ev->path);
        }
    }
    return work;
}

void Controller::sync_flow(SwitchCtx& ctx, const std::string& flow_path)
{
    auto img = fs_.committed_flow(flow_path);
    if (!img) return;  // gone again before we got here
    Session& s = *ctx.session;

    OfMatch wire = match_from_schema(img.value().match);
    auto it = ctx.sent.find(flow_path);
    if (it == ctx.sent.end()) {
        send(s, flow_mod_for(s, img.value(), FlowModCommand::add));
    } else {
        OfMatch old_wire = match_from_schema(it->second.match);
        if (old_wire != wire || it->second.priority != img.value().priority) {
            // a flow mod cannot change its own match: delete the old row first
            send(s, flow_mod_for(s, it->second, FlowModCommand::remove_strict));
            send(s, flow_mod_for(s, img.value(), FlowModCommand::add));
        } else {
            send(s, flow_mod_for(s, img.value(), FlowModCommand::modify));
        }
    }
    ctx.sent[flow_path] = std::move(img.value());
}

void Controller::remove_flow(SwitchCtx& ctx, const std::string& flow_path)
{
    auto it = ctx.sent.find(flow_path);
    if (it == ctx.sent.end()) return;  // never committed, never sent
    send(*ctx.session, flow_mod_for(*ctx.session, it->second, FlowModCommand::remove_strict));
    ctx.sent.erase(it);
}

void Controller::send_packet_out(SwitchCtx& ctx, const std::string& record_path)
{
    auto write_error = [&](std::string_view text) {
        auto err = path::join(path::parent(record_path), "error");
        if (fs_.store().exists(err)) {
            fs_.store().write(err, text);
        } else {
            fs_.store().create(err, store::NodeKind::file, 0666, kIdentity, text);
        }
    };

    auto rec = fs_.read_packet_out(record_path);
    if (!rec) {
        fs_.rm_semantic(record_path);
        write_error("invalid record");
        return;
    }
    bool sent = false;
    if (ctx.session && ctx.session->state == Session::State::ready) {
        Session& s = *ctx.session;
        PacketOut po;
        po.xid = ++s.xid;
        po.buffer_id = rec.value().buffer_id;
        po.in_port = rec.value().in_port;
        po.actions = actions_from_schema(rec.value().actions);
        po.data = rec.value().data;
        sent = send(s, po);
    }
    fs_.rm_semantic(record_path);
    if (!sent) write_error("disconnected");
}

void Controller::apply_port_config(SwitchCtx& ctx, const std::string& port_down_path)
{
    auto val = fs_.read(port_down_path);
    if (!val) return;
    bool down = chomp(val.value()) == "1";
    std::string port_dir(path::parent(port_down_path));
    auto port_no = parse_uint(path::basename(port_dir), 65535);
    if (!port_no) return;
    Session& s = *ctx.session;
    PortMod pm;
    pm.xid = ++s.xid;
    pm.port_no = uint16_t(port_no.value());
    if (auto hw = fs_.read(path::join(port_dir, "hw_addr"))) {
        if (auto mac = parse_mac(hw.value())) pm.hw_addr = mac.value();
    }
    pm.config = down ? kPortConfigDown : 0;
    pm.mask = kPortConfigDown;
    send(s, pm);
}

void Controller::apply_stats(SwitchCtx& ctx, const Unknown& u)
{
    auto push = decode_stats_push(u);
    if (!push) return;
    for (const auto& fc : push->flows) {
        for (const auto& [fpath, img] : ctx.sent) {
            if (img.priority == fc.priority && match_from_schema(img.match) == fc.match) {
                fs_.write(path::join(fpath, "stats.packet_count"),
                          std::to_string(fc.packet_count), kIdentity);
                fs_.write(path::join(fpath, "stats.byte_count"), std::to_string(fc.byte_count),
                          kIdentity);
                break;
            }
        }
    }
    for (const auto& pc : push->ports) {
        std::string pdir = path::join(path::join(ctx.path, "ports"), std::to_string(pc.port_no));
        if (!fs_.store().exists(pdir)) continue;
        fs_.write(path::join(pdir, "stats.rx_packets"), std::to_string(pc.rx_packets), kIdentity);
        fs_.write(path::join(pdir, "stats.tx_packets"), std::to_string(pc.tx_packets), kIdentity);
    }
}

void Controller::mark_dead(Session& s, bool write_status)
{
    s.state = Session::State::dead;
    if (s.transport) s.transport->close();
    if (auto it = by_dpid_.find(s.dpid); it != by_dpid_.end() && it->second == &s)
        by_dpid_.erase(it);
    if (s.ctx && s.ctx->session == &s) {
        s.ctx->session = nullptr;
        s.ctx->sent.clear();  // the believed switch state died with the link
        if (write_status) fs_.write(path::join(s.ctx->path, "status"), "disconnected", kIdentity);
    }
    s.ctx = nullptr;
}

std::vector<Controller::SessionInfo> Controller::sessions() const
{
    std::vector<SessionInfo> out;
    for (const auto& s : sessions_) {
        SessionInfo info;
        info.id = s->id;
        info.dpid = s->dpid;
        switch (s->state) {
            case Session::State::hello_sent: info.state = "hello_sent"; break;
            case Session::State::features_pending: info.state = "features_pending"; break;
            case Session::State::ready: info.state = "ready"; break;
            case Session::State::dead: info.state = "dead"; break;
        }
        out.push_back(std::move(info));
    }
    return out;
}

size_t Controller::live_sessions() const
{
    size_t n = 0;
    for (const auto& s : sessions_)
        if (s->state != Session::State::dead) ++n;
    return n;
}

}  // namespace yanc::driver
