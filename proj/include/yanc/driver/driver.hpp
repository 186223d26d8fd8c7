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
#include <memory>
#include <string>
#include <vector>

#include "yanc/driver/transport.hpp"
#include "yanc/ofp/codec.hpp"
#include "yanc/schema/schema.hpp"

namespace yanc::driver {

/// The OpenFlow 1.0 device driver. Owns switch sessions over byte-stream
/// transports, performs the handshake, materializes switches and ports into
/// the tree, pushes committed flows down as FLOW_MODs and fans packet-ins up
/// into per-application event buffers.
///
/// Sessions come and go with their transports; the per-switch watch state
/// outlives them. On (re)connect the file tree is authoritative: the driver
/// wipes the switch table and replays every committed flow, reasserts port
/// admin state, and transmits any pending packet-out records.
///
/// The driver is explicitly driven: pump() processes whatever transport
/// bytes and store events are pending and returns the amount of work done.
class Controller {
public:
    struct Options {
        std::string net_root = "/net";
        size_t watch_capacity = 65536;
    };

    explicit Controller(schema::Netfs& fs) : Controller(fs, Options{}) {}
    Controller(schema::Netfs& fs, Options opt);

    /// Adopts a fresh transport for a dialing switch and opens the handshake.
    void attach(TransportRef t);

    size_t pump();

    struct SessionInfo {
        uint64_t id = 0;
        uint64_t dpid = 0;
        std::string state;
    };
    std::vector<SessionInfo> sessions() const;
    size_t live_sessions() const;

private:
    struct Session;

    struct SwitchCtx {
        std::string path;
        store::WatchRef flows_w;
        store::WatchRef pouts_w;
        store::WatchRef ports_w;
        std::map<std::string, schema::FlowImage> sent;  // believed switch state
        Session* session = nullptr;                     // nullptr while disconnected
    };

    struct Session {
        uint64_t id = 0;
        TransportRef transport;
        ofp::Decoder decoder;
        enum class State { hello_sent, features_pending, ready, dead } state = State::hello_sent;
        uint64_t dpid = 0;
        uint32_t xid = 0;  // per-session, monotonically increasing from 1
        SwitchCtx* ctx = nullptr;
    };
    bool send(Session&, const ofp::OfMessage&);
    void handle_message(Session&, const ofp::OfMessage&);
    void on_features_reply(Session&, const ofp::FeaturesReply&);
    void materialize_port(const std::string& switch_path, const ofp::PhyPort&);
    void reconcile(Session&, const ofp::FeaturesReply&);
    size_t drain_watches(SwitchCtx&);
    void sync_flow(SwitchCtx&, const std::string& flow_path);
    void remove_flow(SwitchCtx&, const std::string& flow_path);
    void send_packet_out(SwitchCtx&, const std::string& record_path);
    void apply_port_config(SwitchCtx&, const std::string& port_down_path);
    void apply_stats(SwitchCtx&, const ofp::Unknown&);
    void mark_dead(Session&, bool write_status);
    ofp::FlowMod flow_mod_for(Session&, const schema::FlowImage&, ofp::FlowModCommand);

    schema::Netfs& fs_;
    Options opt_;
    std::vector<std::unique_ptr<Session>> sessions_;
    std::map<std::string, std::unique_ptr<SwitchCtx>> switches_;  // by path
    std::map<uint64_t, Session*> by_dpid_;
    uint64_t next_session_id_ = 1;
};

}  // namespace yanc::driver
