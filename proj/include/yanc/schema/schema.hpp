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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yanc/schema/fields.hpp"
#include "yanc/store/store.hpp"

namespace yanc::schema {

/// Structural role of a path inside the managed tree.
enum class PathClass {
    outside,        // not under the net root; plain tree
    net_root,       // the root view directory
    container,      // hosts/ switches/ views/ ports/ flows/ events/ packets_out/
    view,           // views/<name>
    view_member,    // directly under a view dir (".slice", custom entries)
    sw,             // switches/<dpid>
    switch_member,  // capabilities, n_buffers, n_tables, status
    port,           // ports/<n>
    port_member,    // hw_addr, config.*, stats.*, peer
    flow,           // flows/<name>
    flow_member,    // match.*, action.*, priority, version, ...
    buffer,         // events/<app>
    record,         // events/<app>/<seq> (and the overflowed marker file)
    record_member,  // files inside a record
    pout_record,    // packets_out/<name>
    pout_member,    // data, in_port, action.*, send
    free,           // anything deeper / under hosts
};

PathClass classify_under(std::string_view net_root, std::string_view path);

/// One packet-in, as fanned into every open buffer of a switch.
struct EventIn {
    std::string buffer_id = "none";
    uint16_t in_port = 0;
    std::string reason = "no_match";  // or "action"
    uint64_t total_len = 0;
    std::string data;
};

struct PacketOutRecord {
    std::string data;
    uint16_t in_port = 0xffff;  // none
    uint32_t buffer_id = 0xffffffff;
    std::vector<FlowAction> actions;
};

/// The schema layer: file-style operations over a Store with the /net layout
/// semantics applied: semantic mkdir, recursive typed removal, per-field
/// validation, the version-commit protocol and per-application packet-in
/// buffers. All callers (drivers, system apps, CLIs) go through here.
class Netfs {
public:
    struct Options {
        std::string net_root = "/net";
        size_t buffer_capacity = 1024;
    };

    explicit Netfs(store::Store& store) : Netfs(store, Options{}) {}
    Netfs(store::Store& store, Options opt);

    store::Store& store() { return store_; }
    const std::string& net_root() const { return opt_.net_root; }
    PathClass classify(std::string_view path) const;

    // file-style surface; `identity` is the calling application
    Status mkdir(std::string_view path, std::string_view identity, bool reserved_names = false);
    Status mkfile(std::string_view path, std::string_view identity);
    Result<std::string> read(std::string_view path) const;
    Status write(std::string_view path, std::string_view bytes, std::string_view identity);
    Status remove(std::string_view path, bool recursive, std::string_view identity);
    Status rename(std::string_view old_path, std::string_view new_path, std::string_view identity,
                  bool reserved_names = false);
    Status symlink(std::string_view path, std::string_view target, std::string_view identity);
    Result<std::string> readlink(std::string_view path) const;
    Result<std::vector<std::string>> list(std::string_view path) const;
    Result<store::NodeInfo> stat(std::string_view path) const;
    Result<store::WatchRef> watch(std::string_view path, bool recursive, size_t capacity);

    // schema operations
    Status mk_semantic(std::string_view path, std::string_view identity,
                       bool reserved_names = false);
    Status rm_semantic(std::string_view path);
    Status write_flow_field(std::string_view flow_path, std::string_view field,
                            std::string_view text, std::string_view identity);
    Result<uint64_t> commit_flow(std::string_view flow_path, std::string_view identity);
    Result<FlowImage> committed_flow(std::string_view flow_path) const;
    std::vector<std::pair<std::string, FlowImage>> committed_under(std::string_view prefix) const;

    Result<std::string> open_event_buffer(std::string_view switch_path, std::string_view app,
                                          std::string_view identity);
    Status enqueue_event(std::string_view switch_path, const EventIn& ev,
                         std::string_view forced_name = {});
    Status ack_event(std::string_view record_path);

    Result<PacketOutRecord> read_packet_out(std::string_view record_path) const;

private:
    Status mk_semantic_txn(store::Store::Txn&, std::string_view path, PathClass cls,
                           std::string_view identity, bool reserved_names);
    Result<uint64_t> commit_txn(store::Store::Txn&, std::string_view flow_dir,
                                std::string_view identity);
    Status validate_member_write(PathClass cls, std::string_view name, std::string_view value) const;
    void forget_images(std::string_view path);
    void rekey_images(std::string_view old_path, std::string_view new_path);

    store::Store& store_;
    Options opt_;
    mutable std::mutex meta_mu_;
    std::map<std::string, FlowImage> images_;  // canonical flow path -> committed image
    uint64_t record_seq_ = 0;
};

std::string render_record_name(uint64_t seq);  // 20-digit zero-padded

}  // namespace yanc::schema
