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

#include <atomic>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "yanc/fs.hpp"
#include "yanc/schema/schema.hpp"

namespace yanc::remote {

// The store service: the schema-aware file surface over TCP, length-prefixed
// JSON frames. It is what the command-line tools and standalone daemons
// mount when no OS-level mount exists. Watch events are pushed
// asynchronously on the same connection.

/// Serves one Netfs to any number of clients from a background thread.
class StoreServer {
public:
    explicit StoreServer(schema::Netfs& net);
    ~StoreServer();

    /// port 0 binds an ephemeral port; the bound port is returned.
    Result<uint16_t> start(const std::string& host = "127.0.0.1", uint16_t port = 0);
    void stop();
    uint16_t port() const { return port_; }

private:
    struct Conn;
    void loop();
    std::string handle(Conn&, const std::string& request);
    void push_events(Conn&);

    schema::Netfs& net_;
    int listen_fd_ = -1;
    uint16_t port_ = 0;
    std::thread thread_;
    std::atomic<bool> stop_{false};
    std::vector<std::unique_ptr<Conn>> conns_;
};

/// Client-side binding of the Fs surface onto a store service endpoint.
/// One connection per instance; not safe for concurrent callers.
class RemoteFs : public Fs {
public:
    static Result<std::unique_ptr<RemoteFs>> connect(const std::string& endpoint,
                                                     std::string identity);
    ~RemoteFs() override;

    using Fs::enqueue_event;
    using Fs::mkdir;

    Status mkdir(std::string_view path, bool reserved) override;
    Status mkfile(std::string_view path) override;
    Result<std::string> read(std::string_view path) override;
    Status write(std::string_view path, std::string_view bytes) override;
    Status remove(std::string_view path, bool recursive) override;
    Status rename(std::string_view old_path, std::string_view new_path) override;
    Status symlink(std::string_view path, std::string_view target) override;
    Result<std::string> readlink(std::string_view path) override;
    Result<std::vector<std::string>> list(std::string_view path) override;
    Result<store::NodeInfo> stat(std::string_view path) override;
    Result<std::shared_ptr<FsWatch>> watch(std::string_view path, bool recursive,
                                           size_t capacity) override;
    Status mk_semantic(std::string_view path) override;
    Status rm_semantic(std::string_view path) override;
    Result<uint64_t> commit_flow(std::string_view flow_path) override;
    Result<schema::FlowImage> committed_flow(std::string_view flow_path) override;
    Result<std::string> open_event_buffer(std::string_view switch_path,
                                          std::string_view app) override;
    Status enqueue_event(std::string_view switch_path, const schema::EventIn& ev,
                         std::string_view forced_name) override;
    Status ack_event(std::string_view record_path) override;
    std::string identity() const override { return identity_; }

private:
    friend class RemoteWatch;
    RemoteFs(int fd, std::string identity) : fd_(fd), identity_(std::move(identity)) {}

    // sends a request and waits for its reply, stashing pushed events
    Result<std::string> call(const std::string& request_json, uint64_t id);
    Result<std::string> wait_frame(std::chrono::milliseconds timeout);
    void unwatch(uint64_t wid);
    std::optional<store::ChangeEvent> next_event(uint64_t wid, std::chrono::milliseconds timeout);

    int fd_ = -1;
    std::string identity_;
    std::string rx_;
    uint64_t next_id_ = 1;
    std::map<uint64_t, std::deque<store::ChangeEvent>> pending_events_;
};

}  // namespace yanc::remote
