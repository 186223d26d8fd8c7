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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <json.hpp>

#include "yanc/driver/transport.hpp"
#include "yanc/remote/remote.hpp"
#include "yanc/util.hpp"

namespace yanc::remote {

using nlohmann::json;
using namespace std::chrono_literals;

namespace {

constexpr auto kCallTimeout = std::chrono::milliseconds(5000);

std::string frame(const std::string& payload)
{
    std::string out;
    uint32_t len = uint32_t(payload.size());
    out += char(len >> 24);
    out += char(len >> 16);
    out += char(len >> 8);
    out += char(len);
    out += payload;
    return out;
}

std::optional<std::string> pop_frame(std::string& rx)
{
    if (rx.size() < 4) return std::nullopt;
    uint32_t len = (uint32_t(uint8_t(rx[0])) << 24) | (uint32_t(uint8_t(rx[1])) << 16) |
                   (uint32_t(uint8_t(rx[2])) << 8) | uint32_t(uint8_t(rx[3]));
    if (rx.size() < 4 + len) return std::nullopt;
    std::string payload = rx.substr(4, len);
    rx.erase(0, 4 + len);
    return payload;
}

bool send_all(int fd, std::string_view bytes)
{
    size_t off = 0;
    while (off < bytes.size()) {
        ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
        if (n <= 0) return false;
        off += size_t(n);
    }
    return true;
}

Errc err_of(const json& reply)
{
    return errc_from_name(reply.value("err", "protocol_error"));
}

}  // namespace

Result<std::unique_ptr<RemoteFs>> RemoteFs::connect(const std::string& endpoint,
                                                    std::string identity)
{
    auto parsed = driver::parse_endpoint(endpoint);
    if (!parsed) return Errc::store_unreachable;
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return Errc::store_unreachable;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(parsed.value().second);
    if (inet_pton(AF_INET, parsed.value().first.c_str(), &addr.sin_addr) != 1 ||
        ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        return Errc::store_unreachable;
    }
    int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);

    auto client = std::unique_ptr<RemoteFs>(new RemoteFs(fd, std::move(identity)));
    uint64_t id = client->next_id_++;
    json hello{{"id", id}, {"op", "hello"}, {"identity", client->identity_}};
    auto reply = client->call(hello.dump(), id);
    if (!reply) return reply.error();
    return client;
}

RemoteFs::~RemoteFs()
{
    if (fd_ >= 0) ::close(fd_);
}

Result<std::string> RemoteFs::wait_frame(std::chrono::milliseconds timeout)
{
    auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (auto payload = pop_frame(rx_)) return *payload;
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) return Errc::disconnected;  // timeout
        pollfd pfd{fd_, POLLIN, 0};
        int n = ::poll(&pfd, 1, int(left.count()));
        if (n < 0) return Errc::store_unreachable;
        if (n == 0) continue;
        char buf[16384];
        ssize_t got = ::recv(fd_, buf, sizeof buf, 0);
        if (got <= 0) return Errc::store_unreachable;
        rx_.append(buf, size_t(got));
    }
}

Result<std::string> RemoteFs::call(const std::string& request_json, uint64_t id)
{
    if (fd_ < 0) return Errc::store_unreachable;
    if (!send_all(fd_, frame(request_json))) return Errc::store_unreachable;
    for (;;) {
        auto payload = wait_frame(kCallTimeout);
        if (!payload) return payload.error();
        json msg = json::parse(payload.value(), nullptr, false);
        if (msg.is_discarded()) return Errc::protocol_error;
        if (msg.contains("event")) {
            auto& e = msg["event"];
            store::ChangeEvent ev;
            ev.seq = e.value("seq", 0ull);
            ev.path = e.value("path", "");
            ev.old_path = e.value("old", "");
            if (auto kind = store::event_kind_from_name(e.value("kind", ""))) ev.kind = *kind;
            pending_events_[e.value("watch", 0ull)].push_back(std::move(ev));
            continue;
        }
        if (msg.value("id", 0ull) != id) continue;  // stale reply
        if (!msg.value("ok", false)) return err_of(msg);
        return payload.value();
    }
}

class RemoteWatch : public FsWatch {
public:
    RemoteWatch(RemoteFs& fs, uint64_t wid) : fs_(fs), wid_(wid) {}
    ~RemoteWatch() override { fs_.unwatch(wid_); }

    std::optional<store::ChangeEvent> next(std::chrono::milliseconds timeout) override
    {
        return fs_.next_event(wid_, timeout);
    }
    std::optional<store::ChangeEvent> poll() override { return fs_.next_event(wid_, 0ms); }

private:
    RemoteFs& fs_;
    uint64_t wid_;
};

std::optional<store::ChangeEvent> RemoteFs::next_event(uint64_t wid,
                                                       std::chrono::milliseconds timeout)
{
    auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        auto& q = pending_events_[wid];
        if (!q.empty()) {
            store::ChangeEvent ev = std::move(q.front());
            q.pop_front();
            return ev;
        }
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        auto payload = wait_frame(left.count() > 0 ? left : 0ms);
        if (!payload) return std::nullopt;
        json msg = json::parse(payload.value(), nullptr, false);
        if (msg.is_discarded() || !msg.contains("event")) continue;
        auto& e = msg["event"];
        store::ChangeEvent ev;
        ev.seq = e.value("seq", 0ull);
        ev.path = e.value("path", "");
        ev.old_path = e.value("old", "");
        if (auto kind = store::event_kind_from_name(e.value("kind", ""))) ev.kind = *kind;
        pending_events_[e.value("watch", 0ull)].push_back(std::move(ev));
    }
}

void RemoteFs::unwatch(uint64_t wid)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "unwatch"}, {"watch", wid}};
    call(req.dump(), id);
    pending_events_.erase(wid);
}

// ----- op wrappers ------------------------------------------------------

namespace {

Status to_status(const Result<std::string>& reply)
{
    return reply ? Status{} : Status{reply.error()};
}

}  // namespace

Status RemoteFs::mkdir(std::string_view p, bool reserved)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "mkdir"}, {"path", std::string(p)}, {"reserved", reserved}};
    return to_status(call(req.dump(), id));
}

Status RemoteFs::mkfile(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "mkfile"}, {"path", std::string(p)}};
    return to_status(call(req.dump(), id));
}

Result<std::string> RemoteFs::read(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "read"}, {"path", std::string(p)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    auto data = base64_decode(json::parse(reply.value()).value("data", ""));
    if (!data) return Errc::protocol_error;
    return *data;
}

Status RemoteFs::write(std::string_view p, std::string_view bytes)
{
    uint64_t id = next_id_++;
    json req{{"id", id},
             {"op", "write"},
             {"path", std::string(p)},
             {"data", base64_encode(bytes)}};
    return to_status(call(req.dump(), id));
}

Status RemoteFs::remove(std::string_view p, bool recursive)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "remove"}, {"path", std::string(p)}, {"recursive", recursive}};
    return to_status(call(req.dump(), id));
}

Status RemoteFs::rename(std::string_view o, std::string_view n)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "rename"}, {"from", std::string(o)}, {"to", std::string(n)}};
    return to_status(call(req.dump(), id));
}

Status RemoteFs::symlink(std::string_view p, std::string_view target)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "symlink"}, {"path", std::string(p)}, {"target", std::string(target)}};
    return to_status(call(req.dump(), id));
}

Result<std::string> RemoteFs::readlink(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "readlink"}, {"path", std::string(p)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    return json::parse(reply.value()).value("target", "");
}

Result<std::vector<std::string>> RemoteFs::list(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "list"}, {"path", std::string(p)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    auto names = json::parse(reply.value()).value("names", std::vector<std::string>{});
    return names;
}

Result<store::NodeInfo> RemoteFs::stat(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "stat"}, {"path", std::string(p)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    json msg = json::parse(reply.value());
    store::NodeInfo info;
    std::string kind = msg.value("kind", "file");
    info.kind = kind == "dir"    ? store::NodeKind::directory
                : kind == "link" ? store::NodeKind::symlink
                                 : store::NodeKind::file;
    info.mode = uint16_t(msg.value("mode", 0));
    info.owner = msg.value("owner", "");
    info.mtime = msg.value("mtime", 0ull);
    info.size = msg.value("size", 0ull);
    return info;
}

Result<std::shared_ptr<FsWatch>> RemoteFs::watch(std::string_view p, bool recursive,
                                                 size_t capacity)
{
    uint64_t id = next_id_++;
    json req{{"id", id},
             {"op", "watch"},
             {"path", std::string(p)},
             {"recursive", recursive},
             {"capacity", capacity}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    uint64_t wid = json::parse(reply.value()).value("watch", 0ull);
    return std::shared_ptr<FsWatch>(new RemoteWatch(*this, wid));
}

Status RemoteFs::mk_semantic(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "mk_semantic"}, {"path", std::string(p)}};
    return to_status(call(req.dump(), id));
}

Status RemoteFs::rm_semantic(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "rm_semantic"}, {"path", std::string(p)}};
    return to_status(call(req.dump(), id));
}

Result<uint64_t> RemoteFs::commit_flow(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "commit"}, {"path", std::string(p)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    return json::parse(reply.value()).value("version", 0ull);
}

Result<schema::FlowImage> RemoteFs::committed_flow(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "committed"}, {"path", std::string(p)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    json image = json::parse(reply.value()).value("image", json::object());
    json file_obj = image.value("files", json::object());
    std::map<std::string, std::string> files;
    for (auto& [k, v] : file_obj.items()) files[k] = v.get<std::string>();
    auto img = schema::image_from_files(files);
    if (!img) return img.error();
    img.value().version = image.value("version", 0ull);
    return img.value();
}

Result<std::string> RemoteFs::open_event_buffer(std::string_view sw, std::string_view app)
{
    uint64_t id = next_id_++;
    json req{{"id", id},
             {"op", "open_buffer"},
             {"switch", std::string(sw)},
             {"app", std::string(app)}};
    auto reply = call(req.dump(), id);
    if (!reply) return reply.error();
    return json::parse(reply.value()).value("path", "");
}

Status RemoteFs::enqueue_event(std::string_view sw, const schema::EventIn& ev,
                               std::string_view forced_name)
{
    uint64_t id = next_id_++;
    json req{{"id", id},
             {"op", "enqueue"},
             {"switch", std::string(sw)},
             {"buffer_id", ev.buffer_id},
             {"in_port", ev.in_port},
             {"reason", ev.reason},
             {"total_len", ev.total_len},
             {"data", base64_encode(ev.data)},
             {"name", std::string(forced_name)}};
    return to_status(call(req.dump(), id));
}

Status RemoteFs::ack_event(std::string_view p)
{
    uint64_t id = next_id_++;
    json req{{"id", id}, {"op", "ack"}, {"path", std::string(p)}};
    return to_status(call(req.dump(), id));
}

}  // namespace yanc::remote
