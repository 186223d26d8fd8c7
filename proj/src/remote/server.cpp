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

#include "yanc/remote/remote.hpp"
#include "yanc/util.hpp"

namespace yanc::remote {

using nlohmann::json;

namespace {

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

// pops one complete frame from `rx`, or returns nullopt
std::optional<std::string> pop_frame(std::string& rx)
{
    if (rx.size() < 4) return std::nullopt;
    uint32_t len = (uint32_t(uint8_t(rx[0])) << 24) | (uint32_t(uint8_t(rx[1])) << 16) |
                   (uint32_t(uint8_t(rx[2])) << 8) | uint32_t(uint8_t(rx[3]));
    if (len > 64u * 1024 * 1024) {  // cap absurd frames
        rx.clear();
        return std::nullopt;
    }
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

json image_to_json(const schema::FlowImage& img)
{
    json files = json::object();
    for (const auto& [k, v] : schema::files_from_image(img)) files[k] = v;
    return json{{"files", files}, {"version", img.version}};
}

}  // namespace

struct StoreServer::Conn {
    int fd = -1;
    std::string rx;
    std::string identity = "remote";
    std::map<uint64_t, store::WatchRef> watches;
    uint64_t next_watch = 1;
    bool dead = false;
};

StoreServer::StoreServer(schema::Netfs& net) : net_(net) {}

StoreServer::~StoreServer() { stop(); }

Result<uint16_t> StoreServer::start(const std::string& host, uint16_t port)
{
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) return Errc::store_unreachable;
    int one = 1;
    setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1 ||
        bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        listen(listen_fd_, 16) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        return Errc::store_unreachable;
    }
    socklen_t len = sizeof addr;
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    stop_ = false;
    thread_ = std::thread([this] { loop(); });
    return port_;
}

void StoreServer::stop()
{
    if (thread_.joinable()) {
        stop_ = true;
        thread_.join();
    }
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    for (auto& c : conns_)
        if (c->fd >= 0) ::close(c->fd);
    conns_.clear();
}

void StoreServer::loop()
{
    while (!stop_) {
        std::vector<pollfd> fds;
        fds.push_back({listen_fd_, POLLIN, 0});
        for (auto& c : conns_) fds.push_back({c->fd, POLLIN, 0});
        ::poll(fds.data(), fds.size(), 20);

        if (fds[0].revents & POLLIN) {
            int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd >= 0) {
                int one = 1;
                setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
                auto conn = std::make_unique<Conn>();
                conn->fd = fd;
                conns_.push_back(std::move(conn));
            }
        }
        for (size_t i = 0; i < conns_.size(); ++i) {
            Conn& c = *conns_[i];
            if (i + 1 < fds.size() && (fds[i + 1].revents & (POLLIN | POLLHUP | POLLERR))) {
                char buf[16384];
                for (;;) {
                    ssize_t n = ::recv(c.fd, buf, sizeof buf, MSG_DONTWAIT);
                    if (n > 0) {
                        c.rx.append(buf, size_t(n));
                        continue;
                    }
                    if (n == 0) c.dead = true;
                    break;
                }
            }
            while (auto payload = pop_frame(c.rx)) {
                std::string reply = handle(c, *payload);
                if (!reply.empty() && !send_all(c.fd, frame(reply))) c.dead = true;
            }
            push_events(c);
        }
        std::erase_if(conns_, [](const std::unique_ptr<Conn>& c) {
            if (c->dead && c->fd >= 0) ::close(c->fd);
            return c->dead;
        });
    }
}

void StoreServer::push_events(Conn& c)
{
    for (auto& [wid, watch] : c.watches) {
        while (auto ev = watch->poll()) {
            json push{{"event",
                       {{"watch", wid},
                        {"seq", ev->seq},
                        {"path", ev->path},
                        {"kind", std::string(store::event_kind_name(ev->kind))},
                        {"old", ev->old_path}}}};
            if (!send_all(c.fd, frame(push.dump()))) {
                c.dead = true;
                return;
            }
        }
    }
}

std::string StoreServer::handle(Conn& c, const std::string& request)
{
    json req = json::parse(request, nullptr, false);
    if (req.is_discarded() || !req.contains("op")) {
        return json{{"id", 0}, {"ok", false}, {"err", "protocol_error"}}.dump();
    }
    uint64_t id = req.value("id", 0ull);
    std::string op = req["op"];

    auto ok = [&](json extra = json::object()) {
        extra["id"] = id;
        extra["ok"] = true;
        return extra.dump();
    };
    auto fail = [&](Errc e) {
        return json{{"id", id}, {"ok", false}, {"err", std::string(errc_name(e))}}.dump();
    };
    auto status = [&](Status st) { return st ? ok() : fail(st.error()); };
    auto spath = [&](const char* key = "path") { return req.value(key, std::string()); };

    if (op == "hello") {
        c.identity = req.value("identity", "remote");
        return ok();
    }
    if (op == "mkdir") return status(net_.mkdir(spath(), c.identity, req.value("reserved", false)));
    if (op == "mkfile") return status(net_.mkfile(spath(), c.identity));
    if (op == "read") {
        auto r = net_.read(spath());
        if (!r) return fail(r.error());
        return ok(json{{"data", base64_encode(r.value())}});
    }
    if (op == "write") {
        auto data = base64_decode(req.value("data", ""));
        if (!data) return fail(Errc::protocol_error);
        return status(net_.write(spath(), *data, c.identity));
    }
    if (op == "remove")
        return status(net_.remove(spath(), req.value("recursive", false), c.identity));
    if (op == "rename") return status(net_.rename(spath("from"), spath("to"), c.identity));
    if (op == "symlink") return status(net_.symlink(spath(), req.value("target", ""), c.identity));
    if (op == "readlink") {
        auto r = net_.readlink(spath());
        if (!r) return fail(r.error());
        return ok(json{{"target", r.value()}});
    }
    if (op == "list") {
        auto r = net_.list(spath());
        if (!r) return fail(r.error());
        return ok(json{{"names", r.value()}});
    }
    if (op == "stat") {
        auto r = net_.stat(spath());
        if (!r) return fail(r.error());
        return ok(json{{"kind", std::string(store::node_kind_name(r.value().kind))},
                       {"mode", r.value().mode},
                       {"owner", r.value().owner},
                       {"mtime", r.value().mtime},
                       {"size", r.value().size}});
    }
    if (op == "watch") {
        auto r = net_.watch(spath(), req.value("recursive", false),
                            req.value("capacity", size_t(4096)));
        if (!r) return fail(r.error());
        uint64_t wid = c.next_watch++;
        c.watches[wid] = std::move(r.value());
        return ok(json{{"watch", wid}});
    }
    if (op == "unwatch") {
        c.watches.erase(req.value("watch", 0ull));
        return ok();
    }
    if (op == "mk_semantic") return status(net_.mk_semantic(spath(), c.identity));
    if (op == "rm_semantic") return status(net_.rm_semantic(spath()));
    if (op == "commit") {
        auto r = net_.commit_flow(spath(), c.identity);
        if (!r) return fail(r.error());
        return ok(json{{"version", r.value()}});
    }
    if (op == "committed") {
        auto r = net_.committed_flow(spath());
        if (!r) return fail(r.error());
        return ok(json{{"image", image_to_json(r.value())}});
    }
    if (op == "open_buffer") {
        auto r = net_.open_event_buffer(spath("switch"), req.value("app", ""), c.identity);
        if (!r) return fail(r.error());
        return ok(json{{"path", r.value()}});
    }
    if (op == "enqueue") {
        auto data = base64_decode(req.value("data", ""));
        if (!data) return fail(Errc::protocol_error);
        schema::EventIn ev;
        ev.buffer_id = req.value("buffer_id", "none");
        ev.in_port = uint16_t(req.value("in_port", 0));
        ev.reason = req.value("reason", "no_match");
        ev.total_len = req.value("total_len", 0ull);
        ev.data = *data;
        return status(net_.enqueue_event(spath("switch"), ev, req.value("name", "")));
    }
    if (op == "ack") return status(net_.ack_event(spath()));
    return fail(Errc::protocol_error);
}

}  // namespace yanc::remote
