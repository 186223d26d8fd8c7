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

#include "yanc/driver/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "yanc/values.hpp"

namespace yanc::driver {

namespace {

struct PipeShared {
    std::mutex mu;
    std::string a_to_b;
    std::string b_to_a;
    bool closed = false;
};

class PipeEnd : public Transport {
public:
    PipeEnd(std::shared_ptr<PipeShared> shared, bool is_a) : shared_(std::move(shared)), is_a_(is_a) {}

    bool send(std::string_view bytes) override
    {
        std::lock_guard lk(shared_->mu);
        if (shared_->closed) return false;
        (is_a_ ? shared_->a_to_b : shared_->b_to_a).append(bytes.data(), bytes.size());
        return true;
    }

    std::string drain_rx() override
    {
        std::lock_guard lk(shared_->mu);
        std::string& rx = is_a_ ? shared_->b_to_a : shared_->a_to_b;
        std::string out = std::move(rx);
        rx.clear();
        return out;
    }

    bool alive() const override
    {
        std::lock_guard lk(shared_->mu);
        return !shared_->closed;
    }

    void close() override
    {
        std::lock_guard lk(shared_->mu);
        shared_->closed = true;
    }

private:
    std::shared_ptr<PipeShared> shared_;
    bool is_a_;
};

}  // namespace

std::pair<TransportRef, TransportRef> make_pipe()
{
    auto shared = std::make_shared<PipeShared>();
    return {std::make_shared<PipeEnd>(shared, true), std::make_shared<PipeEnd>(shared, false)};
}

TcpTransport::TcpTransport(int fd) : fd_(fd)
{
    int flags = fcntl(fd_, F_GETFL, 0);
    fcntl(fd_, F_SETFL, flags | O_NONBLOCK);
    int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

TcpTransport::~TcpTransport() { close(); }

Result<TransportRef> TcpTransport::dial(const std::string& host, uint16_t port)
{
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return Errc::store_unreachable;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        return Errc::store_unreachable;
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        return Errc::store_unreachable;
    }
    return TransportRef(new TcpTransport(fd));
}

bool TcpTransport::send(std::string_view bytes)
{
    std::lock_guard lk(mu_);
    if (!alive_) return false;
    size_t off = 0;
    while (off < bytes.size()) {
        ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
        if (n > 0) {
            off += size_t(n);
            continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            // short blocking retry keeps framing simple; peers drain promptly
            struct timespec ts = {0, 2000000};
            nanosleep(&ts, nullptr);
            continue;
        }
        alive_ = false;
        return false;
    }
    return true;
}

std::string TcpTransport::drain_rx()
{
    std::lock_guard lk(mu_);
    std::string out;
    if (!alive_) return out;
    char buf[16384];
    for (;;) {
        ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
        if (n > 0) {
            out.append(buf, size_t(n));
            continue;
        }
        if (n == 0) {
            alive_ = false;  // orderly shutdown by the peer
            break;
        }
        if (errno == EAGAIN || errno == EWOULDBLOCK) break;
        alive_ = false;
        break;
    }
    return out;
}

bool TcpTransport::alive() const
{
    std::lock_guard lk(mu_);
    return alive_;
}

void TcpTransport::close()
{
    std::lock_guard lk(mu_);
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    alive_ = false;
}

Result<std::pair<std::string, uint16_t>> parse_endpoint(std::string_view text)
{
    size_t colon = text.rfind(':');
    if (colon == std::string_view::npos) return Errc::parse_error;
    std::string host(text.substr(0, colon));
    if (host.empty()) host = "127.0.0.1";
    auto port = parse_uint(text.substr(colon + 1), 65535);
    if (!port || port.value() == 0) return Errc::parse_error;
    return std::make_pair(host, uint16_t(port.value()));
}

}  // namespace yanc::driver
