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

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

#include "yanc/errors.hpp"

namespace yanc::driver {

/// Bidirectional ordered byte stream. Implementations must be usable from
/// two threads (one per direction).
class Transport {
public:
    virtual ~Transport() = default;
    virtual bool send(std::string_view bytes) = 0;  // false once closed
    virtual std::string drain_rx() = 0;             // non-blocking read-all
    virtual bool alive() const = 0;
    virtual void close() = 0;
};

using TransportRef = std::shared_ptr<Transport>;

/// In-memory duplex pipe; both ends see close() from either side.
std::pair<TransportRef, TransportRef> make_pipe();

class TcpTransport : public Transport {
public:
    explicit TcpTransport(int fd);
    ~TcpTransport() override;

    static Result<TransportRef> dial(const std::string& host, uint16_t port);

    bool send(std::string_view bytes) override;
    std::string drain_rx() override;
    bool alive() const override;
    void close() override;

private:
    mutable std::mutex mu_;
    int fd_;
    bool alive_ = true;
};

/// Parses "host:port"; host defaults to 127.0.0.1 when empty.
Result<std::pair<std::string, uint16_t>> parse_endpoint(std::string_view text);

}  // namespace yanc::driver
