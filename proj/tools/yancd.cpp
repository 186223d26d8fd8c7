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

// yancd: the controller host. Owns the network tree, speaks OpenFlow 1.0 to
// switches on one endpoint and serves the file API to applications on
// another. All control logic lives in the applications, not here.

#include <arpa/inet.h>
#include <csignal>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>

#include "yanc/driver/driver.hpp"
#include "yanc/remote/remote.hpp"
#include "yanc/schema/schema.hpp"
#include "yanc/store/store.hpp"

using namespace yanc;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

int make_listener(const std::string& host, uint16_t port)
{
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return -1;
    int one = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1 ||
        bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        listen(fd, 16) != 0) {
        ::close(fd);
        return -1;
    }
    int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    return fd;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"yancd - network tree host and OpenFlow 1.0 driver"};
    std::string listen = "127.0.0.1:6633";
    std::string store_listen = "127.0.0.1:7070";
    std::string mount = "/net";
    std::string log_level = "info";
    app.add_option("--listen", listen, "switch-facing OpenFlow endpoint")
        ->capture_default_str();
    app.add_option("--store-listen", store_listen, "application-facing store endpoint")
        ->capture_default_str();
    app.add_option("--mount", mount, "tree root managed by the driver")->capture_default_str();
    app.add_option("--log-level", log_level, "quiet|info|debug")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    bool quiet = log_level == "quiet";
    bool debug = log_level == "debug";

    auto of_ep = driver::parse_endpoint(listen);
    auto store_ep = driver::parse_endpoint(store_listen);
    if (!of_ep || !store_ep) {
        std::fprintf(stderr, "yancd: bad endpoint\n");
        return 2;
    }

    store::Store store;
    schema::Netfs::Options opt;
    opt.net_root = mount;
    schema::Netfs net(store, opt);
    driver::Controller::Options copt;
    copt.net_root = mount;
    driver::Controller ctl(net, copt);

    remote::StoreServer server(net);
    auto bound = server.start(store_ep.value().first, store_ep.value().second);
    if (!bound) {
        std::fprintf(stderr, "yancd: cannot bind store endpoint %s\n", store_listen.c_str());
        return 3;
    }

    int of_fd = make_listener(of_ep.value().first, of_ep.value().second);
    if (of_fd < 0) {
        std::fprintf(stderr, "yancd: cannot bind %s\n", listen.c_str());
        return 3;
    }
    if (!quiet)
        std::fprintf(stderr, "yancd: store on %s:%u, switches on %s (root %s)\n",
                     store_ep.value().first.c_str(), unsigned(bound.value()), listen.c_str(),
                     mount.c_str());

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    while (!g_stop) {
        int fd = ::accept(of_fd, nullptr, nullptr);
        if (fd >= 0) {
            if (debug) std::fprintf(stderr, "yancd: switch connection\n");
            ctl.attach(std::make_shared<driver::TcpTransport>(fd));
        }
        size_t work = ctl.pump();
        if (work == 0) {
            pollfd pfd{of_fd, POLLIN, 0};
            ::poll(&pfd, 1, 5);
        }
    }
    ::close(of_fd);
    server.stop();
    return 0;
}
