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

// topod: the discovery daemon. Each interval it consumes received probes,
// refreshes or ages out peer links, and sends a fresh probe out every port.

#include <CLI11.hpp>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <thread>

#include "tool_util.hpp"
#include "yanc/apps/topod.hpp"

using namespace yanc;

namespace {

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"topod - LLDP topology daemon"};
    std::string mount = "127.0.0.1:7070";
    std::string net_root = "/net";
    int interval_ms = 5000;
    int rounds = 0;  // 0: run until signalled
    int max_age = 3;
    bool porcelain = false;
    std::string log_level = "info";
    app.add_option("--mount", mount, "store service endpoint")->capture_default_str();
    app.add_option("--root", net_root, "tree root")->capture_default_str();
    app.add_option("--interval", interval_ms, "probe round interval (ms)")->capture_default_str();
    app.add_option("--rounds", rounds, "stop after N rounds (0 = forever)");
    app.add_option("--max-age", max_age, "rounds before an unseen link is dropped")
        ->capture_default_str();
    app.add_flag("--porcelain", porcelain, "print tab-separated links each round");
    app.add_option("--log-level", log_level, "quiet|info|debug")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    int rc = 0;
    auto fs = tools::connect_or_die(mount, "topod", &rc);
    if (!fs) return rc;

    apps::Topod::Options opt;
    opt.net_root = net_root;
    opt.max_age = max_age;
    apps::Topod topod(*fs, opt);

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    for (int i = 0; (rounds == 0 || i < rounds) && !g_stop; ++i) {
        topod.run_round();
        if (porcelain) {
            for (const auto& [link, seen] : topod.links())
                std::printf("link\t%s\t%s\t%d\n", link.first.c_str(), link.second.c_str(), seen);
            std::fflush(stdout);
        } else if (log_level == "debug") {
            std::fprintf(stderr, "topod: round %d, %zu links\n", topod.round(),
                         topod.links().size());
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(interval_ms));
    }
    return 0;
}
