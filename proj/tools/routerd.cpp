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

// routerd: the reactive router. Polls every switch's miss buffer, learns
// attachment points, installs exact-match paths for known destinations.

#include <CLI11.hpp>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <thread>

#include "tool_util.hpp"
#include "yanc/apps/routerd.hpp"
#include "yanc/values.hpp"

using namespace yanc;

namespace {

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"routerd - reactive exact-match router"};
    std::string mount = "127.0.0.1:7070";
    std::string net_root = "/net";
    int interval_ms = 100;
    bool porcelain = false;
    std::string log_level = "info";
    app.add_option("--mount", mount, "store service endpoint")->capture_default_str();
    app.add_option("--root", net_root, "tree root")->capture_default_str();
    app.add_option("--interval", interval_ms, "poll interval (ms)")->capture_default_str();
    app.add_flag("--porcelain", porcelain, "print learned MACs tab-separated");
    app.add_option("--log-level", log_level, "quiet|info|debug")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    int rc = 0;
    auto fs = tools::connect_or_die(mount, "routerd", &rc);
    if (!fs) return rc;

    apps::Routerd::Options opt;
    opt.net_root = net_root;
    apps::Routerd router(*fs, opt);

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    while (!g_stop) {
        size_t handled = router.poll();
        if (handled && porcelain) {
            for (const auto& [mac, at] : router.macs())
                std::printf("mac\t%s\t%s\t%u\n", format_mac(mac).c_str(),
                            at.switch_path.c_str(), at.port);
            std::fflush(stdout);
        }
        if (handled && log_level == "debug")
            std::fprintf(stderr, "routerd: %zu records, %llu paths, %llu floods\n", handled,
                         static_cast<unsigned long long>(router.paths_installed()),
                         static_cast<unsigned long long>(router.floods_sent()));
        if (!handled) std::this_thread::sleep_for(std::chrono::milliseconds(interval_ms));
    }
    return 0;
}
