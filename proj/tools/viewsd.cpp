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

// viewsd: hosts one translation engine per defined view and rescans for new
// or removed views between pump cycles.

#include <CLI11.hpp>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <map>
#include <thread>

#include "tool_util.hpp"
#include "yanc/views/views.hpp"

using namespace yanc;

namespace {

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"viewsd - slice translation engines"};
    std::string mount = "127.0.0.1:7070";
    std::string net_root = "/net";
    int interval_ms = 200;
    std::string log_level = "info";
    app.add_option("--mount", mount, "store service endpoint")->capture_default_str();
    app.add_option("--root", net_root, "tree root")->capture_default_str();
    app.add_option("--interval", interval_ms, "idle rescan interval (ms)")->capture_default_str();
    app.add_option("--log-level", log_level, "quiet|info|debug")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    int rc = 0;
    auto fs = tools::connect_or_die(mount, "viewsd", &rc);
    if (!fs) return rc;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    std::map<std::string, std::unique_ptr<views::ViewEngine>> engines;
    while (!g_stop) {
        auto defined = views::list_views(*fs, net_root);
        for (const auto& v : defined) {
            if (engines.count(v)) continue;
            auto engine = std::make_unique<views::ViewEngine>(*fs, v);
            if (engine->init()) {
                if (log_level != "quiet") std::fprintf(stderr, "viewsd: engine for %s\n", v.c_str());
                engines[v] = std::move(engine);
            }
        }
        std::erase_if(engines, [&](const auto& kv) {
            return std::find(defined.begin(), defined.end(), kv.first) == defined.end();
        });

        size_t work = 0;
        for (auto& [path, engine] : engines) work += engine->pump();
        if (!work) std::this_thread::sleep_for(std::chrono::milliseconds(interval_ms));
    }
    return 0;
}
