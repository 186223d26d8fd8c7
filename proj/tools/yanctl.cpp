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

// yanctl: the admin shell over the store service when no OS mount exists.
// Each subcommand mirrors one file operation.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "tool_util.hpp"
#include "yanc/store/store.hpp"
#include "yanc/util.hpp"

using namespace yanc;
using tools::exit_code_for;

int main(int argc, char** argv)
{
    CLI::App app{"yanctl - file-style admin shell for the network tree"};
    app.require_subcommand(1);
    std::string mount = "127.0.0.1:7070";
    app.add_option("--mount", mount, "store service endpoint")->capture_default_str();

    std::string path, value, target, new_path;
    bool recursive = false, long_format = false;
    int count = 1;
    int timeout_ms = 10000;

    auto* ls = app.add_subcommand("ls", "list a directory");
    ls->add_option("path", path)->required();
    ls->add_flag("-l", long_format, "kind, mode, owner, mtime, size");

    auto* cat = app.add_subcommand("cat", "print file contents");
    cat->add_option("path", path)->required();

    auto* write = app.add_subcommand("write", "write a file (creates it if absent)");
    write->add_option("path", path)->required();
    write->add_option("value", value, "content; '-' reads stdin")->required();

    auto* mkdir = app.add_subcommand("mkdir", "create a directory (schema-aware)");
    mkdir->add_option("path", path)->required();

    auto* ln = app.add_subcommand("ln", "create or retarget a symlink");
    ln->add_option("path", path)->required();
    ln->add_option("target", target)->required();

    auto* readlink = app.add_subcommand("readlink", "print a symlink target");
    readlink->add_option("path", path)->required();

    auto* rm = app.add_subcommand("rm", "remove a node");
    rm->add_option("path", path)->required();
    rm->add_flag("-r,--recursive", recursive);

    auto* mv = app.add_subcommand("mv", "rename a node");
    mv->add_option("old", path)->required();
    mv->add_option("new", new_path)->required();

    auto* stat = app.add_subcommand("stat", "show node metadata");
    stat->add_option("path", path)->required();

    auto* watch = app.add_subcommand("watch", "print change events as they happen");
    watch->add_option("path", path)->required();
    watch->add_flag("-r,--recursive", recursive);
    watch->add_option("-n,--count", count, "events to print before exiting");
    watch->add_option("--timeout-ms", timeout_ms);

    auto* commit = app.add_subcommand("commit", "bump a flow's version file");
    commit->add_option("flow", path)->required();

    CLI11_PARSE(app, argc, argv);

    int rc = 0;
    auto fs = tools::connect_or_die(mount, "yanctl", &rc);
    if (!fs) return rc;

    if (ls->parsed()) {
        auto names = fs->list(path);
        if (!names) return tools::fail(names.error(), path);
        for (const auto& n : names.value()) {
            if (!long_format) {
                std::printf("%s\n", n.c_str());
                continue;
            }
            auto info = fs->stat(path == "/" ? "/" + n : path + "/" + n);
            if (!info) continue;
            std::printf("%-4s %03o %-10s %8llu %8llu %s\n",
                        std::string(store::node_kind_name(info.value().kind)).c_str(),
                        info.value().mode, info.value().owner.c_str(),
                        static_cast<unsigned long long>(info.value().mtime),
                        static_cast<unsigned long long>(info.value().size), n.c_str());
        }
        return 0;
    }
    if (cat->parsed()) {
        auto data = fs->read(path);
        if (!data) return tools::fail(data.error(), path);
        fwrite(data.value().data(), 1, data.value().size(), stdout);
        return 0;
    }
    if (write->parsed()) {
        std::string content = value;
        if (value == "-") {
            content.assign(std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>());
        }
        Status st = fs->write(path, content);
        return st ? 0 : tools::fail(st.error(), path);
    }
    if (mkdir->parsed()) {
        Status st = fs->mkdir(path);
        return st ? 0 : tools::fail(st.error(), path);
    }
    if (ln->parsed()) {
        Status st = fs->symlink(path, target);
        return st ? 0 : tools::fail(st.error(), path);
    }
    if (readlink->parsed()) {
        auto t = fs->readlink(path);
        if (!t) return tools::fail(t.error(), path);
        std::printf("%s\n", t.value().c_str());
        return 0;
    }
    if (rm->parsed()) {
        Status st = fs->remove(path, recursive);
        return st ? 0 : tools::fail(st.error(), path);
    }
    if (mv->parsed()) {
        Status st = fs->rename(path, new_path);
        return st ? 0 : tools::fail(st.error(), path);
    }
    if (stat->parsed()) {
        auto info = fs->stat(path);
        if (!info) return tools::fail(info.error(), path);
        std::printf("kind\t%s\nmode\t%03o\nowner\t%s\nmtime\t%llu\nsize\t%llu\n",
                    std::string(store::node_kind_name(info.value().kind)).c_str(),
                    info.value().mode, info.value().owner.c_str(),
                    static_cast<unsigned long long>(info.value().mtime),
                    static_cast<unsigned long long>(info.value().size));
        return 0;
    }
    if (watch->parsed()) {
        auto w = fs->watch(path, recursive, 4096);
        if (!w) return tools::fail(w.error(), path);
        for (int i = 0; i < count; ++i) {
            auto ev = w.value()->next(std::chrono::milliseconds(timeout_ms));
            if (!ev) return 1;  // timed out
            std::printf("%llu\t%s\t%s\t%s\n", static_cast<unsigned long long>(ev->seq),
                        std::string(store::event_kind_name(ev->kind)).c_str(), ev->path.c_str(),
                        ev->old_path.c_str());
            std::fflush(stdout);
        }
        return 0;
    }
    if (commit->parsed()) {
        auto v = fs->commit_flow(path);
        if (!v) return tools::fail(v.error(), path);
        std::printf("%llu\n", static_cast<unsigned long long>(v.value()));
        return 0;
    }
    return 2;
}
