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

// flowctl: the static flow pusher. `add` stages field files and bumps the
// version; nothing reaches hardware until that commit.
//
//   flowctl add <switch> <name> match.tp_dst=22 action.0.output=3 priority=40000
//   flowctl del <switch> <name>
//   flowctl list <switch>

#include <CLI11.hpp>
#include <cstdio>

#include "tool_util.hpp"
#include "yanc/schema/fields.hpp"
#include "yanc/util.hpp"

using namespace yanc;

namespace {

// exit codes: 0 ok, 1 unknown switch/flow, 2 validation, 3 store unreachable
int code_for(Errc e)
{
    switch (e) {
        case Errc::ok: return 0;
        case Errc::not_found: return 1;
        case Errc::store_unreachable:
        case Errc::disconnected: return 3;
        default: return 2;
    }
}

std::string normalize_switch(const std::string& text)
{
    std::string_view t = text;
    if (t.starts_with("0x")) t.remove_prefix(2);
    if (t.size() > 16) return {};
    uint64_t v = 0;
    for (char c : t) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else return {};
        v = (v << 4) | uint64_t(d);
    }
    return dpid_to_name(v);
}

std::string render_match(const schema::FlowImage& img)
{
    std::string out;
    for (const auto& [k, v] : schema::files_from_match(img.match)) {
        if (!out.empty()) out += ",";
        out += k.substr(6) + "=" + v;
    }
    return out.empty() ? "*" : out;
}

std::string render_actions(const schema::FlowImage& img)
{
    if (img.actions.empty()) return "drop";
    std::string out;
    auto files = schema::files_from_image(img);
    for (const auto& [k, v] : files) {
        if (!k.starts_with("action.")) continue;
        if (!out.empty()) out += ",";
        out += k.substr(7) + "=" + v;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"flowctl - static flow pusher"};
    app.require_subcommand(1);
    std::string mount = "127.0.0.1:7070";
    std::string net_root = "/net";
    app.add_option("--mount", mount, "store service endpoint")->capture_default_str();
    app.add_option("--root", net_root, "tree root")->capture_default_str();

    std::string sw, name;
    std::vector<std::string> fields;
    auto* add = app.add_subcommand("add", "create, stage and commit a flow");
    add->add_option("switch", sw)->required();
    add->add_option("name", name)->required();
    add->add_option("fields", fields, "field=value (match.*, action.N.*, priority, timeouts)");

    auto* del = app.add_subcommand("del", "remove a flow");
    del->add_option("switch", sw)->required();
    del->add_option("name", name)->required();

    auto* list = app.add_subcommand("list", "print committed flows, one per line");
    list->add_option("switch", sw)->required();

    CLI11_PARSE(app, argc, argv);

    int rc = 0;
    auto fs = tools::connect_or_die(mount, "flowctl", &rc);
    if (!fs) return rc;

    std::string dpid = normalize_switch(sw);
    if (dpid.empty()) {
        std::fprintf(stderr, "flowctl: bad switch id '%s'\n", sw.c_str());
        return 1;
    }
    std::string sw_path = net_root + "/switches/" + dpid;
    if (!fs->stat(sw_path).ok()) {
        std::fprintf(stderr, "flowctl: unknown switch %s\n", dpid.c_str());
        return 1;
    }

    if (add->parsed()) {
        std::string flow = sw_path + "/flows/" + name;
        if (!fs->stat(flow).ok()) {
            Status made = fs->mkdir(flow);
            if (!made) {
                std::fprintf(stderr, "flowctl: %s: %s\n", name.c_str(),
                             std::string(errc_name(made.error())).c_str());
                return code_for(made.error());
            }
        }
        for (const auto& f : fields) {
            size_t eq = f.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "flowctl: expected field=value, got '%s'\n", f.c_str());
                return 2;
            }
            std::string field = f.substr(0, eq);
            Status st = fs->write(flow + "/" + field, f.substr(eq + 1));
            if (!st) {
                std::fprintf(stderr, "flowctl: %s: %s\n", field.c_str(),
                             std::string(errc_name(st.error())).c_str());
                return code_for(st.error());
            }
        }
        auto version = fs->commit_flow(flow);
        if (!version) {
            std::fprintf(stderr, "flowctl: commit failed: %s\n",
                         std::string(errc_name(version.error())).c_str());
            return code_for(version.error());
        }
        std::printf("%s version %llu\n", name.c_str(),
                    static_cast<unsigned long long>(version.value()));
        return 0;
    }
    if (del->parsed()) {
        std::string flow = sw_path + "/flows/" + name;
        Status st = fs->rm_semantic(flow);
        if (!st) {
            std::fprintf(stderr, "flowctl: %s: %s\n", name.c_str(),
                         std::string(errc_name(st.error())).c_str());
            return code_for(st.error());
        }
        return 0;
    }
    if (list->parsed()) {
        auto names = fs->list(sw_path + "/flows");
        if (!names) return code_for(names.error());
        for (const auto& n : names.value()) {
            auto img = fs->committed_flow(sw_path + "/flows/" + n);
            if (!img) continue;  // staged but never committed
            std::printf("%s\t%u\t%llu\t%s\t%s\n", n.c_str(), img.value().priority,
                        static_cast<unsigned long long>(img.value().version),
                        render_match(img.value()).c_str(), render_actions(img.value()).c_str());
        }
        return 0;
    }
    return 2;
}
