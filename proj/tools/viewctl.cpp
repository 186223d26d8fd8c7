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

// viewctl: define, list and tear down slices.
//
//   viewctl define ssh --member 00000000000000a1 --match tp_dst=22
//   viewctl list
//   viewctl teardown ssh

#include <CLI11.hpp>
#include <cstdio>

#include "tool_util.hpp"
#include "yanc/views/views.hpp"

using namespace yanc;
using tools::exit_code_for;

namespace {

std::string view_path_for(const std::string& root, const std::string& name)
{
    if (!name.empty() && name[0] == '/') return name;
    return root + "/views/" + name;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"viewctl - slice administration"};
    app.require_subcommand(1);
    std::string mount = "127.0.0.1:7070";
    std::string net_root = "/net";
    app.add_option("--mount", mount, "store service endpoint")->capture_default_str();
    app.add_option("--root", net_root, "tree root")->capture_default_str();

    std::string name;
    std::vector<std::string> members;
    std::vector<std::string> matches;
    auto* define = app.add_subcommand("define", "create a slice");
    define->add_option("view", name, "view name or absolute view path")->required();
    define->add_option("--member", members, "member switch (repeatable)")->required();
    define->add_option("--match", matches, "flowspace constraint field=value (repeatable)");

    auto* teardown = app.add_subcommand("teardown", "remove a slice and its flows");
    teardown->add_option("view", name)->required();

    auto* list = app.add_subcommand("list", "print defined views");

    CLI11_PARSE(app, argc, argv);

    int rc = 0;
    auto fs = tools::connect_or_die(mount, "viewctl", &rc);
    if (!fs) return rc;

    if (define->parsed()) {
        views::ViewSpec spec;
        spec.path = view_path_for(net_root, name);
        spec.members = members;
        for (const auto& m : matches) {
            size_t eq = m.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "viewctl: expected field=value, got '%s'\n", m.c_str());
                return 2;
            }
            std::string field = m.substr(0, eq);
            // accept both "tp_dst" and "match.tp_dst"
            if (field.rfind("match.", 0) == 0) field = field.substr(6);
            Status st = schema::set_match_field(spec.flowspace, field, m.substr(eq + 1));
            if (!st) {
                std::fprintf(stderr, "viewctl: match.%s: %s\n", field.c_str(),
                             std::string(errc_name(st.error())).c_str());
                return 2;
            }
        }
        Status st = views::define_view(*fs, spec);
        if (!st) return tools::fail(st.error(), spec.path);
        std::printf("%s\n", spec.path.c_str());
        return 0;
    }
    if (teardown->parsed()) {
        Status st = views::teardown_view(*fs, view_path_for(net_root, name));
        if (!st) return tools::fail(st.error(), name);
        return 0;
    }
    if (list->parsed()) {
        for (const auto& v : views::list_views(*fs, net_root)) {
            auto spec = views::load_view(*fs, v);
            if (!spec) continue;
            std::string members_text;
            for (const auto& m : spec.value().members) {
                if (!members_text.empty()) members_text += ",";
                members_text += m;
            }
            std::string space;
            for (const auto& [k, val] : schema::files_from_match(spec.value().flowspace)) {
                if (!space.empty()) space += ",";
                space += k.substr(6) + "=" + val;
            }
            std::printf("%s\t%s\t%s\n", v.c_str(), members_text.c_str(),
                        space.empty() ? "*" : space.c_str());
        }
        return 0;
    }
    return 2;
}
