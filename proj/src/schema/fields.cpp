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

#include "yanc/schema/fields.hpp"

#include <algorithm>
#include <cstdio>

#include "yanc/util.hpp"

namespace yanc::schema {

namespace {

constexpr uint16_t kOutputController = 0xfffd;
constexpr uint16_t kOutputFlood = 0xfffb;
constexpr uint16_t kOutputAll = 0xfffc;

struct ActionName {
    uint32_t index;
    FlowAction::Kind kind;
};

std::optional<ActionName> parse_action_name(std::string_view name)
{
    if (!name.starts_with("action.")) return std::nullopt;
    name.remove_prefix(7);
    size_t dot = name.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot > 3) return std::nullopt;
    uint32_t index = 0;
    for (char c : name.substr(0, dot)) {
        if (c < '0' || c > '9') return std::nullopt;
        index = index * 10 + uint32_t(c - '0');
    }
    std::string_view kind = name.substr(dot + 1);
    if (kind == "output") return ActionName{index, FlowAction::Kind::output};
    if (kind == "set_dl_src") return ActionName{index, FlowAction::Kind::set_dl_src};
    if (kind == "set_dl_dst") return ActionName{index, FlowAction::Kind::set_dl_dst};
    return std::nullopt;
}

Result<uint16_t> parse_output_port(std::string_view value)
{
    auto v = chomp(value);
    if (v == "controller") return kOutputController;
    if (v == "flood") return kOutputFlood;
    if (v == "all") return kOutputAll;
    auto n = parse_uint(v, 65535);
    if (!n) return n.error();
    if (n.value() == 0) return Errc::range_error;
    return uint16_t(n.value());
}

std::string format_output_port(uint16_t port)
{
    switch (port) {
        case kOutputController: return "controller";
        case kOutputFlood: return "flood";
        case kOutputAll: return "all";
        default: return std::to_string(port);
    }
}

}  // namespace

bool is_match_field(std::string_view name)
{
    static constexpr std::string_view fields[] = {
        "match.in_port", "match.dl_src",  "match.dl_dst",  "match.dl_vlan",
        "match.dl_vlan_pcp", "match.dl_type", "match.nw_tos", "match.nw_proto",
        "match.nw_src", "match.nw_dst",  "match.tp_src",  "match.tp_dst",
    };
    return std::find(std::begin(fields), std::end(fields), name) != std::end(fields);
}

Status set_match_field(FlowMatch& m, std::string_view field, std::string_view value)
{
    if (field == "in_port") {
        auto v = parse_uint(value, 65535);
        if (!v) return v.error();
        if (v.value() == 0) return Errc::range_error;
        m.in_port = uint16_t(v.value());
    } else if (field == "dl_src") {
        auto v = parse_mac(value);
        if (!v) return v.error();
        m.dl_src = v.value();
    } else if (field == "dl_dst") {
        auto v = parse_mac(value);
        if (!v) return v.error();
        m.dl_dst = v.value();
    } else if (field == "dl_vlan") {
        auto v = parse_uint(value, 65535);
        if (!v) return v.error();
        if (v.value() > 4095 && v.value() != kVlanUntagged) return Errc::range_error;
        m.dl_vlan = uint16_t(v.value());
    } else if (field == "dl_vlan_pcp") {
        auto v = parse_uint(value, 7);
        if (!v) return v.error();
        m.dl_vlan_pcp = uint8_t(v.value());
    } else if (field == "dl_type") {
        auto v = parse_uint(value, 65535);
        if (!v) return v.error();
        m.dl_type = uint16_t(v.value());
    } else if (field == "nw_tos") {
        auto v = parse_uint(value, 255);
        if (!v) return v.error();
        m.nw_tos = uint8_t(v.value());
    } else if (field == "nw_proto") {
        auto v = parse_uint(value, 255);
        if (!v) return v.error();
        m.nw_proto = uint8_t(v.value());
    } else if (field == "nw_src") {
        auto v = parse_cidr(value);
        if (!v) return v.error();
        m.nw_src = v.value();
    } else if (field == "nw_dst") {
        auto v = parse_cidr(value);
        if (!v) return v.error();
        m.nw_dst = v.value();
    } else if (field == "tp_src") {
        auto v = parse_uint(value, 65535);
        if (!v) return v.error();
        m.tp_src = uint16_t(v.value());
    } else if (field == "tp_dst") {
        auto v = parse_uint(value, 65535);
        if (!v) return v.error();
        m.tp_dst = uint16_t(v.value());
    } else {
        return Errc::unknown_field;
    }
    return {};
}

Status validate_flow_file(std::string_view name, std::string_view value)
{
    if (name == "version" || name == "error") return {};
    if (name == "stats.packet_count" || name == "stats.byte_count") {
        auto v = parse_uint(value, ~uint64_t(0));
        return v ? Status{} : v.error();
    }
    if (name == "priority" || name == "idle_timeout" || name == "hard_timeout") {
        auto v = parse_uint(value, 65535);
        return v ? Status{} : v.error();
    }
    if (name.starts_with("match.")) {
        if (!is_match_field(name)) return Errc::unknown_field;
        FlowMatch scratch;
        return set_match_field(scratch, name.substr(6), value);
    }
    if (auto a = parse_action_name(name)) {
        if (a->kind == FlowAction::Kind::output) {
            auto v = parse_output_port(value);
            return v ? Status{} : v.error();
        }
        auto v = parse_mac(value);
        return v ? Status{} : v.error();
    }
    return Errc::unknown_field;
}

Result<FlowImage> image_from_files(const std::map<std::string, std::string>& files,
                                   std::string* bad_field)
{
    auto fail = [&](const std::string& name) -> Errc {
        if (bad_field) *bad_field = name;
        return Errc::validation_failed;
    };

    FlowImage img;
    for (const auto& [name, value] : files) {
        if (name == "version" || name == "error" || name.starts_with("stats.")) continue;
        if (name.starts_with("match.")) {
            if (!is_match_field(name)) return fail(name);
            if (!set_match_field(img.match, std::string_view(name).substr(6), value))
                return fail(name);
        } else if (name == "priority") {
            auto v = parse_uint(value, 65535);
            if (!v) return fail(name);
            img.priority = uint16_t(v.value());
        } else if (name == "idle_timeout") {
            auto v = parse_uint(value, 65535);
            if (!v) return fail(name);
            img.idle_timeout = uint16_t(v.value());
        } else if (name == "hard_timeout") {
            auto v = parse_uint(value, 65535);
            if (!v) return fail(name);
            img.hard_timeout = uint16_t(v.value());
        } else if (auto a = parse_action_name(name)) {
            FlowAction act;
            act.index = a->index;
            act.kind = a->kind;
            if (a->kind == FlowAction::Kind::output) {
                auto v = parse_output_port(value);
                if (!v) return fail(name);
                act.port = v.value();
            } else {
                auto v = parse_mac(value);
                if (!v) return fail(name);
                act.mac = v.value();
            }
            img.actions.push_back(act);
        } else {
            return fail(name);
        }
    }

    std::sort(img.actions.begin(), img.actions.end(),
              [](const FlowAction& a, const FlowAction& b) { return a.index < b.index; });
    for (size_t i = 1; i < img.actions.size(); ++i) {
        if (img.actions[i].index == img.actions[i - 1].index)
            return fail("action." + std::to_string(img.actions[i].index));
    }

    // transport matches must not contradict their prerequisites
    if (img.match.tp_src || img.match.tp_dst) {
        if (img.match.dl_type && *img.match.dl_type != 0x0800)
            return fail(img.match.tp_src ? "match.tp_src" : "match.tp_dst");
        if (img.match.nw_proto && *img.match.nw_proto != 6 && *img.match.nw_proto != 17)
            return fail(img.match.tp_src ? "match.tp_src" : "match.tp_dst");
    }
    return img;
}

std::map<std::string, std::string> files_from_match(const FlowMatch& m)
{
    std::map<std::string, std::string> out;
    char buf[16];
    if (m.in_port) out["match.in_port"] = std::to_string(*m.in_port);
    if (m.dl_src) out["match.dl_src"] = format_mac(*m.dl_src);
    if (m.dl_dst) out["match.dl_dst"] = format_mac(*m.dl_dst);
    if (m.dl_vlan) out["match.dl_vlan"] = std::to_string(*m.dl_vlan);
    if (m.dl_vlan_pcp) out["match.dl_vlan_pcp"] = std::to_string(int(*m.dl_vlan_pcp));
    if (m.dl_type) {
        std::snprintf(buf, sizeof buf, "0x%04x", *m.dl_type);
        out["match.dl_type"] = buf;
    }
    if (m.nw_tos) out["match.nw_tos"] = std::to_string(int(*m.nw_tos));
    if (m.nw_proto) out["match.nw_proto"] = std::to_string(int(*m.nw_proto));
    if (m.nw_src) out["match.nw_src"] = format_cidr(*m.nw_src);
    if (m.nw_dst) out["match.nw_dst"] = format_cidr(*m.nw_dst);
    if (m.tp_src) out["match.tp_src"] = std::to_string(*m.tp_src);
    if (m.tp_dst) out["match.tp_dst"] = std::to_string(*m.tp_dst);
    return out;
}

std::map<std::string, std::string> files_from_image(const FlowImage& img)
{
    auto out = files_from_match(img.match);
    out["priority"] = std::to_string(img.priority);
    out["idle_timeout"] = std::to_string(img.idle_timeout);
    out["hard_timeout"] = std::to_string(img.hard_timeout);
    for (const auto& a : img.actions) {
        std::string base = "action." + std::to_string(a.index) + ".";
        switch (a.kind) {
            case FlowAction::Kind::output:
                out[base + "output"] = format_output_port(a.port);
                break;
            case FlowAction::Kind::set_dl_src:
                out[base + "set_dl_src"] = format_mac(a.mac);
                break;
            case FlowAction::Kind::set_dl_dst:
                out[base + "set_dl_dst"] = format_mac(a.mac);
                break;
        }
    }
    return out;
}

bool flow_match_covers(const FlowMatch& f, const PacketFields& p)
{
    if (f.in_port && *f.in_port != p.in_port) return false;
    if (f.dl_src && *f.dl_src != p.dl_src) return false;
    if (f.dl_dst && *f.dl_dst != p.dl_dst) return false;
    if (f.dl_vlan && *f.dl_vlan != p.dl_vlan) return false;
    if (f.dl_vlan_pcp && *f.dl_vlan_pcp != p.dl_vlan_pcp) return false;
    if (f.dl_type && *f.dl_type != p.dl_type) return false;
    if (f.nw_tos && (!p.has_l3 || *f.nw_tos != p.nw_tos)) return false;
    if (f.nw_proto && (!p.has_l3 || *f.nw_proto != p.nw_proto)) return false;
    if (f.nw_src && (!p.has_l3 || !f.nw_src->contains(p.nw_src))) return false;
    if (f.nw_dst && (!p.has_l3 || !f.nw_dst->contains(p.nw_dst))) return false;
    if (f.tp_src && (!p.has_l4 || *f.tp_src != p.tp_src)) return false;
    if (f.tp_dst && (!p.has_l4 || *f.tp_dst != p.tp_dst)) return false;
    return true;
}

}  // namespace yanc::schema
