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

#include "yanc/views/views.hpp"

#include <algorithm>
#include <set>

#include "yanc/path.hpp"
#include "yanc/util.hpp"

namespace yanc::views {

using schema::FlowMatch;

namespace {

template <typename T>
bool meet_exact(const std::optional<T>& a, const std::optional<T>& b, std::optional<T>& out)
{
    if (a && b) {
        if (*a != *b) return false;
        out = a;
    } else {
        out = a ? a : b;
    }
    return true;
}

bool cidr_inside(const Cidr& inner, const Cidr& outer)
{
    if (inner.prefix < outer.prefix) return false;
    return (inner.addr & outer.mask()) == (outer.addr & outer.mask());
}

bool meet_cidr(const std::optional<Cidr>& a, const std::optional<Cidr>& b,
               std::optional<Cidr>& out)
{
    if (a && b) {
        if (cidr_inside(*a, *b)) {
            out = a;
        } else if (cidr_inside(*b, *a)) {
            out = b;
        } else {
            return false;
        }
    } else {
        out = a ? a : b;
    }
    return true;
}

}  // namespace

Intersection intersect(const FlowMatch& a, const FlowMatch& b)
{
    Intersection r;
    auto fail = [&](const char* field) {
        r.empty = true;
        r.conflict_field = field;
        return r;
    };
    if (!meet_exact(a.in_port, b.in_port, r.value.in_port)) return fail("in_port");
    if (!meet_exact(a.dl_src, b.dl_src, r.value.dl_src)) return fail("dl_src");
    if (!meet_exact(a.dl_dst, b.dl_dst, r.value.dl_dst)) return fail("dl_dst");
    if (!meet_exact(a.dl_vlan, b.dl_vlan, r.value.dl_vlan)) return fail("dl_vlan");
    if (!meet_exact(a.dl_vlan_pcp, b.dl_vlan_pcp, r.value.dl_vlan_pcp)) return fail("dl_vlan_pcp");
    if (!meet_exact(a.dl_type, b.dl_type, r.value.dl_type)) return fail("dl_type");
    if (!meet_exact(a.nw_tos, b.nw_tos, r.value.nw_tos)) return fail("nw_tos");
    if (!meet_exact(a.nw_proto, b.nw_proto, r.value.nw_proto)) return fail("nw_proto");
    if (!meet_cidr(a.nw_src, b.nw_src, r.value.nw_src)) return fail("nw_src");
    if (!meet_cidr(a.nw_dst, b.nw_dst, r.value.nw_dst)) return fail("nw_dst");
    if (!meet_exact(a.tp_src, b.tp_src, r.value.tp_src)) return fail("tp_src");
    if (!meet_exact(a.tp_dst, b.tp_dst, r.value.tp_dst)) return fail("tp_dst");
    return r;
}

bool flowspace_contains(const FlowMatch& outer, const FlowMatch& inner)
{
    auto exact_ok = [](const auto& out_f, const auto& in_f) {
        if (!out_f) return true;
        return in_f.has_value() && *in_f == *out_f;
    };
    auto cidr_ok = [](const std::optional<Cidr>& out_f, const std::optional<Cidr>& in_f) {
        if (!out_f) return true;
        return in_f.has_value() && cidr_inside(*in_f, *out_f);
    };
    return exact_ok(outer.in_port, inner.in_port) && exact_ok(outer.dl_src, inner.dl_src) &&
           exact_ok(outer.dl_dst, inner.dl_dst) && exact_ok(outer.dl_vlan, inner.dl_vlan) &&
           exact_ok(outer.dl_vlan_pcp, inner.dl_vlan_pcp) &&
           exact_ok(outer.dl_type, inner.dl_type) && exact_ok(outer.nw_tos, inner.nw_tos) &&
           exact_ok(outer.nw_proto, inner.nw_proto) && cidr_ok(outer.nw_src, inner.nw_src) &&
           cidr_ok(outer.nw_dst, inner.nw_dst) && exact_ok(outer.tp_src, inner.tp_src) &&
           exact_ok(outer.tp_dst, inner.tp_dst);
}

std::string parent_view_of(std::string_view view_path)
{
    // strip the trailing "views/<name>"
    std::string_view container = path::parent(view_path);
    return std::string(path::parent(container));
}

Result<ViewSpec> load_view(Fs& fs, std::string_view view_path)
{
    ViewSpec spec;
    spec.path = std::string(view_path);
    std::string slice = path::join(view_path, ".slice");
    auto members = fs.read(path::join(slice, "members"));
    if (!members) return members.error();
    for (auto line : split_lines(members.value())) {
        if (!line.empty()) spec.members.emplace_back(line);
    }
    auto files = fs.list(slice);
    if (!files) return files.error();
    for (const auto& name : files.value()) {
        if (!name.starts_with("flowspace.match.")) continue;
        auto value = fs.read(path::join(slice, name));
        if (!value) return value.error();
        Status st = schema::set_match_field(spec.flowspace, std::string_view(name).substr(16),
                                            value.value());
        if (!st) return st.error();
    }
    return spec;
}

Status define_view(Fs& fs, const ViewSpec& spec)
{
    std::string parent = parent_view_of(spec.path);

    // members must be visible in the parent view
    auto parent_switches = fs.list(path::join(parent, "switches"));
    if (!parent_switches) return parent_switches.error();
    std::set<std::string> visible(parent_switches.value().begin(),
                                  parent_switches.value().end());
    for (const auto& m : spec.members) {
        if (!visible.count(m)) return Errc::member_unknown;
    }

    // nested views must stay inside the enclosing flowspace
    if (fs.stat(path::join(parent, ".slice")).ok()) {
        auto outer = load_view(fs, parent);
        if (!outer) return outer.error();
        if (!flowspace_contains(outer.value().flowspace, spec.flowspace))
            return Errc::flowspace_not_contained;
    }

    if (!fs.stat(spec.path).ok()) {
        Status st = fs.mk_semantic(spec.path);
        if (!st) return st;
    }
    std::string slice = path::join(spec.path, ".slice");
    if (!fs.stat(slice).ok()) {
        Status st = fs.mkdir(slice);
        if (!st) return st;
    }
    std::string members_text;
    for (const auto& m : spec.members) members_text += m + "\n";
    Status st = fs.write(path::join(slice, "members"), members_text);
    if (!st) return st;
    for (const auto& [name, value] : schema::files_from_match(spec.flowspace)) {
        st = fs.write(path::join(slice, "flowspace." + name), value);
        if (!st) return st;
    }

    // mirror member switches: ports copied, peer links remapped inside the
    // view when both endpoints are members, dropped otherwise
    std::set<std::string> member_set(spec.members.begin(), spec.members.end());
    for (const auto& m : spec.members) {
        std::string src_sw = path::join(path::join(parent, "switches"), m);
        std::string dst_sw = path::join(path::join(spec.path, "switches"), m);
        if (!fs.stat(dst_sw).ok()) {
            st = fs.mk_semantic(dst_sw);
            if (!st) return st;
        }
        auto ports = fs.list(path::join(src_sw, "ports"));
        if (!ports) continue;
        for (const auto& port : ports.value()) {
            std::string src_port = path::join(path::join(src_sw, "ports"), port);
            std::string dst_port = path::join(path::join(dst_sw, "ports"), port);
            if (!fs.stat(dst_port).ok()) {
                if (!fs.mk_semantic(dst_port)) continue;
            }
            for (const char* f : {"hw_addr", "config.port_status", "config.port_down",
                                  "stats.rx_packets", "stats.tx_packets"}) {
                if (auto v = fs.read(path::join(src_port, f)))
                    fs.write(path::join(dst_port, f), v.value());
            }
            auto peer = fs.readlink(path::join(src_port, "peer"));
            if (peer) {
                // .../switches/<m'>/ports/<p'>
                std::string_view peer_port = path::basename(peer.value());
                std::string peer_sw{path::basename(path::parent(path::parent(peer.value())))};
                if (member_set.count(peer_sw)) {
                    fs.symlink(path::join(dst_port, "peer"),
                               path::join(path::join(path::join(spec.path, "switches"), peer_sw),
                                          std::string("ports/") + std::string(peer_port)));
                }
            }
        }
    }
    return {};
}

Status teardown_view(Fs& fs, std::string_view view_path)
{
    if (!fs.stat(view_path).ok()) return Errc::not_found;
    std::string parent = parent_view_of(view_path);
    std::string prefix = std::string(path::basename(view_path)) + ",";

    auto switches = fs.list(path::join(parent, "switches"));
    if (switches) {
        for (const auto& sw : switches.value()) {
            std::string flows = path::join(path::join(path::join(parent, "switches"), sw), "flows");
            auto names = fs.list(flows);
            if (!names) continue;
            for (const auto& f : names.value()) {
                if (f.rfind(prefix, 0) == 0) fs.rm_semantic(path::join(flows, f));
            }
        }
    }
    return fs.remove(view_path, true);
}

std::vector<std::string> list_views(Fs& fs, std::string_view root_view)
{
    std::vector<std::string> out;
    auto names = fs.list(path::join(root_view, "views"));
    if (!names) return out;
    for (const auto& n : names.value()) {
        std::string vpath = path::join(path::join(root_view, "views"), n);
        if (fs.stat(path::join(vpath, ".slice")).ok()) out.push_back(vpath);
        // nested views
        for (auto& sub : list_views(fs, vpath)) out.push_back(std::move(sub));
    }
    return out;
}

Status ViewEngine::init()
{
    auto spec = load_view(fs_, view_path_);
    if (!spec) return spec.error();
    spec_ = std::move(spec.value());
    parent_ = parent_view_of(view_path_);
    buffer_name_ = "views-" + std::string(path::basename(view_path_));

    auto w = fs_.watch(path::join(view_path_, "switches"), true, 65536);
    if (!w) return w.error();
    flows_w_ = std::move(w.value());

    for (const auto& m : spec_.members) {
        std::string parent_sw = path::join(path::join(parent_, "switches"), m);
        auto buf = fs_.open_event_buffer(parent_sw, buffer_name_);
        if (!buf) return buf.error();
        auto pw = fs_.watch(path::join(parent_sw, "ports"), true, 4096);
        if (pw) port_watches_.push_back(std::move(pw.value()));
    }
    ready_ = true;
    return {};
}

std::string ViewEngine::parent_flow_for(const std::string& mirror_flow) const
{
    // mirror flow: <view>/switches/<m>/flows/<name>
    std::string_view name = path::basename(mirror_flow);
    std::string_view sw = path::basename(path::parent(path::parent(mirror_flow)));
    return path::join(path::join(path::join(parent_, "switches"), std::string(sw)),
                      "flows/" + std::string(path::basename(view_path_)) + "," +
                          std::string(name));
}

void ViewEngine::handle_commit(const std::string& mirror_flow)
{
    auto img = fs_.committed_flow(mirror_flow);
    if (!img) return;

    std::string parent_flow = parent_flow_for(mirror_flow);
    Intersection meet = intersect(img.value().match, spec_.flowspace);
    if (meet.empty) {
        // no out-of-band channel exists: the rejection surfaces as an error
        // file inside the slice's flow directory, and the parent stays put
        fs_.write(path::join(mirror_flow, "error"),
                  "flowspace violation: match." + meet.conflict_field);
        if (fs_.stat(parent_flow).ok()) fs_.rm_semantic(parent_flow);
        return;
    }
    if (fs_.stat(path::join(mirror_flow, "error")).ok())
        fs_.remove(path::join(mirror_flow, "error"), false);

    schema::FlowImage translated = img.value();
    translated.match = meet.value;
    auto desired = schema::files_from_image(translated);

    if (!fs_.stat(parent_flow).ok()) {
        if (!fs_.mkdir(parent_flow, /*reserved=*/true)) return;
    } else {
        // retract staged fields that the new image no longer carries
        auto existing = fs_.list(parent_flow);
        if (existing) {
            for (const auto& name : existing.value()) {
                bool managed = name.starts_with("match.") || name.starts_with("action.") ||
                               name == "priority" || name == "idle_timeout" ||
                               name == "hard_timeout";
                if (managed && !desired.count(name)) fs_.remove(path::join(parent_flow, name), false);
            }
        }
    }
    for (const auto& [name, value] : desired) fs_.write(path::join(parent_flow, name), value);
    fs_.commit_flow(parent_flow);
}

void ViewEngine::handle_removed(const std::string& mirror_flow)
{
    std::string parent_flow = parent_flow_for(mirror_flow);
    if (fs_.stat(parent_flow).ok()) fs_.rm_semantic(parent_flow);
}

size_t ViewEngine::filter_records()
{
    size_t work = 0;
    for (const auto& m : spec_.members) {
        std::string parent_sw = path::join(path::join(parent_, "switches"), m);
        std::string buf = path::join(path::join(parent_sw, "events"), buffer_name_);
        auto records = fs_.list(buf);
        if (!records) continue;
        for (const auto& rec : records.value()) {
            std::string rpath = path::join(buf, rec);
            if (rec == "overflowed") {
                fs_.remove(rpath, false);
                continue;
            }
            auto data = fs_.read(path::join(rpath, "data"));
            auto in_port = fs_.read(path::join(rpath, "in_port"));
            auto reason = fs_.read(path::join(rpath, "reason"));
            auto buffer_id = fs_.read(path::join(rpath, "buffer_id"));
            fs_.ack_event(rpath);
            if (!data || !in_port || !reason) continue;
            ++work;
            auto port = parse_uint(in_port.value(), 65535);
            if (!port) continue;
            auto tuple = ofp::parse_packet(data.value(), uint16_t(port.value()));
            if (!schema::flow_match_covers(spec_.flowspace, tuple)) continue;

            schema::EventIn ev;
            ev.buffer_id = buffer_id ? chomp(buffer_id.value()) : std::string("none");
            ev.in_port = uint16_t(port.value());
            ev.reason = chomp(reason.value());
            ev.total_len = data.value().size();
            ev.data = data.value();
            fs_.enqueue_event(path::join(path::join(view_path_, "switches"), m), ev, rec);
        }
    }
    return work;
}

size_t ViewEngine::pump()
{
    if (!ready_) return 0;
    size_t work = 0;
    while (auto ev = flows_w_->poll()) {
        ++work;
        std::string_view base = path::basename(ev->path);
        if (ev->kind == store::EventKind::modified && base == "version") {
            handle_commit(std::string(path::parent(ev->path)));
        } else if (ev->kind == store::EventKind::removed) {
            // only react to whole-flow removals: <view>/switches/<m>/flows/<f>
            std::string_view rel = ev->path;
            if (path::basename(path::parent(rel)) == "flows") handle_removed(std::string(rel));
        }
    }
    for (auto& pw : port_watches_) {
        while (auto ev = pw->poll()) {
            ++work;
            std::string_view base = path::basename(ev->path);
            bool observable = base == "hw_addr" || base == "config.port_status" ||
                              base == "stats.rx_packets" || base == "stats.tx_packets";
            if (ev->kind != store::EventKind::modified || !observable) continue;
            // parent: <parent>/switches/<m>/ports/<p>/<file>
            std::string_view port = path::basename(path::parent(ev->path));
            std::string_view sw = path::basename(path::parent(path::parent(path::parent(ev->path))));
            std::string mirror = path::join(path::join(path::join(view_path_, "switches"),
                                                       std::string(sw)),
                                            "ports/" + std::string(port) + "/" + std::string(base));
            if (auto v = fs_.read(ev->path)) fs_.write(mirror, v.value());
        }
    }
    work += filter_records();
    return work;
}

}  // namespace yanc::views
