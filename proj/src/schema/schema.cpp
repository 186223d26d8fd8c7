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

#include "yanc/schema/schema.hpp"

#include <algorithm>
#include <cstdio>

#include "yanc/path.hpp"
#include "yanc/util.hpp"

namespace yanc::schema {

using store::NodeKind;

namespace {

bool valid_switch_name(std::string_view name)
{
    if (name.size() != 16) return false;
    for (char c : name) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

bool valid_port_name(std::string_view name)
{
    if (name.empty() || name.size() > 5 || name[0] == '0') return false;
    uint32_t v = 0;
    for (char c : name) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + uint32_t(c - '0');
    }
    return v >= 1 && v <= 65535;
}

bool valid_flow_file_name(std::string_view name)
{
    if (name == "version" || name == "error" || name == "priority" || name == "idle_timeout" ||
        name == "hard_timeout" || name == "stats.packet_count" || name == "stats.byte_count")
        return true;
    if (name.starts_with("match.")) return is_match_field(name);
    // action names validate with a placeholder value
    if (name.starts_with("action.")) {
        return name.ends_with(".output") || name.ends_with(".set_dl_src") ||
               name.ends_with(".set_dl_dst");
    }
    return false;
}

constexpr std::string_view kPortFiles[] = {"hw_addr", "config.port_down", "config.port_status",
                                           "stats.rx_packets", "stats.tx_packets"};
constexpr std::string_view kSwitchFiles[] = {"capabilities", "n_buffers", "n_tables", "status"};

bool known_port_file(std::string_view name)
{
    return std::find(std::begin(kPortFiles), std::end(kPortFiles), name) != std::end(kPortFiles);
}

bool known_switch_file(std::string_view name)
{
    return std::find(std::begin(kSwitchFiles), std::end(kSwitchFiles), name) !=
           std::end(kSwitchFiles);
}

enum class Ctx {
    view,
    view_container,
    switch_container,
    sw,
    port_container,
    port,
    flow_container,
    flow,
    buffer_container,
    buffer,
    record,
    pout_container,
    pout_record,
    free,
};

}  // namespace

PathClass classify_under(std::string_view net_root, std::string_view p)
{
    if (p == net_root) return PathClass::net_root;
    if (!path::is_under(net_root, p)) return PathClass::outside;
    auto all = path::split(p);
    size_t skip = path::split(net_root).size();

    Ctx ctx = Ctx::view;
    PathClass cls = PathClass::net_root;
    for (size_t i = skip; i < all.size(); ++i) {
        std::string_view tok = all[i];
        switch (ctx) {
            case Ctx::view:
                if (tok == "hosts") {
                    cls = PathClass::container;
                    ctx = Ctx::free;
                } else if (tok == "switches") {
                    cls = PathClass::container;
                    ctx = Ctx::switch_container;
                } else if (tok == "views") {
                    cls = PathClass::container;
                    ctx = Ctx::view_container;
                } else {
                    cls = PathClass::view_member;
                    ctx = Ctx::free;
                }
                break;
            case Ctx::view_container:
                cls = PathClass::view;
                ctx = Ctx::view;
                break;
            case Ctx::switch_container:
                cls = PathClass::sw;
                ctx = Ctx::sw;
                break;
            case Ctx::sw:
                if (tok == "ports") {
                    cls = PathClass::container;
                    ctx = Ctx::port_container;
                } else if (tok == "flows") {
                    cls = PathClass::container;
                    ctx = Ctx::flow_container;
                } else if (tok == "events") {
                    cls = PathClass::container;
                    ctx = Ctx::buffer_container;
                } else if (tok == "packets_out") {
                    cls = PathClass::container;
                    ctx = Ctx::pout_container;
                } else {
                    cls = PathClass::switch_member;
                    ctx = Ctx::free;
                }
                break;
            case Ctx::port_container:
                cls = PathClass::port;
                ctx = Ctx::port;
                break;
            case Ctx::port:
                cls = PathClass::port_member;
                ctx = Ctx::free;
                break;
            case Ctx::flow_container:
                cls = PathClass::flow;
                ctx = Ctx::flow;
                break;
            case Ctx::flow:
                cls = PathClass::flow_member;
                ctx = Ctx::free;
                break;
            case Ctx::buffer_container:
                cls = PathClass::buffer;
                ctx = Ctx::buffer;
                break;
            case Ctx::buffer:
                cls = PathClass::record;
                ctx = Ctx::record;
                break;
            case Ctx::record:
                cls = PathClass::record_member;
                ctx = Ctx::free;
                break;
            case Ctx::pout_container:
                cls = PathClass::pout_record;
                ctx = Ctx::pout_record;
                break;
            case Ctx::pout_record:
                cls = PathClass::pout_member;
                ctx = Ctx::free;
                break;
            case Ctx::free:
                cls = PathClass::free;
                break;
        }
    }
    return cls;
}

std::string render_record_name(uint64_t seq)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%020llu", static_cast<unsigned long long>(seq));
    return buf;
}

Netfs::Netfs(store::Store& store, Options opt) : store_(store), opt_(std::move(opt))
{
    store_.update([&](store::Store::Txn& txn) {
        // materialize the net root (itself a view) and its skeleton
        std::string at;
        for (auto seg : path::split(opt_.net_root)) {
            at += '/';
            at += seg;
            if (!txn.exists(at)) txn.create(at, NodeKind::directory, 0777, "root");
        }
        for (const char* sub : {"hosts", "switches", "views"}) {
            std::string p = path::join(opt_.net_root, sub);
            if (!txn.exists(p)) txn.create(p, NodeKind::directory, 0777, "root");
        }
        return 0;
    });
}

PathClass Netfs::classify(std::string_view p) const
{
    return classify_under(opt_.net_root, p);
}

Status Netfs::mk_semantic_txn(store::Store::Txn& txn, std::string_view p, PathClass cls,
                              std::string_view identity, bool reserved_names)
{
    std::string_view name = path::basename(p);
    switch (cls) {
        case PathClass::view: {
            if (name.find(',') != std::string_view::npos) return Errc::invalid_name;
            auto made = txn.create(p, NodeKind::directory, 0777, identity);
            if (!made) return made.error();
            for (const char* sub : {"hosts", "switches", "views"})
                txn.create(path::join(p, sub), NodeKind::directory, 0777, identity);
            return {};
        }
        case PathClass::sw: {
            if (!valid_switch_name(name)) return Errc::invalid_name;
            auto made = txn.create(p, NodeKind::directory, 0777, identity);
            if (!made) return made.error();
            for (const char* sub : {"ports", "flows", "events", "packets_out"})
                txn.create(path::join(p, sub), NodeKind::directory, 0777, identity);
            return {};
        }
        case PathClass::port: {
            if (!valid_port_name(name)) return Errc::invalid_name;
            auto made = txn.create(p, NodeKind::directory, 0777, identity);
            if (!made) return made.error();
            txn.create(path::join(p, "hw_addr"), NodeKind::file, 0666, identity,
                       "00:00:00:00:00:00");
            txn.create(path::join(p, "config.port_down"), NodeKind::file, 0666, identity, "0");
            txn.create(path::join(p, "config.port_status"), NodeKind::file, 0666, identity, "up");
            txn.create(path::join(p, "stats.rx_packets"), NodeKind::file, 0666, identity, "0");
            txn.create(path::join(p, "stats.tx_packets"), NodeKind::file, 0666, identity, "0");
            return {};
        }
        case PathClass::flow: {
            if (!reserved_names && name.find(',') != std::string_view::npos)
                return Errc::invalid_name;
            auto made = txn.create(p, NodeKind::directory, 0777, identity);
            if (!made) return made.error();
            txn.create(path::join(p, "version"), NodeKind::file, 0666, identity, "0");
            txn.create(path::join(p, "stats.packet_count"), NodeKind::file, 0666, identity, "0");
            txn.create(path::join(p, "stats.byte_count"), NodeKind::file, 0666, identity, "0");
            return {};
        }
        case PathClass::buffer: {
            auto made = txn.create(p, NodeKind::directory, 0777, identity);
            if (!made) return made.error();
            return {};
        }
        case PathClass::pout_record: {
            auto made = txn.create(p, NodeKind::directory, 0777, identity);
            if (!made) return made.error();
            txn.create(path::join(p, "send"), NodeKind::file, 0666, identity, "0");
            return {};
        }
        default:
            return Errc::not_a_schema_point;
    }
}

Status Netfs::mk_semantic(std::string_view p, std::string_view identity, bool reserved_names)
{
    PathClass cls = classify(p);
    return store_.update(
        [&](store::Store::Txn& txn) { return mk_semantic_txn(txn, p, cls, identity, reserved_names); });
}

Status Netfs::mkdir(std::string_view p, std::string_view identity, bool reserved_names)
{
    switch (classify(p)) {
        case PathClass::view:
        case PathClass::sw:
        case PathClass::port:
        case PathClass::flow:
        case PathClass::buffer:
        case PathClass::pout_record:
            return mk_semantic(p, identity, reserved_names);
        case PathClass::outside:
        case PathClass::free:
        case PathClass::view_member:
        case PathClass::switch_member:
        case PathClass::container:
        case PathClass::net_root: {
            auto made = store_.create(p, NodeKind::directory, 0777, identity);
            return made ? Status{} : made.error();
        }
        default:
            return Errc::not_a_schema_point;
    }
}

Status Netfs::validate_member_write(PathClass cls, std::string_view name,
                                    std::string_view value) const
{
    switch (cls) {
        case PathClass::flow_member:
            return validate_flow_file(name, value);
        case PathClass::port_member: {
            if (name == "hw_addr") {
                auto v = parse_mac(value);
                return v ? Status{} : v.error();
            }
            if (name == "config.port_down") {
                auto v = chomp(value);
                return v == "0" || v == "1" ? Status{} : Status{Errc::parse_error};
            }
            if (name == "config.port_status") {
                auto v = chomp(value);
                return v == "up" || v == "down" ? Status{} : Status{Errc::parse_error};
            }
            if (name == "stats.rx_packets" || name == "stats.tx_packets") {
                auto v = parse_uint(value, ~uint64_t(0));
                return v ? Status{} : v.error();
            }
            return Errc::unknown_field;
        }
        case PathClass::switch_member: {
            if (name == "capabilities" || name == "n_buffers") {
                auto v = parse_uint(value, 0xffffffffu);
                return v ? Status{} : v.error();
            }
            if (name == "n_tables") {
                auto v = parse_uint(value, 255);
                return v ? Status{} : v.error();
            }
            if (name == "status") {
                auto v = chomp(value);
                return v == "connected" || v == "disconnected" ? Status{}
                                                               : Status{Errc::parse_error};
            }
            return Errc::unknown_field;
        }
        case PathClass::pout_member: {
            if (name == "data") return {};
            if (name == "in_port" || name == "buffer_id") {
                if (chomp(value) == "none") return {};
                auto v = parse_uint(value, name == "in_port" ? 65535 : 0xffffffffu);
                return v ? Status{} : v.error();
            }
            if (name == "send") {
                auto v = chomp(value);
                return v == "0" || v == "1" ? Status{} : Status{Errc::parse_error};
            }
            if (name.starts_with("action.")) return validate_flow_file(name, value);
            return Errc::unknown_field;
        }
        case PathClass::record_member:
            return Errc::permission_denied;
        default:
            return {};
    }
}

Status Netfs::mkfile(std::string_view p, std::string_view identity)
{
    PathClass cls = classify(p);
    std::string_view name = path::basename(p);
    switch (cls) {
        case PathClass::flow_member:
            if (!valid_flow_file_name(name)) return Errc::unknown_field;
            break;
        case PathClass::port_member:
            if (!known_port_file(name)) return Errc::unknown_field;
            break;
        case PathClass::switch_member:
            if (!known_switch_file(name)) return Errc::unknown_field;
            break;
        case PathClass::pout_member: {
            bool ok = name == "data" || name == "in_port" || name == "buffer_id" ||
                      name == "send" ||
                      (name.starts_with("action.") && valid_flow_file_name(name));
            if (!ok) return Errc::unknown_field;
            break;
        }
        case PathClass::record_member:
            return Errc::permission_denied;
        case PathClass::outside:
        case PathClass::free:
        case PathClass::view_member:
            break;
        default:
            return Errc::not_a_schema_point;
    }
    auto made = store_.create(p, NodeKind::file, 0666, identity);
    return made ? Status{} : made.error();
}

Result<std::string> Netfs::read(std::string_view p) const { return store_.read(p); }

Status Netfs::write(std::string_view p, std::string_view bytes, std::string_view identity)
{
    PathClass cls = classify(p);
    std::string_view name = path::basename(p);

    if (cls == PathClass::flow_member && name == "version") {
        // any write to a flow's version file is a commit
        auto v = commit_flow(path::parent(p), identity);
        return v ? Status{} : v.error();
    }

    Status valid = validate_member_write(cls, name, bytes);
    if (!valid) return valid;

    switch (cls) {
        case PathClass::flow_member:
            if (!valid_flow_file_name(name)) return Errc::unknown_field;
            break;
        case PathClass::net_root:
        case PathClass::container:
        case PathClass::view:
        case PathClass::sw:
        case PathClass::port:
        case PathClass::flow:
        case PathClass::buffer:
        case PathClass::record:
        case PathClass::pout_record:
            // directory positions: pass through only when the node exists
            // (the write then fails with is_a_directory as usual)
            if (!store_.exists(p)) return Errc::not_a_schema_point;
            break;
        default:
            break;
    }

    return store_.update([&](store::Store::Txn& txn) -> Status {
        if (!txn.exists(p)) {
            auto made = txn.create(p, NodeKind::file, 0666, identity, bytes);
            return made ? Status{} : made.error();
        }
        return txn.write(p, bytes, identity);
    });
}

Status Netfs::remove(std::string_view p, bool recursive, std::string_view identity)
{
    (void)identity;  // removal is not permission-checked in v1
    PathClass cls = classify(p);
    switch (cls) {
        case PathClass::net_root:
        case PathClass::container:
            return Errc::permission_denied;
        case PathClass::view:
        case PathClass::sw:
        case PathClass::port:
        case PathClass::flow:
        case PathClass::buffer:
        case PathClass::record:
        case PathClass::pout_record:
            return rm_semantic(p);
        case PathClass::record_member:
            return Errc::permission_denied;
        default:
            return store_.remove(p, recursive);
    }
}

Status Netfs::rm_semantic(std::string_view p)
{
    switch (classify(p)) {
        case PathClass::view:
        case PathClass::sw:
        case PathClass::port:
        case PathClass::flow:
        case PathClass::buffer:
        case PathClass::record:
        case PathClass::pout_record: {
            // typed removal is always recursive, one logical mutation
            Status st = store_.update(
                [&](store::Store::Txn& txn) { return txn.remove(p, true); });
            if (st) forget_images(p);
            return st;
        }
        default:
            return Errc::not_a_schema_point;
    }
}

Status Netfs::rename(std::string_view old_p, std::string_view new_p, std::string_view identity,
                     bool reserved_names)
{
    (void)identity;
    PathClass co = classify(old_p);
    PathClass cn = classify(new_p);
    if (co != cn) return Errc::invalid_name;
    std::string_view new_name = path::basename(new_p);
    switch (co) {
        case PathClass::net_root:
        case PathClass::container:
        case PathClass::record:
        case PathClass::record_member:
            return Errc::permission_denied;
        case PathClass::sw:
            if (!valid_switch_name(new_name)) return Errc::invalid_name;
            break;
        case PathClass::port:
            if (!valid_port_name(new_name)) return Errc::invalid_name;
            break;
        case PathClass::flow:
            if (!reserved_names && new_name.find(',') != std::string_view::npos)
                return Errc::invalid_name;
            break;
        case PathClass::view:
            if (new_name.find(',') != std::string_view::npos) return Errc::invalid_name;
            break;
        case PathClass::flow_member:
            if (!valid_flow_file_name(new_name)) return Errc::unknown_field;
            break;
        case PathClass::port_member:
            if (!known_port_file(new_name)) return Errc::unknown_field;
            break;
        case PathClass::switch_member:
            if (!known_switch_file(new_name)) return Errc::unknown_field;
            break;
        default:
            break;
    }
    Status st = store_.rename(old_p, new_p);
    if (st) rekey_images(old_p, new_p);
    return st;
}

Status Netfs::symlink(std::string_view p, std::string_view target, std::string_view identity)
{
    PathClass cls = classify(p);
    if (cls == PathClass::port_member && path::basename(p) == "peer") {
        // peer must point at a port directory (dangling allowed, shape not)
        if (classify(target) != PathClass::port) return Errc::invalid_name;
        return store_.symlink(p, target, identity);
    }
    if (cls == PathClass::outside || cls == PathClass::free || cls == PathClass::view_member)
        return store_.symlink(p, target, identity);
    return Errc::not_a_schema_point;
}

Result<std::string> Netfs::readlink(std::string_view p) const { return store_.readlink(p); }

Result<std::vector<std::string>> Netfs::list(std::string_view p) const { return store_.list(p); }

Result<store::NodeInfo> Netfs::stat(std::string_view p) const { return store_.stat(p); }

Result<store::WatchRef> Netfs::watch(std::string_view p, bool recursive, size_t capacity)
{
    return store_.watch(p, recursive, capacity);
}

Status Netfs::write_flow_field(std::string_view flow_path, std::string_view field,
                               std::string_view text, std::string_view identity)
{
    if (classify(flow_path) != PathClass::flow) return Errc::not_a_schema_point;
    return write(path::join(flow_path, field), text, identity);
}

Result<uint64_t> Netfs::commit_txn(store::Store::Txn& txn, std::string_view flow_dir,
                                   std::string_view identity)
{
    auto names = txn.list(flow_dir);
    if (!names) return names.error();

    std::map<std::string, std::string> files;
    for (const auto& n : names.value()) {
        std::string fp = path::join(flow_dir, n);
        auto st = txn.stat(fp);
        if (!st || st.value().kind != NodeKind::file) return Errc::validation_failed;
        files[n] = txn.read(fp).value();
    }

    auto img = image_from_files(files);
    if (!img) return img.error();

    uint64_t prev = 0;
    if (auto it = files.find("version"); it != files.end()) {
        auto v = parse_uint(it->second, ~uint64_t(0));
        if (v) prev = v.value();
    }
    img.value().version = prev + 1;

    std::string version_path = path::join(flow_dir, "version");
    std::string text = std::to_string(img.value().version);
    if (txn.exists(version_path)) {
        Status wrote = txn.write(version_path, text, identity);
        if (!wrote) return wrote.error();
    } else {
        auto made = txn.create(version_path, NodeKind::file, 0666, identity, text);
        if (!made) return made.error();
    }

    std::string canonical = txn.resolve(flow_dir).value();
    {
        std::lock_guard lk(meta_mu_);
        images_[canonical] = std::move(img.value());
    }
    return prev + 1;
}

Result<uint64_t> Netfs::commit_flow(std::string_view flow_path, std::string_view identity)
{
    if (classify(flow_path) != PathClass::flow) return Errc::not_a_schema_point;
    return store_.update(
        [&](store::Store::Txn& txn) { return commit_txn(txn, flow_path, identity); });
}

Result<FlowImage> Netfs::committed_flow(std::string_view flow_path) const
{
    std::lock_guard lk(meta_mu_);
    auto it = images_.find(std::string(flow_path));
    if (it == images_.end()) return Errc::not_found;
    return it->second;
}

// `prefix` is a plain string prefix; pass a trailing slash to bound a
// directory ("/net/switches/<dpid>/flows/").
std::vector<std::pair<std::string, FlowImage>> Netfs::committed_under(
    std::string_view prefix) const
{
    std::vector<std::pair<std::string, FlowImage>> out;
    std::lock_guard lk(meta_mu_);
    for (auto it = images_.lower_bound(std::string(prefix)); it != images_.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        out.emplace_back(it->first, it->second);
    }
    return out;
}

void Netfs::forget_images(std::string_view p)
{
    std::lock_guard lk(meta_mu_);
    std::string key(p);
    for (auto it = images_.lower_bound(key); it != images_.end();) {
        if (it->first == key || (it->first.size() > key.size() &&
                                 it->first.compare(0, key.size(), key) == 0 &&
                                 it->first[key.size()] == '/')) {
            it = images_.erase(it);
        } else {
            break;
        }
    }
}

void Netfs::rekey_images(std::string_view old_p, std::string_view new_p)
{
    std::lock_guard lk(meta_mu_);
    std::string key(old_p);
    std::vector<std::pair<std::string, FlowImage>> moved;
    for (auto it = images_.lower_bound(key); it != images_.end();) {
        bool exact = it->first == key;
        bool under = it->first.size() > key.size() &&
                     it->first.compare(0, key.size(), key) == 0 && it->first[key.size()] == '/';
        if (!exact && !under) break;
        std::string np = std::string(new_p) + it->first.substr(key.size());
        moved.emplace_back(std::move(np), std::move(it->second));
        it = images_.erase(it);
    }
    for (auto& [k, v] : moved) images_[std::move(k)] = std::move(v);
}

Result<std::string> Netfs::open_event_buffer(std::string_view switch_path, std::string_view app,
                                             std::string_view identity)
{
    if (classify(switch_path) != PathClass::sw) return Errc::not_found;
    if (!path::valid_name(app)) return Errc::invalid_name;
    std::string p = path::join(path::join(switch_path, "events"), app);
    Status st = store_.update([&](store::Store::Txn& txn) -> Status {
        if (txn.exists(p)) return {};
        auto made = txn.create(p, NodeKind::directory, 0777, identity);
        return made ? Status{} : made.error();
    });
    if (!st) return st.error();
    return p;
}

Status Netfs::enqueue_event(std::string_view switch_path, const EventIn& ev,
                            std::string_view forced_name)
{
    if (classify(switch_path) != PathClass::sw) return Errc::not_found;
    return store_.update([&](store::Store::Txn& txn) -> Status {
        std::string events_dir = path::join(switch_path, "events");
        auto buffers = txn.list(events_dir);
        if (!buffers) return buffers.error();

        std::string name =
            forced_name.empty() ? render_record_name(++record_seq_) : std::string(forced_name);

        for (const auto& b : buffers.value()) {
            std::string bpath = path::join(events_dir, b);
            auto binfo = txn.stat(bpath);
            if (!binfo || binfo.value().kind != NodeKind::directory) continue;

            // count queued records; names are zero-padded so list order is arrival order
            auto entries = txn.list(bpath).value();
            std::vector<std::string> records;
            for (const auto& e : entries) {
                auto st = txn.stat(path::join(bpath, e));
                if (st && st.value().kind == NodeKind::directory) records.push_back(e);
            }
            if (records.size() >= opt_.buffer_capacity) {
                txn.remove(path::join(bpath, records.front()), true);
                std::string marker = path::join(bpath, "overflowed");
                if (!txn.exists(marker)) txn.create(marker, NodeKind::file, 0666, "", "1");
            }

            std::string rpath = path::join(bpath, name);
            if (txn.exists(rpath)) continue;
            txn.create(rpath, NodeKind::directory, 0755, "");
            txn.create(path::join(rpath, "buffer_id"), NodeKind::file, 0444, "", ev.buffer_id);
            txn.create(path::join(rpath, "in_port"), NodeKind::file, 0444, "",
                       std::to_string(ev.in_port));
            txn.create(path::join(rpath, "reason"), NodeKind::file, 0444, "", ev.reason);
            txn.create(path::join(rpath, "total_len"), NodeKind::file, 0444, "",
                       std::to_string(ev.total_len));
            txn.create(path::join(rpath, "data"), NodeKind::file, 0444, "", ev.data);
        }
        return {};
    });
}

Status Netfs::ack_event(std::string_view record_path)
{
    if (classify(record_path) != PathClass::record) return Errc::not_a_schema_point;
    return store_.remove(record_path, true);
}

Result<PacketOutRecord> Netfs::read_packet_out(std::string_view record_path) const
{
    if (classify(record_path) != PathClass::pout_record) return Errc::not_a_schema_point;
    auto names = store_.list(record_path);
    if (!names) return names.error();

    PacketOutRecord rec;
    std::map<std::string, std::string> action_files;
    bool have_data = false;
    for (const auto& n : names.value()) {
        auto content = store_.read(path::join(record_path, n));
        if (!content) continue;
        if (n == "data") {
            rec.data = content.value();
            have_data = true;
        } else if (n == "in_port") {
            if (chomp(content.value()) != "none") {
                auto v = parse_uint(content.value(), 65535);
                if (!v) return Errc::validation_failed;
                rec.in_port = uint16_t(v.value());
            }
        } else if (n == "buffer_id") {
            if (chomp(content.value()) != "none") {
                auto v = parse_uint(content.value(), 0xffffffffu);
                if (!v) return Errc::validation_failed;
                rec.buffer_id = uint32_t(v.value());
            }
        } else if (n.starts_with("action.")) {
            action_files[n] = content.value();
        }
    }
    if (!have_data) return Errc::validation_failed;
    auto img = image_from_files(action_files);
    if (!img) return img.error();
    rec.actions = std::move(img.value().actions);
    return rec;
}

}  // namespace yanc::schema
