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

#include "yanc/store/store.hpp"

#include <algorithm>
#include <cstdio>

#include "yanc/path.hpp"
#include "yanc/util.hpp"

namespace yanc::store {

std::string_view event_kind_name(EventKind k)
{
    switch (k) {
        case EventKind::created: return "created";
        case EventKind::modified: return "modified";
        case EventKind::removed: return "removed";
        case EventKind::renamed: return "renamed";
        case EventKind::link_changed: return "link_changed";
        case EventKind::overflow: return "overflow";
    }
    return "";
}

std::optional<EventKind> event_kind_from_name(std::string_view name)
{
    for (int i = 0; i <= int(EventKind::overflow); ++i)
        if (event_kind_name(EventKind(i)) == name) return EventKind(i);
    return std::nullopt;
}

std::string_view node_kind_name(NodeKind k)
{
    switch (k) {
        case NodeKind::directory: return "dir";
        case NodeKind::file: return "file";
        case NodeKind::symlink: return "link";
    }
    return "";
}

// ---------------------------------------------------------------- Watch

bool Watch::matches(const ChangeEvent& ev) const
{
    auto hit = [this](std::string_view p) {
        if (p.empty()) return false;
        if (p == root_) return true;
        if (recursive_) return path::is_under(root_, p);
        return path::parent(p) == root_;
    };
    if (hit(ev.path)) return true;
    return ev.kind == EventKind::renamed && hit(ev.old_path);
}

void Watch::enqueue(const ChangeEvent& ev)
{
    std::lock_guard lk(mu_);
    if (queue_.size() < capacity_) {
        queue_.push_back(ev);
    } else if (overflow_queued_) {
        // still overflowed: drop the oldest real event silently
        for (auto it = queue_.begin(); it != queue_.end(); ++it) {
            if (it->kind != EventKind::overflow) {
                queue_.erase(it);
                break;
            }
        }
        if (queue_.size() < capacity_) queue_.push_back(ev);
    } else {
        // drop-oldest, then mark the point of loss with one overflow event
        uint64_t first_dropped = queue_.front().seq;
        while (!queue_.empty() && queue_.size() + 2 > capacity_) queue_.pop_front();
        ChangeEvent marker;
        marker.seq = first_dropped;
        marker.path = root_;
        marker.kind = EventKind::overflow;
        queue_.push_front(std::move(marker));
        overflow_queued_ = true;
        if (queue_.size() < capacity_) queue_.push_back(ev);
    }
    cv_.notify_one();
}

std::optional<ChangeEvent> Watch::next(std::chrono::milliseconds timeout)
{
    std::unique_lock lk(mu_);
    if (!cv_.wait_for(lk, timeout, [&] { return !queue_.empty(); })) return std::nullopt;
    ChangeEvent ev = std::move(queue_.front());
    queue_.pop_front();
    if (ev.kind == EventKind::overflow) overflow_queued_ = false;
    return ev;
}

std::optional<ChangeEvent> Watch::poll()
{
    std::lock_guard lk(mu_);
    if (queue_.empty()) return std::nullopt;
    ChangeEvent ev = std::move(queue_.front());
    queue_.pop_front();
    if (ev.kind == EventKind::overflow) overflow_queued_ = false;
    return ev;
}

size_t Watch::pending() const
{
    std::lock_guard lk(mu_);
    return queue_.size();
}

// ---------------------------------------------------------------- Store

struct Store::Node {
    uint64_t id = 0;
    NodeKind kind = NodeKind::directory;
    std::string name;
    Node* parent = nullptr;
    std::map<std::string, std::unique_ptr<Node>, std::less<>> children;
    std::string content;  // files
    std::string target;   // symlinks
    uint16_t mode = 0;
    std::string owner;
    uint64_t mtime = 0;
};

namespace {

std::string node_path(const Store::Node* n);

}  // namespace

struct Store::Resolved {
    Node* node = nullptr;
    Errc err = Errc::ok;
};

Store::Store()
{
    root_ = std::make_unique<Node>();
    root_->id = next_id_++;
    root_->kind = NodeKind::directory;
    root_->mode = 0755;
    root_->owner = "root";
}

Store::~Store() = default;

namespace {

std::string node_path(const Store::Node* n)
{
    if (!n->parent) return "/";
    std::vector<std::string_view> parts;
    for (const auto* p = n; p->parent; p = p->parent) parts.push_back(p->name);
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        out += '/';
        out += *it;
    }
    return out;
}

}  // namespace

// Resolution: intermediate symlinks are always followed, the final component
// only when `follow_final`. The total number of link substitutions is capped
// at kMaxLinkHops; beyond it the walk fails with loop_detected. A path that
// goes missing while chasing a link target reports dangling_link.
static Store::Node* walk(Store::Node* root, std::string_view p, bool follow_final, int& hops,
                         Errc& err)
{
    if (!path::valid_path(p)) {
        err = Errc::not_found;
        return nullptr;
    }
    Store::Node* cur = root;
    auto segs = path::split(p);
    for (size_t i = 0; i < segs.size(); ++i) {
        if (cur->kind != NodeKind::directory) {
            err = Errc::not_a_directory;
            return nullptr;
        }
        auto it = cur->children.find(segs[i]);
        if (it == cur->children.end()) {
            err = Errc::not_found;
            return nullptr;
        }
        Store::Node* next = it->second.get();
        bool final = i + 1 == segs.size();
        if (next->kind == NodeKind::symlink && (!final || follow_final)) {
            if (++hops > kMaxLinkHops) {
                err = Errc::loop_detected;
                return nullptr;
            }
            Errc sub = Errc::ok;
            Store::Node* t = walk(root, next->target, true, hops, sub);
            if (!t) {
                err = sub == Errc::not_found ? Errc::dangling_link : sub;
                return nullptr;
            }
            if (final) return t;
            cur = t;
        } else {
            if (final) return next;
            cur = next;
        }
    }
    return cur;  // p == "/"
}

Store::Resolved Store::lookup(std::string_view p, bool follow_final) const
{
    Resolved r;
    int hops = 0;
    r.node = walk(root_.get(), p, follow_final, hops, r.err);
    return r;
}

void Store::emit(EventKind kind, std::string p, std::string old_path)
{
    ChangeEvent ev;
    ev.seq = ++event_counter_;
    ev.path = std::move(p);
    ev.kind = kind;
    ev.old_path = std::move(old_path);

    bool expired = false;
    for (auto& w : watches_) {
        if (auto watch = w.lock()) {
            if (watch->matches(ev)) watch->enqueue(ev);
        } else {
            expired = true;
        }
    }
    if (expired) {
        std::erase_if(watches_, [](const std::weak_ptr<Watch>& w) { return w.expired(); });
    }
}

Result<uint64_t> Store::create_locked(std::string_view p, NodeKind kind, uint16_t mode,
                                      std::string_view owner, std::string_view content)
{
    if (kind == NodeKind::symlink) return Errc::invalid_name;  // use symlink()
    if (kind == NodeKind::directory && !content.empty()) return Errc::is_a_directory;
    std::string_view name = path::basename(p);
    if (!path::valid_name(name)) return Errc::invalid_name;
    auto parent = lookup(path::parent(p), true);
    if (!parent.node) return parent.err;
    if (parent.node->kind != NodeKind::directory) return Errc::not_a_directory;
    if (parent.node->children.count(std::string(name))) return Errc::already_exists;

    auto node = std::make_unique<Node>();
    node->id = next_id_++;
    node->kind = kind;
    node->name = std::string(name);
    node->parent = parent.node;
    node->mode = mode & 0777;
    node->owner = std::string(owner);
    node->mtime = ++mtime_counter_;
    if (kind == NodeKind::file) node->content.assign(content.data(), content.size());
    Node* raw = node.get();
    parent.node->children.emplace(raw->name, std::move(node));
    parent.node->mtime = ++mtime_counter_;
    emit(EventKind::created, node_path(raw));
    return raw->id;
}

Result<std::string> Store::read_locked(std::string_view p) const
{
    auto r = lookup(p, true);
    if (!r.node) return r.err;
    if (r.node->kind == NodeKind::directory) return Errc::is_a_directory;
    return r.node->content;
}

Status Store::write_locked(std::string_view p, std::string_view bytes, std::string_view identity)
{
    auto r = lookup(p, true);
    if (!r.node) return r.err;
    if (r.node->kind == NodeKind::directory) return Errc::is_a_directory;
    if (!identity.empty()) {
        uint16_t bit = identity == r.node->owner ? 0200 : 0002;
        if (!(r.node->mode & bit)) return Errc::permission_denied;
    }
    r.node->content.assign(bytes.data(), bytes.size());
    r.node->mtime = ++mtime_counter_;
    emit(EventKind::modified, node_path(r.node));
    return {};
}

void Store::remove_subtree(Node& node, const std::string& at_path)
{
    // removed events are emitted deepest-first
    for (auto& [name, child] : node.children) {
        remove_subtree(*child, at_path == "/" ? "/" + name : at_path + "/" + name);
    }
    node.children.clear();
    emit(EventKind::removed, at_path);
}

Status Store::remove_locked(std::string_view p, bool recursive)
{
    auto r = lookup(p, false);
    if (!r.node) return r.err;
    if (!r.node->parent) return Errc::invalid_name;  // cannot remove the root
    if (r.node->kind == NodeKind::directory && !r.node->children.empty() && !recursive)
        return Errc::directory_not_empty;
    std::string at = node_path(r.node);
    Node* parent = r.node->parent;
    // detach first so watches never observe a half-removed tree
    auto it = parent->children.find(r.node->name);
    auto owned = std::move(it->second);
    parent->children.erase(it);
    parent->mtime = ++mtime_counter_;
    remove_subtree(*owned, at);
    return {};
}

Status Store::rename_locked(std::string_view old_p, std::string_view new_p)
{
    auto src = lookup(old_p, false);
    if (!src.node) return src.err;
    if (!src.node->parent) return Errc::invalid_name;
    std::string_view new_name = path::basename(new_p);
    if (!path::valid_name(new_name)) return Errc::invalid_name;
    auto dst_parent = lookup(path::parent(new_p), true);
    if (!dst_parent.node) return dst_parent.err;
    if (dst_parent.node->kind != NodeKind::directory) return Errc::not_a_directory;
    if (dst_parent.node->children.count(std::string(new_name))) return Errc::already_exists;

    std::string old_canonical = node_path(src.node);
    std::string dst_parent_path = node_path(dst_parent.node);
    if (dst_parent_path == old_canonical || path::is_under(old_canonical, dst_parent_path))
        return Errc::invalid_name;  // cannot move a directory into itself

    Node* src_parent = src.node->parent;
    auto it = src_parent->children.find(src.node->name);
    auto owned = std::move(it->second);
    src_parent->children.erase(it);
    src_parent->mtime = ++mtime_counter_;
    owned->name = std::string(new_name);
    owned->parent = dst_parent.node;
    owned->mtime = ++mtime_counter_;
    Node* raw = owned.get();
    dst_parent.node->children.emplace(raw->name, std::move(owned));
    dst_parent.node->mtime = ++mtime_counter_;
    emit(EventKind::renamed, node_path(raw), std::move(old_canonical));
    return {};
}

Status Store::symlink_locked(std::string_view p, std::string_view target, std::string_view owner)
{
    if (target.empty() || target[0] != '/' || !path::valid_path(target))
        return Errc::invalid_name;  // absolute tree paths only
    auto existing = lookup(p, false);
    if (existing.node) {
        if (existing.node->kind != NodeKind::symlink) return Errc::not_a_link;
        existing.node->target = std::string(target);
        existing.node->mtime = ++mtime_counter_;
        emit(EventKind::link_changed, node_path(existing.node));
        return {};
    }
    std::string_view name = path::basename(p);
    if (!path::valid_name(name)) return Errc::invalid_name;
    auto parent = lookup(path::parent(p), true);
    if (!parent.node) return parent.err;
    if (parent.node->kind != NodeKind::directory) return Errc::not_a_directory;

    auto node = std::make_unique<Node>();
    node->id = next_id_++;
    node->kind = NodeKind::symlink;
    node->name = std::string(name);
    node->parent = parent.node;
    node->target = std::string(target);
    node->mode = 0777;
    node->owner = std::string(owner);
    node->mtime = ++mtime_counter_;
    Node* raw = node.get();
    parent.node->children.emplace(raw->name, std::move(node));
    parent.node->mtime = ++mtime_counter_;
    emit(EventKind::link_changed, node_path(raw));
    return {};
}

Result<std::string> Store::readlink_locked(std::string_view p) const
{
    auto r = lookup(p, false);
    if (!r.node) return r.err;
    if (r.node->kind != NodeKind::symlink) return Errc::not_a_link;
    return r.node->target;
}

Result<std::vector<std::string>> Store::list_locked(std::string_view p) const
{
    auto r = lookup(p, true);
    if (!r.node) return r.err;
    if (r.node->kind != NodeKind::directory) return Errc::not_a_directory;
    std::vector<std::string> names;
    names.reserve(r.node->children.size());
    for (const auto& [name, child] : r.node->children) names.push_back(name);
    return names;
}

Result<NodeInfo> Store::stat_locked(std::string_view p, bool follow) const
{
    auto r = lookup(p, follow);
    if (!r.node) return r.err;
    NodeInfo info;
    info.id = r.node->id;
    info.kind = r.node->kind;
    info.mode = r.node->mode;
    info.owner = r.node->owner;
    info.mtime = r.node->mtime;
    switch (r.node->kind) {
        case NodeKind::directory: info.size = r.node->children.size(); break;
        case NodeKind::file: info.size = r.node->content.size(); break;
        case NodeKind::symlink: info.size = r.node->target.size(); break;
    }
    return info;
}

Status Store::set_mode_locked(std::string_view p, uint16_t mode)
{
    auto r = lookup(p, true);
    if (!r.node) return r.err;
    r.node->mode = mode & 0777;
    r.node->mtime = ++mtime_counter_;
    emit(EventKind::modified, node_path(r.node));
    return {};
}

Result<std::string> Store::resolve_locked(std::string_view p) const
{
    auto r = lookup(p, true);
    if (!r.node) return r.err;
    return node_path(r.node);
}

// public wrappers -------------------------------------------------------

Result<uint64_t> Store::create(std::string_view p, NodeKind kind, uint16_t mode,
                               std::string_view owner, std::string_view content)
{
    std::unique_lock lk(mu_);
    return create_locked(p, kind, mode, owner, content);
}

Result<std::string> Store::read(std::string_view p) const
{
    std::shared_lock lk(mu_);
    return read_locked(p);
}

Status Store::write(std::string_view p, std::string_view bytes, std::string_view identity)
{
    std::unique_lock lk(mu_);
    return write_locked(p, bytes, identity);
}

Status Store::remove(std::string_view p, bool recursive)
{
    std::unique_lock lk(mu_);
    return remove_locked(p, recursive);
}

Status Store::rename(std::string_view old_p, std::string_view new_p)
{
    std::unique_lock lk(mu_);
    return rename_locked(old_p, new_p);
}

Status Store::symlink(std::string_view p, std::string_view target, std::string_view owner)
{
    std::unique_lock lk(mu_);
    return symlink_locked(p, target, owner);
}

Result<std::string> Store::readlink(std::string_view p) const
{
    std::shared_lock lk(mu_);
    return readlink_locked(p);
}

Result<std::vector<std::string>> Store::list(std::string_view p) const
{
    std::shared_lock lk(mu_);
    return list_locked(p);
}

Result<NodeInfo> Store::stat(std::string_view p, bool follow) const
{
    std::shared_lock lk(mu_);
    return stat_locked(p, follow);
}

Status Store::set_mode(std::string_view p, uint16_t mode)
{
    std::unique_lock lk(mu_);
    return set_mode_locked(p, mode);
}

Result<std::string> Store::resolve(std::string_view p) const
{
    std::shared_lock lk(mu_);
    return resolve_locked(p);
}

bool Store::exists(std::string_view p) const
{
    std::shared_lock lk(mu_);
    auto r = lookup(p, false);
    return r.node != nullptr;
}

uint64_t Store::event_seq() const
{
    std::shared_lock lk(mu_);
    return event_counter_;
}

// Txn forwards ----------------------------------------------------------

Result<uint64_t> Store::Txn::create(std::string_view p, NodeKind k, uint16_t m, std::string_view o,
                                    std::string_view content)
{
    return s_.create_locked(p, k, m, o, content);
}
Result<std::string> Store::Txn::read(std::string_view p) const { return s_.read_locked(p); }
Status Store::Txn::write(std::string_view p, std::string_view b, std::string_view i)
{
    return s_.write_locked(p, b, i);
}
Status Store::Txn::remove(std::string_view p, bool r) { return s_.remove_locked(p, r); }
Status Store::Txn::rename(std::string_view o, std::string_view n) { return s_.rename_locked(o, n); }
Status Store::Txn::symlink(std::string_view p, std::string_view t, std::string_view o)
{
    return s_.symlink_locked(p, t, o);
}
Result<std::string> Store::Txn::readlink(std::string_view p) const { return s_.readlink_locked(p); }
Result<std::vector<std::string>> Store::Txn::list(std::string_view p) const
{
    return s_.list_locked(p);
}
Result<NodeInfo> Store::Txn::stat(std::string_view p, bool f) const { return s_.stat_locked(p, f); }
Status Store::Txn::set_mode(std::string_view p, uint16_t m) { return s_.set_mode_locked(p, m); }
Result<std::string> Store::Txn::resolve(std::string_view p) const { return s_.resolve_locked(p); }
bool Store::Txn::exists(std::string_view p) const { return s_.lookup(p, false).node != nullptr; }

// watches ----------------------------------------------------------------

Result<WatchRef> Store::watch(std::string_view p, bool recursive, size_t capacity)
{
    std::unique_lock lk(mu_);
    if (capacity == 0) return Errc::invalid_name;
    // canonicalize the intermediate components; keep the final segment
    // literal so a watch can sit on a symlink node itself
    std::string canonical;
    if (p == "/") {
        canonical = "/";
    } else {
        auto parent = lookup(path::parent(p), true);
        if (!parent.node) return parent.err;
        std::string_view name = path::basename(p);
        canonical = path::join(node_path(parent.node), name);
        if (parent.node->kind != NodeKind::directory ||
            !parent.node->children.count(std::string(name)))
            return Errc::not_found;
    }
    auto w = WatchRef(new Watch(std::move(canonical), recursive, capacity));
    watches_.push_back(w);
    return w;
}

// snapshot / restore ------------------------------------------------------

namespace {

void collect_lines(const Store::Node* n, const std::string& at, std::vector<std::string>& out)
{
    char mode[8];
    std::snprintf(mode, sizeof mode, "%03o", n->mode & 0777);
    std::string line = std::string(node_kind_name(n->kind)) + "\t" + at + "\t" + mode + "\t";
    if (n->kind == NodeKind::file) line += base64_encode(n->content);
    if (n->kind == NodeKind::symlink) line += n->target;
    out.push_back(std::move(line));
    for (const auto& [name, child] : n->children) {
        collect_lines(child.get(), at == "/" ? "/" + name : at + "/" + name, out);
    }
}

}  // namespace

std::string Store::snapshot_locked() const
{
    std::vector<std::string> lines;
    collect_lines(root_.get(), "/", lines);
    std::sort(lines.begin(), lines.end(), [](const std::string& a, const std::string& b) {
        // sort by the PATH column
        return a.substr(a.find('\t') + 1) < b.substr(b.find('\t') + 1);
    });
    std::string out;
    for (auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::string Store::snapshot() const
{
    std::shared_lock lk(mu_);
    return snapshot_locked();
}

Status Store::restore(std::string_view serialized)
{
    struct Rec {
        NodeKind kind;
        std::string path;
        uint16_t mode;
        std::string payload;
    };
    std::vector<Rec> recs;
    for (auto line : split_lines(serialized)) {
        if (line.empty()) return Errc::malformed_snapshot;
        size_t t1 = line.find('\t');
        if (t1 == std::string_view::npos) return Errc::malformed_snapshot;
        size_t t2 = line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) return Errc::malformed_snapshot;
        size_t t3 = line.find('\t', t2 + 1);
        if (t3 == std::string_view::npos) return Errc::malformed_snapshot;
        Rec r;
        std::string_view kind = line.substr(0, t1);
        if (kind == "dir") r.kind = NodeKind::directory;
        else if (kind == "file") r.kind = NodeKind::file;
        else if (kind == "link") r.kind = NodeKind::symlink;
        else return Errc::malformed_snapshot;
        r.path = std::string(line.substr(t1 + 1, t2 - t1 - 1));
        if (!path::valid_path(r.path)) return Errc::malformed_snapshot;
        std::string_view mode = line.substr(t2 + 1, t3 - t2 - 1);
        if (mode.size() != 3) return Errc::malformed_snapshot;
        uint16_t m = 0;
        for (char c : mode) {
            if (c < '0' || c > '7') return Errc::malformed_snapshot;
            m = uint16_t(m * 8 + (c - '0'));
        }
        r.mode = m;
        r.payload = std::string(line.substr(t3 + 1));
        recs.push_back(std::move(r));
    }
    if (recs.empty() || recs[0].path != "/" || recs[0].kind != NodeKind::directory)
        return Errc::malformed_snapshot;

    auto fresh = std::make_unique<Node>();
    fresh->kind = NodeKind::directory;
    fresh->mode = recs[0].mode;
    fresh->owner = "root";

    uint64_t id = 1;
    fresh->id = id++;
    for (size_t i = 1; i < recs.size(); ++i) {
        auto& r = recs[i];
        if (r.path <= recs[i - 1].path) return Errc::malformed_snapshot;  // sorted + unique
        Errc err = Errc::ok;
        int hops = 0;
        Node* parent = walk(fresh.get(), std::string(path::parent(r.path)), false, hops, err);
        if (!parent || parent->kind != NodeKind::directory) return Errc::malformed_snapshot;
        auto node = std::make_unique<Node>();
        node->id = id++;
        node->kind = r.kind;
        node->name = std::string(path::basename(r.path));
        node->parent = parent;
        node->mode = r.mode;
        if (r.kind == NodeKind::file) {
            auto content = base64_decode(r.payload);
            if (!content) return Errc::malformed_snapshot;
            node->content = std::move(*content);
        } else if (r.kind == NodeKind::symlink) {
            if (!path::valid_path(r.payload)) return Errc::malformed_snapshot;
            node->target = r.payload;
        } else if (!r.payload.empty()) {
            return Errc::malformed_snapshot;
        }
        parent->children.emplace(node->name, std::move(node));
    }

    // restore replaces the tree wholesale and emits no events
    std::unique_lock lk(mu_);
    root_ = std::move(fresh);
    next_id_ = id;
    return {};
}

}  // namespace yanc::store
