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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "yanc/errors.hpp"

namespace yanc::store {

enum class NodeKind : uint8_t { directory, file, symlink };

enum class EventKind : uint8_t {
    created,
    modified,
    removed,
    renamed,
    link_changed,
    overflow,
};

std::string_view event_kind_name(EventKind k);
std::optional<EventKind> event_kind_from_name(std::string_view);
std::string_view node_kind_name(NodeKind k);

struct ChangeEvent {
    uint64_t seq = 0;       // global mutation-order sequence
    std::string path;       // canonical absolute path
    EventKind kind = EventKind::created;
    std::string old_path;   // renamed only

    bool operator==(const ChangeEvent&) const = default;
};

struct NodeInfo {
    uint64_t id = 0;
    NodeKind kind = NodeKind::directory;
    uint16_t mode = 0;
    std::string owner;
    uint64_t mtime = 0;  // logical change counter, not wall clock
    uint64_t size = 0;   // bytes for files, entry count for dirs, target length for links
};

/// Bounded event queue fed synchronously by mutations. When full, the oldest
/// events are dropped and a single `overflow` marker takes their place at the
/// point of loss; drops stay silent while a marker is still queued.
class Watch {
public:
    std::optional<ChangeEvent> next(std::chrono::milliseconds timeout);
    std::optional<ChangeEvent> poll();

    const std::string& root() const { return root_; }
    bool recursive() const { return recursive_; }
    size_t capacity() const { return capacity_; }
    size_t pending() const;

private:
    friend class Store;
    Watch(std::string root, bool recursive, size_t capacity)
        : root_(std::move(root)), recursive_(recursive), capacity_(capacity) {}

    bool matches(const ChangeEvent& ev) const;
    void enqueue(const ChangeEvent& ev);

    std::string root_;
    bool recursive_;
    size_t capacity_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<ChangeEvent> queue_;
    bool overflow_queued_ = false;
};

using WatchRef = std::shared_ptr<Watch>;

constexpr int kMaxLinkHops = 16;
constexpr uint16_t kDefaultDirMode = 0777;
constexpr uint16_t kDefaultFileMode = 0666;

/// In-memory hierarchical tree with file-style operations, symlinks and
/// ordered change notification. Mutations run one at a time under a
/// store-wide writer lock; reads may proceed concurrently. Events are
/// enqueued to matching watches before the mutating call returns.
class Store {
public:
    struct Node;  // implementation detail, defined in store.cpp

    Store();
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    /// Mutation API exposed both directly and inside update() batches.
    /// An empty `identity` bypasses the write-permission check (callers
    /// inside the process that own the data, e.g. the schema layer).
    class Txn {
    public:
        Result<uint64_t> create(std::string_view path, NodeKind kind, uint16_t mode,
                                std::string_view owner, std::string_view content = {});
        Result<std::string> read(std::string_view path) const;
        Status write(std::string_view path, std::string_view bytes, std::string_view identity);
        Status remove(std::string_view path, bool recursive);
        Status rename(std::string_view old_path, std::string_view new_path);
        Status symlink(std::string_view path, std::string_view target, std::string_view owner);
        Result<std::string> readlink(std::string_view path) const;
        Result<std::vector<std::string>> list(std::string_view path) const;
        Result<NodeInfo> stat(std::string_view path, bool follow = false) const;
        Status set_mode(std::string_view path, uint16_t mode);
        Result<std::string> resolve(std::string_view path) const;
        bool exists(std::string_view path) const;

    private:
        friend class Store;
        explicit Txn(Store& s) : s_(s) {}
        Store& s_;
    };

    /// `content` seeds files at creation so the node's birth is one event.
    Result<uint64_t> create(std::string_view path, NodeKind kind,
                            uint16_t mode = kDefaultFileMode, std::string_view owner = "",
                            std::string_view content = {});
    Result<std::string> read(std::string_view path) const;
    Status write(std::string_view path, std::string_view bytes, std::string_view identity = "");
    Status remove(std::string_view path, bool recursive = false);
    Status rename(std::string_view old_path, std::string_view new_path);
    Status symlink(std::string_view path, std::string_view target, std::string_view owner = "");
    Result<std::string> readlink(std::string_view path) const;
    Result<std::vector<std::string>> list(std::string_view path) const;
    Result<NodeInfo> stat(std::string_view path, bool follow = false) const;
    Status set_mode(std::string_view path, uint16_t mode);
    Result<std::string> resolve(std::string_view path) const;
    bool exists(std::string_view path) const;

    /// Runs `fn(Txn&)` as one atomic mutation; no other writer interleaves
    /// and every event the batch emits is queued before update() returns.
    template <typename F>
    auto update(F&& fn) {
        std::unique_lock lk(mu_);
        Txn txn(*this);
        return fn(txn);
    }

    Result<WatchRef> watch(std::string_view path, bool recursive, size_t capacity);

    /// Canonical line serialization: `KIND \t PATH \t MODE \t payload`,
    /// sorted by path; payload is base64 for files, the target for links.
    std::string snapshot() const;
    Status restore(std::string_view serialized);

    uint64_t event_seq() const;

private:
    struct Resolved;

    // _locked methods assume mu_ is held (shared for const, unique otherwise)
    Result<uint64_t> create_locked(std::string_view, NodeKind, uint16_t, std::string_view,
                                   std::string_view);
    Result<std::string> read_locked(std::string_view) const;
    Status write_locked(std::string_view, std::string_view, std::string_view);
    Status remove_locked(std::string_view, bool);
    Status rename_locked(std::string_view, std::string_view);
    Status symlink_locked(std::string_view, std::string_view, std::string_view);
    Result<std::string> readlink_locked(std::string_view) const;
    Result<std::vector<std::string>> list_locked(std::string_view) const;
    Result<NodeInfo> stat_locked(std::string_view, bool) const;
    Status set_mode_locked(std::string_view, uint16_t);
    Result<std::string> resolve_locked(std::string_view) const;

    Resolved lookup(std::string_view path, bool follow_final) const;
    void emit(EventKind kind, std::string path, std::string old_path = {});
    void remove_subtree(Node& node, const std::string& at_path);
    std::string snapshot_locked() const;

    mutable std::shared_mutex mu_;
    std::unique_ptr<Node> root_;
    uint64_t next_id_ = 1;
    uint64_t mtime_counter_ = 0;
    uint64_t event_counter_ = 0;
    mutable std::vector<std::weak_ptr<Watch>> watches_;
};

}  // namespace yanc::store
