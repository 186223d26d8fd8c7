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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yanc/schema/schema.hpp"
#include "yanc/store/store.hpp"

namespace yanc {

class FsWatch {
public:
    virtual ~FsWatch() = default;
    virtual std::optional<store::ChangeEvent> next(std::chrono::milliseconds timeout) = 0;
    virtual std::optional<store::ChangeEvent> poll() = 0;
};

/// The client surface every application speaks: implemented in-process over
/// the schema layer and remotely over the store service. Applications never
/// share state except through this interface.
class Fs {
public:
    virtual ~Fs() = default;

    Status mkdir(std::string_view path) { return mkdir(path, false); }
    virtual Status mkdir(std::string_view path, bool reserved_names) = 0;
    virtual Status mkfile(std::string_view path) = 0;
    virtual Result<std::string> read(std::string_view path) = 0;
    virtual Status write(std::string_view path, std::string_view bytes) = 0;
    virtual Status remove(std::string_view path, bool recursive) = 0;
    virtual Status rename(std::string_view old_path, std::string_view new_path) = 0;
    virtual Status symlink(std::string_view path, std::string_view target) = 0;
    virtual Result<std::string> readlink(std::string_view path) = 0;
    virtual Result<std::vector<std::string>> list(std::string_view path) = 0;
    virtual Result<store::NodeInfo> stat(std::string_view path) = 0;
    virtual Result<std::shared_ptr<FsWatch>> watch(std::string_view path, bool recursive,
                                                   size_t capacity) = 0;

    virtual Status mk_semantic(std::string_view path) = 0;
    virtual Status rm_semantic(std::string_view path) = 0;
    virtual Result<uint64_t> commit_flow(std::string_view flow_path) = 0;
    virtual Result<schema::FlowImage> committed_flow(std::string_view flow_path) = 0;
    virtual Result<std::string> open_event_buffer(std::string_view switch_path,
                                                  std::string_view app) = 0;
    Status enqueue_event(std::string_view switch_path, const schema::EventIn& ev)
    {
        return enqueue_event(switch_path, ev, {});
    }
    virtual Status enqueue_event(std::string_view switch_path, const schema::EventIn& ev,
                                 std::string_view forced_name) = 0;
    virtual Status ack_event(std::string_view record_path) = 0;

    virtual std::string identity() const = 0;
};

/// In-process binding of one application identity to the schema layer.
class LocalFs : public Fs {
public:
    LocalFs(schema::Netfs& netfs, std::string identity)
        : netfs_(netfs), identity_(std::move(identity)) {}

    using Fs::mkdir;
    using Fs::enqueue_event;
    Status mkdir(std::string_view p, bool reserved) override
    {
        return netfs_.mkdir(p, identity_, reserved);
    }
    Status mkfile(std::string_view p) override { return netfs_.mkfile(p, identity_); }
    Result<std::string> read(std::string_view p) override { return netfs_.read(p); }
    Status write(std::string_view p, std::string_view b) override
    {
        return netfs_.write(p, b, identity_);
    }
    Status remove(std::string_view p, bool r) override { return netfs_.remove(p, r, identity_); }
    Status rename(std::string_view o, std::string_view n) override
    {
        return netfs_.rename(o, n, identity_);
    }
    Status symlink(std::string_view p, std::string_view t) override
    {
        return netfs_.symlink(p, t, identity_);
    }
    Result<std::string> readlink(std::string_view p) override { return netfs_.readlink(p); }
    Result<std::vector<std::string>> list(std::string_view p) override { return netfs_.list(p); }
    Result<store::NodeInfo> stat(std::string_view p) override { return netfs_.stat(p); }
    Result<std::shared_ptr<FsWatch>> watch(std::string_view p, bool recursive,
                                           size_t capacity) override;

    Status mk_semantic(std::string_view p) override { return netfs_.mk_semantic(p, identity_); }
    Status rm_semantic(std::string_view p) override { return netfs_.rm_semantic(p); }
    Result<uint64_t> commit_flow(std::string_view p) override
    {
        return netfs_.commit_flow(p, identity_);
    }
    Result<schema::FlowImage> committed_flow(std::string_view p) override
    {
        return netfs_.committed_flow(p);
    }
    Result<std::string> open_event_buffer(std::string_view sw, std::string_view app) override
    {
        return netfs_.open_event_buffer(sw, app, identity_);
    }
    Status enqueue_event(std::string_view sw, const schema::EventIn& ev,
                         std::string_view forced_name) override
    {
        return netfs_.enqueue_event(sw, ev, forced_name);
    }
    Status ack_event(std::string_view p) override { return netfs_.ack_event(p); }

    std::string identity() const override { return identity_; }

private:
    schema::Netfs& netfs_;
    std::string identity_;
};

}  // namespace yanc
