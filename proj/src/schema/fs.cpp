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

#include "yanc/fs.hpp"

namespace yanc {

namespace {

class LocalWatch : public FsWatch {
public:
    explicit LocalWatch(store::WatchRef w) : w_(std::move(w)) {}
    std::optional<store::ChangeEvent> next(std::chrono::milliseconds timeout) override
    {
        return w_->next(timeout);
    }
    std::optional<store::ChangeEvent> poll() override { return w_->poll(); }

private:
    store::WatchRef w_;
};

}  // namespace

Result<std::shared_ptr<FsWatch>> LocalFs::watch(std::string_view p, bool recursive,
                                                size_t capacity)
{
    auto w = netfs_.watch(p, recursive, capacity);
    if (!w) return w.error();
    return std::shared_ptr<FsWatch>(new LocalWatch(std::move(w.value())));
}

}  // namespace yanc
