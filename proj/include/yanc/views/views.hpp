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

#include <memory>
#include <string>
#include <vector>

#include "yanc/fs.hpp"
#include "yanc/ofp/packet.hpp"
#include "yanc/schema/fields.hpp"

namespace yanc::views {

// A slice is a subset of switches plus a flowspace over the header fields;
// the topology itself is untouched. Flows written inside the slice are
// rewritten into the parent with their match intersected against the
// flowspace; packet-ins are filtered into the slice's buffers. Slices nest.

/// Field-wise flowspace intersection. Empty when any field's constraints
/// are disjoint; `conflict_field` then names the first such field.
struct Intersection {
    bool empty = false;
    std::string conflict_field;
    schema::FlowMatch value;
};

Intersection intersect(const schema::FlowMatch& a, const schema::FlowMatch& b);

/// inner inside outer, field-wise (exact equality / prefix containment).
bool flowspace_contains(const schema::FlowMatch& outer, const schema::FlowMatch& inner);

struct ViewSpec {
    std::string path;                  // the view directory
    std::vector<std::string> members;  // switch names within the parent
    schema::FlowMatch flowspace;
};

/// The enclosing view's directory ("/net" counts as the root view).
std::string parent_view_of(std::string_view view_path);

/// Validates members and flowspace containment, writes the .slice control
/// files and materializes mirror switch/port entries for every member.
Status define_view(Fs&, const ViewSpec&);

Result<ViewSpec> load_view(Fs&, std::string_view view_path);

/// Removes every parent flow the view translated (name prefix scan) and the
/// view directory itself.
Status teardown_view(Fs&, std::string_view view_path);

std::vector<std::string> list_views(Fs&, std::string_view root_view);

/// The per-view translation task: an ordinary store client holding watches
/// on the mirror and buffers on the parent switches.
class ViewEngine {
public:
    ViewEngine(Fs& fs, std::string view_path) : fs_(fs), view_path_(std::move(view_path)) {}

    Status init();  // load the spec, open watches and parent buffers
    size_t pump();

    const ViewSpec& spec() const { return spec_; }
    const std::string& parent() const { return parent_; }

private:
    void handle_commit(const std::string& mirror_flow);
    void handle_removed(const std::string& mirror_flow);
    size_t filter_records();
    std::string parent_flow_for(const std::string& mirror_flow) const;

    Fs& fs_;
    std::string view_path_;
    ViewSpec spec_;
    std::string parent_;
    std::string buffer_name_;
    std::shared_ptr<FsWatch> flows_w_;
    std::vector<std::shared_ptr<FsWatch>> port_watches_;
    bool ready_ = false;
};

}  // namespace yanc::views
