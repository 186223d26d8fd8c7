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

// Test-tree helper: checks that a simulated switch's table is exactly the
// schema's committed flow set: a bijection on (match, priority) with equal
// action lists and timeouts.

#include <map>
#include <string>

#include "yanc/ofp/translate.hpp"
#include "yanc/schema/schema.hpp"
#include "yanc/sim/fabric.hpp"
#include "yanc/util.hpp"

namespace yanc::testing {

inline std::string match_key(const ofp::OfMatch& m)
{
    std::string bytes;
    ofp::append_match(bytes, m);
    return hex_dump(bytes);
}

inline bool actions_equal(const std::vector<ofp::Action>& a, const std::vector<ofp::Action>& b)
{
    return a == b;
}

/// Empty string on success, else a human-readable mismatch description.
inline std::string table_matches_committed(const sim::SimSwitch& sw, schema::Netfs& net,
                                           const std::string& switch_path)
{
    std::map<std::pair<std::string, uint16_t>, const sim::TableEntry*> table;
    for (const auto& e : sw.table()) {
        auto key = std::make_pair(match_key(e.match), e.priority);
        if (table.count(key)) return "duplicate table entry " + key.first;
        table[key] = &e;
    }

    auto committed = net.committed_under(switch_path + "/flows/");
    if (committed.size() != table.size())
        return "size mismatch: table " + std::to_string(table.size()) + " vs committed " +
               std::to_string(committed.size());

    for (const auto& [fpath, img] : committed) {
        auto key = std::make_pair(match_key(ofp::match_from_schema(img.match)), img.priority);
        auto it = table.find(key);
        if (it == table.end()) return "missing on switch: " + fpath;
        if (!actions_equal(it->second->actions, ofp::actions_from_schema(img.actions)))
            return "action mismatch: " + fpath;
        if (it->second->idle_timeout != img.idle_timeout ||
            it->second->hard_timeout != img.hard_timeout)
            return "timeout mismatch: " + fpath;
    }
    return {};
}

}  // namespace yanc::testing
