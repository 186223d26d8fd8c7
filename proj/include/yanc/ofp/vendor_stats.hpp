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

#include <optional>
#include <vector>

#include "yanc/ofp/codec.hpp"

namespace yanc::ofp {

// Counter updates ride a vendor message (type 4) instead of the STATS
// protocol, which stays out of scope. Switches push, drivers fold the
// numbers into stats.* files when they arrive.

constexpr uint32_t kStatsVendorId = 0x594e4330;  // "YNC0"

struct FlowCounters {
    OfMatch match;
    uint16_t priority = 0;
    uint64_t packet_count = 0;
    uint64_t byte_count = 0;
};

struct PortCounters {
    uint16_t port_no = 0;
    uint64_t rx_packets = 0;
    uint64_t tx_packets = 0;
};

struct StatsPush {
    std::vector<FlowCounters> flows;
    std::vector<PortCounters> ports;
};

Unknown encode_stats_push(const StatsPush&, uint32_t xid);

/// nullopt when the vendor body is not a counter push.
std::optional<StatsPush> decode_stats_push(const Unknown&);

}  // namespace yanc::ofp
