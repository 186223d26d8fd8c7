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

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "yanc/errors.hpp"

namespace yanc {

struct Mac {
    std::array<uint8_t, 6> bytes{};

    auto operator<=>(const Mac&) const = default;
    bool is_broadcast() const
    {
        for (auto b : bytes)
            if (b != 0xff) return false;
        return true;
    }
};

/// IPv4 prefix in CIDR notation. prefix == 0 matches everything.
struct Cidr {
    uint32_t addr = 0;  // host byte order
    uint8_t prefix = 32;

    uint32_t mask() const { return prefix == 0 ? 0 : ~uint32_t(0) << (32 - prefix); }
    bool contains(uint32_t ip) const { return (ip & mask()) == (addr & mask()); }

    bool operator==(const Cidr&) const = default;
};

Result<Mac> parse_mac(std::string_view text);  // "aa:bb:cc:dd:ee:ff", case-insensitive
std::string format_mac(const Mac&);            // lowercase

/// Accepts "a.b.c.d/len" and bare "a.b.c.d" (a host route).
Result<Cidr> parse_cidr(std::string_view text);
std::string format_cidr(const Cidr&);  // always carries the /len suffix

Result<uint32_t> parse_ipv4(std::string_view text);
std::string format_ipv4(uint32_t addr);

/// Unsigned decimal, or hex with a 0x prefix. Values above `max` are a
/// range_error; garbage is a parse_error.
Result<uint64_t> parse_uint(std::string_view text, uint64_t max);

}  // namespace yanc
