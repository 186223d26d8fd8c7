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

#include "yanc/values.hpp"

#include <cstdio>

#include "yanc/util.hpp"

namespace yanc {

namespace {

int hex_digit(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Result<Mac> parse_mac(std::string_view text)
{
    text = chomp(text);
    if (text.size() != 17) return Errc::parse_error;
    Mac mac;
    for (int i = 0; i < 6; ++i) {
        int hi = hex_digit(text[i * 3]);
        int lo = hex_digit(text[i * 3 + 1]);
        if (hi < 0 || lo < 0) return Errc::parse_error;
        if (i < 5 && text[i * 3 + 2] != ':') return Errc::parse_error;
        mac.bytes[i] = uint8_t((hi << 4) | lo);
    }
    return mac;
}

std::string format_mac(const Mac& mac)
{
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", mac.bytes[0], mac.bytes[1],
                  mac.bytes[2], mac.bytes[3], mac.bytes[4], mac.bytes[5]);
    return buf;
}

Result<uint32_t> parse_ipv4(std::string_view text)
{
    text = chomp(text);
    uint32_t addr = 0;
    int octets = 0;
    size_t i = 0;
    while (octets < 4) {
        if (i >= text.size()) return Errc::parse_error;
        uint32_t v = 0;
        size_t digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            v = v * 10 + uint32_t(text[i] - '0');
            if (v > 255) return Errc::parse_error;
            ++i;
            ++digits;
        }
        if (digits == 0 || digits > 3) return Errc::parse_error;
        addr = (addr << 8) | v;
        ++octets;
        if (octets < 4) {
            if (i >= text.size() || text[i] != '.') return Errc::parse_error;
            ++i;
        }
    }
    if (i != text.size()) return Errc::parse_error;
    return addr;
}

std::string format_ipv4(uint32_t addr)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (addr >> 24) & 0xff, (addr >> 16) & 0xff,
                  (addr >> 8) & 0xff, addr & 0xff);
    return buf;
}

Result<Cidr> parse_cidr(std::string_view text)
{
    text = chomp(text);
    size_t slash = text.find('/');
    Cidr out;
    if (slash == std::string_view::npos) {
        auto addr = parse_ipv4(text);
        if (!addr) return addr.error();
        out.addr = addr.value();
        out.prefix = 32;
        return out;
    }
    auto addr = parse_ipv4(text.substr(0, slash));
    if (!addr) return addr.error();
    std::string_view len = text.substr(slash + 1);
    if (len.empty() || len.size() > 2) return Errc::parse_error;
    uint32_t v = 0;
    for (char c : len) {
        if (c < '0' || c > '9') return Errc::parse_error;
        v = v * 10 + uint32_t(c - '0');
    }
    if (v > 32) return Errc::parse_error;
    out.addr = addr.value();
    out.prefix = uint8_t(v);
    return out;
}

std::string format_cidr(const Cidr& c)
{
    return format_ipv4(c.addr) + "/" + std::to_string(c.prefix);
}

Result<uint64_t> parse_uint(std::string_view text, uint64_t max)
{
    text = chomp(text);
    if (text.empty()) return Errc::parse_error;
    uint64_t v = 0;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        if (text.size() > 18) return Errc::parse_error;
        for (char c : text.substr(2)) {
            int d = hex_digit(c);
            if (d < 0) return Errc::parse_error;
            v = (v << 4) | uint64_t(d);
        }
    } else {
        if (text.size() > 19) return Errc::parse_error;
        for (char c : text) {
            if (c < '0' || c > '9') return Errc::parse_error;
            v = v * 10 + uint64_t(c - '0');
        }
    }
    if (v > max) return Errc::range_error;
    return v;
}

}  // namespace yanc
