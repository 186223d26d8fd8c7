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

#include "yanc/util.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "yanc/errors.hpp"
#include "yanc/path.hpp"

namespace yanc {

namespace {

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c)
{
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

}  // namespace

std::string base64_encode(std::string_view bytes)
{
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= bytes.size()) {
        uint32_t v = (uint8_t(bytes[i]) << 16) | (uint8_t(bytes[i + 1]) << 8) | uint8_t(bytes[i + 2]);
        out += kB64Alphabet[(v >> 18) & 0x3f];
        out += kB64Alphabet[(v >> 12) & 0x3f];
        out += kB64Alphabet[(v >> 6) & 0x3f];
        out += kB64Alphabet[v & 0x3f];
        i += 3;
    }
    size_t rem = bytes.size() - i;
    if (rem == 1) {
        uint32_t v = uint8_t(bytes[i]) << 16;
        out += kB64Alphabet[(v >> 18) & 0x3f];
        out += kB64Alphabet[(v >> 12) & 0x3f];
        out += "==";
    } else if (rem == 2) {
        uint32_t v = (uint8_t(bytes[i]) << 16) | (uint8_t(bytes[i + 1]) << 8);
        out += kB64Alphabet[(v >> 18) & 0x3f];
        out += kB64Alphabet[(v >> 12) & 0x3f];
        out += kB64Alphabet[(v >> 6) & 0x3f];
        out += '=';
    }
    return out;
}

std::optional<std::string> base64_decode(std::string_view text)
{
    if (text.size() % 4 != 0) return std::nullopt;
    std::string out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        std::array<int, 4> v{};
        for (int j = 0; j < 4; ++j) {
            char c = text[i + j];
            if (c == '=') {
                // padding only in the last two positions of the last group
                if (i + 4 != text.size() || j < 2) return std::nullopt;
                v[j] = 0;
                ++pad;
            } else {
                if (pad) return std::nullopt;
                v[j] = b64_value(c);
                if (v[j] < 0) return std::nullopt;
            }
        }
        uint32_t bits = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
        out += char((bits >> 16) & 0xff);
        if (pad < 2) out += char((bits >> 8) & 0xff);
        if (pad < 1) out += char(bits & 0xff);
    }
    return out;
}

std::string hex_dump(std::string_view bytes)
{
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out += digits[c >> 4];
        out += digits[c & 0xf];
    }
    return out;
}

std::optional<std::string> hex_undump(std::string_view hex)
{
    std::string out;
    int hi = -1;
    for (char c : hex) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else return std::nullopt;
        if (hi < 0) {
            hi = v;
        } else {
            out += char((hi << 4) | v);
            hi = -1;
        }
    }
    if (hi >= 0) return std::nullopt;
    return out;
}

std::string dpid_to_name(uint64_t dpid)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(dpid));
    return buf;
}

std::optional<uint64_t> dpid_from_name(std::string_view name)
{
    if (name.size() != 16) return std::nullopt;
    uint64_t v = 0;
    for (char c : name) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else return std::nullopt;
        v = (v << 4) | uint64_t(d);
    }
    return v;
}

std::string_view chomp(std::string_view text)
{
    if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    return text;
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

std::string_view errc_name(Errc e)
{
    switch (e) {
        case Errc::ok: return "ok";
        case Errc::not_found: return "not_found";
        case Errc::not_a_directory: return "not_a_directory";
        case Errc::is_a_directory: return "is_a_directory";
        case Errc::already_exists: return "already_exists";
        case Errc::invalid_name: return "invalid_name";
        case Errc::permission_denied: return "permission_denied";
        case Errc::directory_not_empty: return "directory_not_empty";
        case Errc::not_a_link: return "not_a_link";
        case Errc::dangling_link: return "dangling_link";
        case Errc::loop_detected: return "loop_detected";
        case Errc::malformed_snapshot: return "malformed_snapshot";
        case Errc::not_a_schema_point: return "not_a_schema_point";
        case Errc::unknown_field: return "unknown_field";
        case Errc::parse_error: return "parse_error";
        case Errc::range_error: return "range_error";
        case Errc::validation_failed: return "validation_failed";
        case Errc::member_unknown: return "member_unknown";
        case Errc::flowspace_not_contained: return "flowspace_not_contained";
        case Errc::empty_intersection: return "empty_intersection";
        case Errc::truncated: return "truncated";
        case Errc::bad_version: return "bad_version";
        case Errc::malformed_body: return "malformed_body";
        case Errc::oversize: return "oversize";
        case Errc::disconnected: return "disconnected";
        case Errc::store_unreachable: return "store_unreachable";
        case Errc::protocol_error: return "protocol_error";
    }
    return "protocol_error";
}

Errc errc_from_name(std::string_view name)
{
    for (int i = 0; i <= int(Errc::protocol_error); ++i) {
        if (errc_name(Errc(i)) == name) return Errc(i);
    }
    return Errc::protocol_error;
}

namespace path {

bool valid_name(std::string_view segment)
{
    if (segment.empty() || segment == "." || segment == "..") return false;
    for (unsigned char c : segment) {
        if (c == '/' || c < 0x20 || c == 0x7f) return false;
    }
    return true;
}

bool valid_path(std::string_view p)
{
    if (p.empty() || p[0] != '/') return false;
    if (p == "/") return true;
    if (p.back() == '/') return false;
    size_t start = 1;
    while (start < p.size()) {
        size_t slash = p.find('/', start);
        size_t end = slash == std::string_view::npos ? p.size() : slash;
        if (!valid_name(p.substr(start, end - start))) return false;
        start = end + 1;
    }
    return true;
}

std::vector<std::string_view> split(std::string_view p)
{
    std::vector<std::string_view> out;
    size_t start = 1;
    while (start < p.size()) {
        size_t slash = p.find('/', start);
        size_t end = slash == std::string_view::npos ? p.size() : slash;
        if (end > start) out.push_back(p.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::string join(std::string_view dir, std::string_view name)
{
    std::string out(dir);
    if (out.empty() || out.back() != '/') out += '/';
    out += name;
    return out;
}

std::string_view parent(std::string_view p)
{
    if (p == "/") return "/";
    size_t slash = p.rfind('/');
    if (slash == 0) return "/";
    return p.substr(0, slash);
}

std::string_view basename(std::string_view p)
{
    if (p == "/") return "";
    size_t slash = p.rfind('/');
    return p.substr(slash + 1);
}

bool is_under(std::string_view root, std::string_view p)
{
    if (root == "/") return p != "/";
    return p.size() > root.size() + 1 && p.compare(0, root.size(), root) == 0 &&
           p[root.size()] == '/';
}

}  // namespace path
}  // namespace yanc
