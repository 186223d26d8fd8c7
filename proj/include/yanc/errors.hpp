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

#include <string_view>
#include <utility>
#include <variant>

namespace yanc {

enum class Errc {
    ok = 0,

    // tree / file errors
    not_found,
    not_a_directory,
    is_a_directory,
    already_exists,
    invalid_name,
    permission_denied,
    directory_not_empty,
    not_a_link,
    dangling_link,
    loop_detected,
    malformed_snapshot,

    // schema errors
    not_a_schema_point,
    unknown_field,
    parse_error,
    range_error,
    validation_failed,
    member_unknown,
    flowspace_not_contained,
    empty_intersection,

    // codec errors
    truncated,
    bad_version,
    malformed_body,
    oversize,

    // transport / remote errors
    disconnected,
    store_unreachable,
    protocol_error,
};

std::string_view errc_name(Errc e);
Errc errc_from_name(std::string_view name);  // unknown names map to protocol_error

/// Minimal expected-style result; `Status` is the value-less flavor.
template <typename T>
class Result {
public:
    Result(T v) : v_(std::move(v)) {}
    Result(Errc e) : v_(e) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    T& value() & { return std::get<T>(v_); }
    const T& value() const& { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }
    T* operator->() { return &std::get<T>(v_); }
    const T* operator->() const { return &std::get<T>(v_); }

    Errc error() const { return ok() ? Errc::ok : std::get<Errc>(v_); }

private:
    std::variant<T, Errc> v_;
};

class Status {
public:
    Status() : e_(Errc::ok) {}
    Status(Errc e) : e_(e) {}

    bool ok() const { return e_ == Errc::ok; }
    explicit operator bool() const { return ok(); }
    Errc error() const { return e_; }

private:
    Errc e_;
};

}  // namespace yanc
