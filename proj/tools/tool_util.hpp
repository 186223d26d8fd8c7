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

#include <cstdio>
#include <memory>
#include <string>

#include "yanc/errors.hpp"
#include "yanc/remote/remote.hpp"

namespace yanc::tools {

// shared exit-code map: 0 ok, 1 missing, 2 validation, 3 unreachable,
// 4 permission, 5 anything else
inline int exit_code_for(Errc e)
{
    switch (e) {
        case Errc::ok: return 0;
        case Errc::not_found:
        case Errc::dangling_link: return 1;
        case Errc::invalid_name:
        case Errc::parse_error:
        case Errc::range_error:
        case Errc::unknown_field:
        case Errc::validation_failed:
        case Errc::member_unknown:
        case Errc::flowspace_not_contained:
        case Errc::empty_intersection:
        case Errc::not_a_schema_point: return 2;
        case Errc::store_unreachable:
        case Errc::disconnected: return 3;
        case Errc::permission_denied: return 4;
        default: return 5;
    }
}

inline int fail(Errc e, const std::string& what)
{
    std::fprintf(stderr, "error: %s: %s\n", what.c_str(), std::string(errc_name(e)).c_str());
    return exit_code_for(e);
}

inline std::unique_ptr<remote::RemoteFs> connect_or_die(const std::string& endpoint,
                                                        const std::string& identity, int* rc)
{
    auto fs = remote::RemoteFs::connect(endpoint, identity);
    if (!fs) {
        std::fprintf(stderr, "error: store unreachable at %s\n", endpoint.c_str());
        *rc = 3;
        return nullptr;
    }
    *rc = 0;
    return std::move(fs.value());
}

}  // namespace yanc::tools
