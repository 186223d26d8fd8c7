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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace yanc {

std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

std::string hex_dump(std::string_view bytes);                 // lowercase, no separators
std::optional<std::string> hex_undump(std::string_view hex);  // accepts whitespace

std::string dpid_to_name(uint64_t dpid);                  // 16 lowercase hex digits
std::optional<uint64_t> dpid_from_name(std::string_view);

/// Strips at most one trailing '\n' (optionally preceded by '\r').
std::string_view chomp(std::string_view text);

std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace yanc
