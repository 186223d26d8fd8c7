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

#include <string>
#include <string_view>
#include <vector>

namespace yanc::path {

/// Tree paths are absolute, '/'-separated, with no "." or ".." segments.
/// Segment grammar: non-empty UTF-8, no '/', no control bytes.
bool valid_name(std::string_view segment);
bool valid_path(std::string_view path);  // "/" or "/a/b/..."

std::vector<std::string_view> split(std::string_view path);  // "/" -> {}
std::string join(std::string_view dir, std::string_view name);
std::string_view parent(std::string_view path);    // parent("/a") == "/"
std::string_view basename(std::string_view path);  // basename("/") == ""

/// True when `p` lies strictly under `root` ("/" is above everything).
bool is_under(std::string_view root, std::string_view p);

}  // namespace yanc::path
