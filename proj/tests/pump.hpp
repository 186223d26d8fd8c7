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

#include <cstddef>

namespace yanc::testing {

/// Drives every party's pump() until a full round does no work.
template <typename... Parties>
size_t pump_until_idle(Parties&... parties)
{
    size_t total = 0;
    for (;;) {
        size_t round = (parties.pump() + ... + 0);
        total += round;
        if (round == 0) return total;
    }
}

}  // namespace yanc::testing
