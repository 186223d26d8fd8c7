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

#include <map>
#include <string>
#include <utility>

#include "yanc/fs.hpp"

namespace yanc::apps {

/// The topology daemon: floods LLDP probes out every port each round and
/// turns received probes into `peer` symlinks (both directions). A link not
/// re-observed for `max_age` consecutive rounds is unlinked again.
///
/// One round consumes the probes sent the round before, so a fresh fabric is
/// fully linked after two rounds.
class Topod {
public:
    struct Options {
        std::string net_root = "/net";
        int max_age = 3;
        uint16_t ttl = 120;
    };

    explicit Topod(Fs& fs) : Topod(fs, Options{}) {}
    Topod(Fs& fs, Options opt) : fs_(fs), opt_(std::move(opt)) {}

    void run_round();
    int round() const { return round_; }

    /// Links currently believed present (sorted endpoint port-path pairs).
    std::map<std::pair<std::string, std::string>, int> links() const { return last_seen_; }

private:
    void collect();
    void prune();
    void probe();
    void set_peer(const std::string& port_path, const std::string& target);

    Fs& fs_;
    Options opt_;
    int round_ = 0;
    std::map<std::pair<std::string, std::string>, int> last_seen_;
    uint64_t probe_seq_ = 0;
};

}  // namespace yanc::apps
