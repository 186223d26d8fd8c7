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

#include "yanc/apps/topod.hpp"

#include <algorithm>

#include "yanc/apps/lldp.hpp"
#include "yanc/path.hpp"

namespace yanc::apps {

namespace {

constexpr const char* kBufferName = "topod";

}  // namespace

void Topod::set_peer(const std::string& port_path, const std::string& target)
{
    std::string link = path::join(port_path, "peer");
    auto existing = fs_.readlink(link);
    if (existing && existing.value() == target) return;  // already right
    fs_.symlink(link, target);
}

void Topod::collect()
{
    auto switches = fs_.list(path::join(opt_.net_root, "switches"));
    if (!switches) return;
    for (const auto& sw : switches.value()) {
        std::string sw_path = path::join(path::join(opt_.net_root, "switches"), sw);
        auto buf = fs_.open_event_buffer(sw_path, kBufferName);
        if (!buf) continue;
        auto records = fs_.list(buf.value());
        if (!records) continue;
        for (const auto& rec : records.value()) {
            std::string rpath = path::join(buf.value(), rec);
            if (rec == "overflowed") {
                fs_.remove(rpath, false);
                continue;
            }
            auto data = fs_.read(path::join(rpath, "data"));
            auto in_port = fs_.read(path::join(rpath, "in_port"));
            fs_.ack_event(rpath);
            if (!data || !in_port) continue;
            auto probe = decode_lldp(data.value());
            if (!probe) continue;  // not ours

            auto port_no = parse_uint(in_port.value(), 65535);
            if (!port_no) continue;
            std::string here = path::join(path::join(sw_path, "ports"),
                                          std::to_string(port_no.value()));
            std::string there =
                path::join(path::join(path::join(path::join(opt_.net_root, "switches"),
                                                 probe.value().chassis),
                                      "ports"),
                           std::to_string(probe.value().port));
            // both endpoints must be real ports before a link is recorded
            auto sh = fs_.stat(here);
            auto st = fs_.stat(there);
            if (!sh || !st) continue;

            set_peer(here, there);
            set_peer(there, here);
            auto key = std::minmax(here, there);
            last_seen_[{key.first, key.second}] = round_;
        }
    }
}

void Topod::prune()
{
    for (auto it = last_seen_.begin(); it != last_seen_.end();) {
        if (round_ - it->second >= opt_.max_age) {
            const auto& [a, b] = it->first;
            // remove only links that still point at each other
            auto la = fs_.readlink(path::join(a, "peer"));
            if (la && la.value() == b) fs_.remove(path::join(a, "peer"), false);
            auto lb = fs_.readlink(path::join(b, "peer"));
            if (lb && lb.value() == a) fs_.remove(path::join(b, "peer"), false);
            it = last_seen_.erase(it);
        } else {
            ++it;
        }
    }
}

void Topod::probe()
{
    auto switches = fs_.list(path::join(opt_.net_root, "switches"));
    if (!switches) return;
    for (const auto& sw : switches.value()) {
        std::string sw_path = path::join(path::join(opt_.net_root, "switches"), sw);
        auto ports = fs_.list(path::join(sw_path, "ports"));
        if (!ports) continue;
        for (const auto& port : ports.value()) {
            auto port_no = parse_uint(port, 65535);
            if (!port_no) continue;

            Mac src{};
            if (auto hw = fs_.read(path::join(path::join(sw_path, "ports"), port) + "/hw_addr")) {
                if (auto mac = parse_mac(hw.value())) src = mac.value();
            }
            LldpProbe probe;
            probe.chassis = sw;
            probe.port = uint16_t(port_no.value());
            probe.ttl = opt_.ttl;

            std::string rec = path::join(path::join(sw_path, "packets_out"),
                                         "lldp" + std::to_string(++probe_seq_));
            if (!fs_.mkdir(rec)) continue;
            fs_.write(path::join(rec, "data"), encode_lldp(probe, src));
            fs_.write(path::join(rec, "in_port"), "none");
            fs_.write(path::join(rec, "action.0.output"), port);
            fs_.write(path::join(rec, "send"), "1");
        }
    }
}

void Topod::run_round()
{
    ++round_;
    collect();
    prune();
    probe();
}

}  // namespace yanc::apps
