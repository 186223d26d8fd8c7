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

#include "yanc/sim/fabric.hpp"

#include "yanc/util.hpp"

namespace yanc::sim {

constexpr uint64_t kHopLimit = 64;
constexpr uint64_t kPumpBudget = 4096;

std::vector<Fabric::Emission> Fabric::Report::egress() const
{
    std::vector<Emission> out;
    for (const auto& e : emissions)
        if (!e.to_link) out.push_back(e);
    return out;
}

void Fabric::Report::merge(const Report& other)
{
    emissions.insert(emissions.end(), other.emissions.begin(), other.emissions.end());
    packet_ins.insert(packet_ins.end(), other.packet_ins.begin(), other.packet_ins.end());
    receptions += other.receptions;
    hop_limit = hop_limit || other.hop_limit;
}

SimSwitch& Fabric::add_switch(uint64_t dpid, uint16_t n_ports)
{
    std::vector<uint16_t> numbers;
    for (uint16_t i = 1; i <= n_ports; ++i) numbers.push_back(i);
    auto sw = std::make_unique<SimSwitch>(dpid, std::move(numbers));
    SimSwitch& ref = *sw;
    switches_[dpid] = std::move(sw);
    wire(ref);
    return ref;
}

void Fabric::wire(SimSwitch& sw)
{
    uint64_t dpid = sw.dpid();
    sw.on_emit = [this, dpid](uint16_t port, std::string_view frame) {
        auto link = links_.find({dpid, port});
        bool to_link = link != links_.end();
        current_.emissions.push_back(Emission{dpid, port, std::string(frame), to_link});
        if (to_link)
            pending_.push_back(Pending{link->second.first, link->second.second,
                                       std::string(frame)});
    };
    sw.on_packet_in = [this, dpid](uint16_t in_port, uint8_t reason, std::string_view frame) {
        current_.packet_ins.push_back(Pin{dpid, in_port, reason, std::string(frame)});
    };
}

Status Fabric::apply(const TopoSpec& spec)
{
    for (auto [dpid, n] : spec.switches) add_switch(dpid, n);
    for (const auto& l : spec.links) {
        Status st = link(l.a, l.ap, l.b, l.bp);
        if (!st) return st;
    }
    return {};
}

Status Fabric::link(uint64_t a, uint16_t ap, uint64_t b, uint16_t bp)
{
    SimSwitch* sa = find(a);
    SimSwitch* sb = find(b);
    if (!sa || !sa->port(ap) || !sb || !sb->port(bp)) return Errc::not_found;
    if (links_.count({a, ap}) || links_.count({b, bp})) return Errc::already_exists;
    links_[{a, ap}] = {b, bp};
    links_[{b, bp}] = {a, ap};
    return {};
}

Status Fabric::unlink(uint64_t a, uint16_t ap)
{
    auto it = links_.find({a, ap});
    if (it == links_.end()) return Errc::not_found;
    auto peer = it->second;
    links_.erase(it);
    links_.erase(peer);
    return {};
}

std::optional<std::pair<uint64_t, uint16_t>> Fabric::peer_of(uint64_t dpid, uint16_t port) const
{
    auto it = links_.find({dpid, port});
    if (it == links_.end()) return std::nullopt;
    return it->second;
}

SimSwitch* Fabric::find(uint64_t dpid)
{
    auto it = switches_.find(dpid);
    return it == switches_.end() ? nullptr : it->second.get();
}

std::vector<uint64_t> Fabric::dpids() const
{
    std::vector<uint64_t> out;
    for (const auto& [d, s] : switches_) out.push_back(d);
    return out;
}

// current_ may already hold emissions recorded while switches pumped
// controller messages; they belong to this run's report.
Fabric::Report Fabric::run(uint64_t budget)
{
    while (!pending_.empty()) {
        if (current_.receptions >= budget) {
            current_.hop_limit = true;
            pending_.clear();
            break;
        }
        Pending p = std::move(pending_.front());
        pending_.pop_front();
        SimSwitch* sw = find(p.dpid);
        if (!sw) continue;
        current_.receptions++;
        sw->receive_frame(p.port, p.frame);
    }
    Report out = std::move(current_);
    current_ = Report{};
    cumulative_.merge(out);
    return out;
}

Result<Fabric::Report> Fabric::inject(uint64_t dpid, uint16_t port, std::string frame)
{
    SimSwitch* sw = find(dpid);
    if (!sw) return Errc::not_found;
    SimPort* p = sw->port(port);
    if (!p) return Errc::not_found;
    if (p->admin_down) return Errc::permission_denied;
    pending_.push_back(Pending{dpid, port, std::move(frame)});
    Report rep = run(kHopLimit);
    if (rep.hop_limit) return Errc::loop_detected;  // a forwarding loop
    return rep;
}

size_t Fabric::pump()
{
    size_t work = 0;
    for (auto& [dpid, sw] : switches_) work += sw->pump();
    Report rep = run(kPumpBudget);
    work += rep.receptions + rep.emissions.size() + rep.packet_ins.size();
    return work;
}

void Fabric::connect_all(const std::function<driver::TransportRef(uint64_t)>& dial)
{
    for (auto& [dpid, sw] : switches_) sw->connect(dial(dpid));
}

Fabric::Report Fabric::take_report()
{
    Report out = std::move(cumulative_);
    cumulative_ = Report{};
    return out;
}

Result<TopoSpec> parse_topo(std::string_view text)
{
    TopoSpec spec;
    for (auto raw : split_lines(text)) {
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.remove_prefix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.remove_suffix(1);
        if (line.empty()) continue;

        auto fields = [](std::string_view s) {
            std::vector<std::string_view> out;
            size_t i = 0;
            while (i < s.size()) {
                while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
                size_t start = i;
                while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
                if (i > start) out.push_back(s.substr(start, i - start));
            }
            return out;
        }(line);

        auto parse_dpid = [](std::string_view t) -> Result<uint64_t> {
            if (t.starts_with("0x")) t.remove_prefix(2);
            if (t.empty() || t.size() > 16) return Errc::parse_error;
            uint64_t v = 0;
            for (char c : t) {
                int d;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else return Errc::parse_error;
                v = (v << 4) | uint64_t(d);
            }
            return v;
        };
        auto parse_end = [&](std::string_view t) -> Result<std::pair<uint64_t, uint16_t>> {
            size_t colon = t.find(':');
            if (colon == std::string_view::npos) return Errc::parse_error;
            auto d = parse_dpid(t.substr(0, colon));
            if (!d) return d.error();
            auto p = parse_uint(t.substr(colon + 1), 65535);
            if (!p || p.value() == 0) return Errc::parse_error;
            return std::make_pair(d.value(), uint16_t(p.value()));
        };

        if (fields.size() == 3 && fields[0] == "switch" && fields[2].starts_with("ports=")) {
            auto d = parse_dpid(fields[1]);
            auto n = parse_uint(fields[2].substr(6), 65535);
            if (!d || !n || n.value() == 0) return Errc::parse_error;
            spec.switches.emplace_back(d.value(), uint16_t(n.value()));
        } else if (fields.size() == 3 && fields[0] == "link") {
            auto a = parse_end(fields[1]);
            auto b = parse_end(fields[2]);
            if (!a || !b) return Errc::parse_error;
            spec.links.push_back(
                TopoSpec::Link{a.value().first, a.value().second, b.value().first, b.value().second});
        } else {
            return Errc::parse_error;
        }
    }
    return spec;
}

}  // namespace yanc::sim
