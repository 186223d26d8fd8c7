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
#include <variant>
#include <vector>

#include "yanc/errors.hpp"
#include "yanc/values.hpp"

namespace yanc::ofp {

// OpenFlow 1.0.0 wire protocol, big-endian throughout.

constexpr uint8_t kVersion = 0x01;

enum MsgType : uint8_t {
    kTypeHello = 0,
    kTypeError = 1,
    kTypeEchoRequest = 2,
    kTypeEchoReply = 3,
    kTypeVendor = 4,
    kTypeFeaturesRequest = 5,
    kTypeFeaturesReply = 6,
    kTypePacketIn = 10,
    kTypePortStatus = 12,
    kTypePacketOut = 13,
    kTypeFlowMod = 14,
    kTypePortMod = 15,
};

// reserved port numbers
constexpr uint16_t kPortMax = 0xff00;
constexpr uint16_t kPortInPort = 0xfff8;
constexpr uint16_t kPortFlood = 0xfffb;
constexpr uint16_t kPortAll = 0xfffc;
constexpr uint16_t kPortController = 0xfffd;
constexpr uint16_t kPortLocal = 0xfffe;
constexpr uint16_t kPortNone = 0xffff;

constexpr uint16_t kVlanNone = 0xffff;  // matches untagged frames
constexpr uint32_t kBufferNone = 0xffffffff;

constexpr uint32_t kPortConfigDown = 1 << 0;  // ofp_port_config
constexpr uint32_t kPortStateLinkDown = 1 << 0;

// flow wildcard bits
namespace fw {
constexpr uint32_t in_port = 1u << 0;
constexpr uint32_t dl_vlan = 1u << 1;
constexpr uint32_t dl_src = 1u << 2;
constexpr uint32_t dl_dst = 1u << 3;
constexpr uint32_t dl_type = 1u << 4;
constexpr uint32_t nw_proto = 1u << 5;
constexpr uint32_t tp_src = 1u << 6;
constexpr uint32_t tp_dst = 1u << 7;
constexpr int nw_src_shift = 8;
constexpr int nw_dst_shift = 14;
constexpr uint32_t nw_src_mask = 0x3fu << nw_src_shift;
constexpr uint32_t nw_dst_mask = 0x3fu << nw_dst_shift;
constexpr uint32_t dl_vlan_pcp = 1u << 20;
constexpr uint32_t nw_tos = 1u << 21;
constexpr uint32_t all = (1u << 22) - 1;
}  // namespace fw

/// ofp_match. Canonical form keeps wildcarded field bytes zeroed and the
/// nw_{src,dst} mask-length subfields clamped to 32, so equality and golden
/// byte comparisons are meaningful.
struct OfMatch {
    uint32_t wildcards = fw::all;
    uint16_t in_port = 0;
    Mac dl_src{};
    Mac dl_dst{};
    uint16_t dl_vlan = 0;
    uint8_t dl_vlan_pcp = 0;
    uint16_t dl_type = 0;
    uint8_t nw_tos = 0;
    uint8_t nw_proto = 0;
    uint32_t nw_src = 0;
    uint32_t nw_dst = 0;
    uint16_t tp_src = 0;
    uint16_t tp_dst = 0;

    uint8_t nw_src_bits() const { return uint8_t((wildcards & fw::nw_src_mask) >> fw::nw_src_shift); }
    uint8_t nw_dst_bits() const { return uint8_t((wildcards & fw::nw_dst_mask) >> fw::nw_dst_shift); }
    void set_nw_src(uint32_t addr, uint8_t prefix);  // prefix 0..32
    void set_nw_dst(uint32_t addr, uint8_t prefix);

    /// Fully specified: no wildcard bits, both nw mask-lengths zero.
    bool is_exact() const { return wildcards == 0; }

    void canonicalize();

    bool operator==(const OfMatch&) const = default;
};

OfMatch match_all();

struct ActionOutput {
    uint16_t port = 0;
    uint16_t max_len = 0;
    bool operator==(const ActionOutput&) const = default;
};
struct ActionSetDlSrc {
    Mac mac{};
    bool operator==(const ActionSetDlSrc&) const = default;
};
struct ActionSetDlDst {
    Mac mac{};
    bool operator==(const ActionSetDlDst&) const = default;
};
/// Any other action type, carried verbatim (body excludes the type/len header).
struct ActionUnknown {
    uint16_t type = 0xffff;
    std::string body;
    bool operator==(const ActionUnknown&) const = default;
};
using Action = std::variant<ActionOutput, ActionSetDlSrc, ActionSetDlDst, ActionUnknown>;

struct PhyPort {
    uint16_t port_no = 0;
    Mac hw_addr{};
    std::string name;  // at most 15 bytes on the wire
    uint32_t config = 0;
    uint32_t state = 0;
    uint32_t curr = 0;
    uint32_t advertised = 0;
    uint32_t supported = 0;
    uint32_t peer = 0;
    bool operator==(const PhyPort&) const = default;
};

struct Hello {
    uint32_t xid = 0;
    bool operator==(const Hello&) const = default;
};
struct EchoRequest {
    uint32_t xid = 0;
    std::string data;
    bool operator==(const EchoRequest&) const = default;
};
struct EchoReply {
    uint32_t xid = 0;
    std::string data;
    bool operator==(const EchoReply&) const = default;
};
struct FeaturesRequest {
    uint32_t xid = 0;
    bool operator==(const FeaturesRequest&) const = default;
};
struct FeaturesReply {
    uint32_t xid = 0;
    uint64_t datapath_id = 0;
    uint32_t n_buffers = 0;
    uint8_t n_tables = 0;
    uint32_t capabilities = 0;
    uint32_t actions = 0;
    std::vector<PhyPort> ports;
    bool operator==(const FeaturesReply&) const = default;
};
enum PacketInReason : uint8_t { kReasonNoMatch = 0, kReasonAction = 1 };
struct PacketIn {
    uint32_t xid = 0;
    uint32_t buffer_id = kBufferNone;
    uint16_t total_len = 0;
    uint16_t in_port = 0;
    uint8_t reason = kReasonNoMatch;
    std::string data;
    bool operator==(const PacketIn&) const = default;
};
struct PacketOut {
    uint32_t xid = 0;
    uint32_t buffer_id = kBufferNone;
    uint16_t in_port = kPortNone;
    std::vector<Action> actions;
    std::string data;
    bool operator==(const PacketOut&) const = default;
};
enum class FlowModCommand : uint16_t {
    add = 0,
    modify = 1,
    modify_strict = 2,
    remove = 3,
    remove_strict = 4,
};
struct FlowMod {
    uint32_t xid = 0;
    OfMatch match;
    uint64_t cookie = 0;
    FlowModCommand command = FlowModCommand::add;
    uint16_t idle_timeout = 0;
    uint16_t hard_timeout = 0;
    uint16_t priority = 0x8000;
    uint32_t buffer_id = kBufferNone;
    uint16_t out_port = kPortNone;
    uint16_t flags = 0;
    std::vector<Action> actions;
    bool operator==(const FlowMod&) const = default;
};
struct PortMod {
    uint32_t xid = 0;
    uint16_t port_no = 0;
    Mac hw_addr{};
    uint32_t config = 0;
    uint32_t mask = 0;
    uint32_t advertise = 0;
    bool operator==(const PortMod&) const = default;
};
enum PortStatusReason : uint8_t { kPortAdd = 0, kPortDelete = 1, kPortModify = 2 };
struct PortStatus {
    uint32_t xid = 0;
    uint8_t reason = kPortAdd;
    PhyPort port;
    bool operator==(const PortStatus&) const = default;
};
/// Message types outside the modeled set; skipped by drivers, never fatal.
struct Unknown {
    uint32_t xid = 0;
    uint8_t msg_type = 0;
    std::string body;
    bool operator==(const Unknown&) const = default;
};

using OfMessage = std::variant<Hello, EchoRequest, EchoReply, FeaturesRequest, FeaturesReply,
                               PacketIn, PacketOut, FlowMod, PortMod, PortStatus, Unknown>;

uint32_t xid_of(const OfMessage&);
uint8_t wire_type(const OfMessage&);
std::string_view message_name(const OfMessage&);

Result<std::string> serialize(const OfMessage&);

constexpr size_t kMatchWireLen = 40;
void append_match(std::string& out, const OfMatch&);      // 40 canonical bytes
Result<OfMatch> parse_match40(std::string_view bytes40);  // consumes exactly 40 bytes

struct Parsed {
    OfMessage msg;
    size_t consumed = 0;
};

/// Consumes exactly one message. Errc::truncated means "wait for more bytes".
Result<Parsed> parse(std::string_view bytes);

/// Stream reassembler for transports that deliver arbitrary chunks.
class Decoder {
public:
    void feed(std::string_view bytes) { buf_.append(bytes.data(), bytes.size()); }

    /// nullopt: need more input. Errors other than truncated are sticky-free:
    /// the offending message is consumed and decoding continues.
    Result<std::optional<OfMessage>> next();

    size_t buffered() const { return buf_.size(); }

private:
    std::string buf_;
};

}  // namespace yanc::ofp
