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

#include "yanc/ofp/codec.hpp"

#include <cstring>

namespace yanc::ofp {

namespace {

constexpr size_t kHeaderLen = 8;
constexpr size_t kMatchLen = 40;
constexpr size_t kPhyPortLen = 48;

void put8(std::string& out, uint8_t v) { out += char(v); }
void put16(std::string& out, uint16_t v)
{
    out += char(v >> 8);
    out += char(v & 0xff);
}
void put32(std::string& out, uint32_t v)
{
    put16(out, uint16_t(v >> 16));
    put16(out, uint16_t(v & 0xffff));
}
void put64(std::string& out, uint64_t v)
{
    put32(out, uint32_t(v >> 32));
    put32(out, uint32_t(v & 0xffffffff));
}
void put_mac(std::string& out, const Mac& m) { out.append(reinterpret_cast<const char*>(m.bytes.data()), 6); }
void put_pad(std::string& out, size_t n) { out.append(n, '\0'); }

struct Reader {
    std::string_view b;
    size_t pos = 0;

    size_t left() const { return b.size() - pos; }
    uint8_t u8() { return uint8_t(b[pos++]); }
    uint16_t u16()
    {
        uint16_t v = (uint16_t(uint8_t(b[pos])) << 8) | uint8_t(b[pos + 1]);
        pos += 2;
        return v;
    }
    uint32_t u32()
    {
        uint32_t v = (uint32_t(u16()) << 16);
        return v | u16();
    }
    uint64_t u64()
    {
        uint64_t v = (uint64_t(u32()) << 32);
        return v | u32();
    }
    Mac mac()
    {
        Mac m;
        std::memcpy(m.bytes.data(), b.data() + pos, 6);
        pos += 6;
        return m;
    }
    std::string_view bytes(size_t n)
    {
        auto v = b.substr(pos, n);
        pos += n;
        return v;
    }
    void skip(size_t n) { pos += n; }
};

void put_match(std::string& out, OfMatch m)
{
    m.canonicalize();
    put32(out, m.wildcards);
    put16(out, m.in_port);
    put_mac(out, m.dl_src);
    put_mac(out, m.dl_dst);
    put16(out, m.dl_vlan);
    put8(out, m.dl_vlan_pcp);
    put_pad(out, 1);
    put16(out, m.dl_type);
    put8(out, m.nw_tos);
    put8(out, m.nw_proto);
    put_pad(out, 2);
    put32(out, m.nw_src);
    put32(out, m.nw_dst);
    put16(out, m.tp_src);
    put16(out, m.tp_dst);
}

OfMatch read_match(Reader& r)
{
    OfMatch m;
    m.wildcards = r.u32();
    m.in_port = r.u16();
    m.dl_src = r.mac();
    m.dl_dst = r.mac();
    m.dl_vlan = r.u16();
    m.dl_vlan_pcp = r.u8();
    r.skip(1);
    m.dl_type = r.u16();
    m.nw_tos = r.u8();
    m.nw_proto = r.u8();
    r.skip(2);
    m.nw_src = r.u32();
    m.nw_dst = r.u32();
    m.tp_src = r.u16();
    m.tp_dst = r.u16();
    m.canonicalize();
    return m;
}

Status put_actions(std::string& out, const std::vector<Action>& actions)
{
    for (const auto& a : actions) {
        if (const auto* o = std::get_if<ActionOutput>(&a)) {
            put16(out, 0);  // OFPAT_OUTPUT
            put16(out, 8);
            put16(out, o->port);
            put16(out, o->max_len);
        } else if (const auto* s = std::get_if<ActionSetDlSrc>(&a)) {
            put16(out, 4);  // OFPAT_SET_DL_SRC
            put16(out, 16);
            put_mac(out, s->mac);
            put_pad(out, 6);
        } else if (const auto* d = std::get_if<ActionSetDlDst>(&a)) {
            put16(out, 5);  // OFPAT_SET_DL_DST
            put16(out, 16);
            put_mac(out, d->mac);
            put_pad(out, 6);
        } else {
            const auto& u = std::get<ActionUnknown>(a);
            size_t len = 4 + u.body.size();
            if (len % 8 != 0 || len > 0xffff) return Errc::oversize;
            put16(out, u.type);
            put16(out, uint16_t(len));
            out += u.body;
        }
    }
    return {};
}

Result<std::vector<Action>> read_actions(Reader& r, size_t len)
{
    std::vector<Action> out;
    size_t end = r.pos + len;
    if (end > r.b.size()) return Errc::malformed_body;
    while (r.pos < end) {
        if (end - r.pos < 4) return Errc::malformed_body;
        uint16_t type = r.u16();
        uint16_t alen = r.u16();
        if (alen < 8 || alen % 8 != 0 || r.pos - 4 + alen > end) return Errc::malformed_body;
        switch (type) {
            case 0: {
                if (alen != 8) return Errc::malformed_body;
                ActionOutput a;
                a.port = r.u16();
                a.max_len = r.u16();
                out.emplace_back(a);
                break;
            }
            case 4: {
                if (alen != 16) return Errc::malformed_body;
                ActionSetDlSrc a;
                a.mac = r.mac();
                r.skip(6);
                out.emplace_back(a);
                break;
            }
            case 5: {
                if (alen != 16) return Errc::malformed_body;
                ActionSetDlDst a;
                a.mac = r.mac();
                r.skip(6);
                out.emplace_back(a);
                break;
            }
            default: {
                ActionUnknown a;
                a.type = type;
                a.body = std::string(r.bytes(alen - 4));
                out.emplace_back(std::move(a));
            }
        }
    }
    return out;
}

Status put_phy_port(std::string& out, const PhyPort& p)
{
    if (p.name.size() > 15) return Errc::oversize;
    put16(out, p.port_no);
    put_mac(out, p.hw_addr);
    out += p.name;
    put_pad(out, 16 - p.name.size());
    put32(out, p.config);
    put32(out, p.state);
    put32(out, p.curr);
    put32(out, p.advertised);
    put32(out, p.supported);
    put32(out, p.peer);
    return {};
}

PhyPort read_phy_port(Reader& r)
{
    PhyPort p;
    p.port_no = r.u16();
    p.hw_addr = r.mac();
    auto name = r.bytes(16);
    p.name = std::string(name.substr(0, name.find('\0')));
    p.config = r.u32();
    p.state = r.u32();
    p.curr = r.u32();
    p.advertised = r.u32();
    p.supported = r.u32();
    p.peer = r.u32();
    return p;
}

}  // namespace

void append_match(std::string& out, const OfMatch& m) { put_match(out, m); }

Result<OfMatch> parse_match40(std::string_view bytes40)
{
    if (bytes40.size() < kMatchWireLen) return Errc::truncated;
    Reader r{bytes40.substr(0, kMatchWireLen)};
    return read_match(r);
}

void OfMatch::set_nw_src(uint32_t addr, uint8_t prefix)
{
    nw_src = addr;
    wildcards = (wildcards & ~fw::nw_src_mask) | (uint32_t(32 - prefix) << fw::nw_src_shift);
}

void OfMatch::set_nw_dst(uint32_t addr, uint8_t prefix)
{
    nw_dst = addr;
    wildcards = (wildcards & ~fw::nw_dst_mask) | (uint32_t(32 - prefix) << fw::nw_dst_shift);
}

void OfMatch::canonicalize()
{
    wildcards &= fw::all;
    if (nw_src_bits() > 32) wildcards = (wildcards & ~fw::nw_src_mask) | (32u << fw::nw_src_shift);
    if (nw_dst_bits() > 32) wildcards = (wildcards & ~fw::nw_dst_mask) | (32u << fw::nw_dst_shift);
    if (wildcards & fw::in_port) in_port = 0;
    if (wildcards & fw::dl_src) dl_src = Mac{};
    if (wildcards & fw::dl_dst) dl_dst = Mac{};
    if (wildcards & fw::dl_vlan) dl_vlan = 0;
    if (wildcards & fw::dl_vlan_pcp) dl_vlan_pcp = 0;
    if (wildcards & fw::dl_type) dl_type = 0;
    if (wildcards & fw::nw_tos) nw_tos = 0;
    if (wildcards & fw::nw_proto) nw_proto = 0;
    if (wildcards & fw::tp_src) tp_src = 0;
    if (wildcards & fw::tp_dst) tp_dst = 0;
    // zero the masked-out low bits of prefix matches
    uint8_t sb = nw_src_bits();
    nw_src = sb >= 32 ? 0 : nw_src & (sb == 0 ? ~uint32_t(0) : ~uint32_t(0) << sb);
    uint8_t db = nw_dst_bits();
    nw_dst = db >= 32 ? 0 : nw_dst & (db == 0 ? ~uint32_t(0) : ~uint32_t(0) << db);
}

OfMatch match_all()
{
    OfMatch m;
    m.canonicalize();
    return m;
}

uint32_t xid_of(const OfMessage& msg)
{
    return std::visit([](const auto& m) { return m.xid; }, msg);
}

uint8_t wire_type(const OfMessage& msg)
{
    struct V {
        uint8_t operator()(const Hello&) { return kTypeHello; }
        uint8_t operator()(const EchoRequest&) { return kTypeEchoRequest; }
        uint8_t operator()(const EchoReply&) { return kTypeEchoReply; }
        uint8_t operator()(const FeaturesRequest&) { return kTypeFeaturesRequest; }
        uint8_t operator()(const FeaturesReply&) { return kTypeFeaturesReply; }
        uint8_t operator()(const PacketIn&) { return kTypePacketIn; }
        uint8_t operator()(const PacketOut&) { return kTypePacketOut; }
        uint8_t operator()(const FlowMod&) { return kTypeFlowMod; }
        uint8_t operator()(const PortMod&) { return kTypePortMod; }
        uint8_t operator()(const PortStatus&) { return kTypePortStatus; }
        uint8_t operator()(const Unknown& u) { return u.msg_type; }
    };
    return std::visit(V{}, msg);
}

std::string_view message_name(const OfMessage& msg)
{
    switch (msg.index()) {
        case 0: return "hello";
        case 1: return "echo_request";
        case 2: return "echo_reply";
        case 3: return "features_request";
        case 4: return "features_reply";
        case 5: return "packet_in";
        case 6: return "packet_out";
        case 7: return "flow_mod";
        case 8: return "port_mod";
        case 9: return "port_status";
        default: return "unknown";
    }
}

Result<std::string> serialize(const OfMessage& msg)
{
    std::string body;
    Status st;
    if (const auto* e = std::get_if<EchoRequest>(&msg)) {
        body = e->data;
    } else if (const auto* e2 = std::get_if<EchoReply>(&msg)) {
        body = e2->data;
    } else if (const auto* f = std::get_if<FeaturesReply>(&msg)) {
        put64(body, f->datapath_id);
        put32(body, f->n_buffers);
        put8(body, f->n_tables);
        put_pad(body, 3);
        put32(body, f->capabilities);
        put32(body, f->actions);
        for (const auto& p : f->ports) {
            st = put_phy_port(body, p);
            if (!st) return st.error();
        }
    } else if (const auto* pi = std::get_if<PacketIn>(&msg)) {
        put32(body, pi->buffer_id);
        put16(body, pi->total_len);
        put16(body, pi->in_port);
        put8(body, pi->reason);
        put_pad(body, 1);
        body += pi->data;
    } else if (const auto* po = std::get_if<PacketOut>(&msg)) {
        std::string acts;
        st = put_actions(acts, po->actions);
        if (!st) return st.error();
        if (acts.size() > 0xffff) return Errc::oversize;
        put32(body, po->buffer_id);
        put16(body, po->in_port);
        put16(body, uint16_t(acts.size()));
        body += acts;
        body += po->data;
    } else if (const auto* fm = std::get_if<FlowMod>(&msg)) {
        put_match(body, fm->match);
        put64(body, fm->cookie);
        put16(body, uint16_t(fm->command));
        put16(body, fm->idle_timeout);
        put16(body, fm->hard_timeout);
        put16(body, fm->priority);
        put32(body, fm->buffer_id);
        put16(body, fm->out_port);
        put16(body, fm->flags);
        st = put_actions(body, fm->actions);
        if (!st) return st.error();
    } else if (const auto* pm = std::get_if<PortMod>(&msg)) {
        put16(body, pm->port_no);
        put_mac(body, pm->hw_addr);
        put32(body, pm->config);
        put32(body, pm->mask);
        put32(body, pm->advertise);
        put_pad(body, 4);
    } else if (const auto* ps = std::get_if<PortStatus>(&msg)) {
        put8(body, ps->reason);
        put_pad(body, 7);
        st = put_phy_port(body, ps->port);
        if (!st) return st.error();
    } else if (const auto* u = std::get_if<Unknown>(&msg)) {
        body = u->body;
    }
    // Hello and FeaturesRequest are header-only

    if (kHeaderLen + body.size() > 0xffff) return Errc::oversize;
    std::string out;
    out.reserve(kHeaderLen + body.size());
    put8(out, kVersion);
    put8(out, wire_type(msg));
    put16(out, uint16_t(kHeaderLen + body.size()));
    put32(out, xid_of(msg));
    out += body;
    return out;
}

Result<Parsed> parse(std::string_view bytes)
{
    if (bytes.size() < kHeaderLen) return Errc::truncated;
    Reader r{bytes};
    uint8_t version = r.u8();
    uint8_t type = r.u8();
    uint16_t length = r.u16();
    uint32_t xid = r.u32();
    if (version != kVersion) return Errc::bad_version;
    if (length < kHeaderLen) return Errc::malformed_body;
    if (bytes.size() < length) return Errc::truncated;

    Reader body{bytes.substr(kHeaderLen, length - kHeaderLen)};
    Parsed out;
    out.consumed = length;

    switch (type) {
        case kTypeHello:
            out.msg = Hello{xid};
            break;
        case kTypeEchoRequest:
            out.msg = EchoRequest{xid, std::string(body.bytes(body.left()))};
            break;
        case kTypeEchoReply:
            out.msg = EchoReply{xid, std::string(body.bytes(body.left()))};
            break;
        case kTypeFeaturesRequest:
            out.msg = FeaturesRequest{xid};
            break;
        case kTypeFeaturesReply: {
            if (body.left() < 24 || (body.left() - 24) % kPhyPortLen != 0)
                return Errc::malformed_body;
            FeaturesReply f;
            f.xid = xid;
            f.datapath_id = body.u64();
            f.n_buffers = body.u32();
            f.n_tables = body.u8();
            body.skip(3);
            f.capabilities = body.u32();
            f.actions = body.u32();
            while (body.left() >= kPhyPortLen) f.ports.push_back(read_phy_port(body));
            out.msg = std::move(f);
            break;
        }
        case kTypePacketIn: {
            if (body.left() < 10) return Errc::malformed_body;
            PacketIn p;
            p.xid = xid;
            p.buffer_id = body.u32();
            p.total_len = body.u16();
            p.in_port = body.u16();
            p.reason = body.u8();
            body.skip(1);
            p.data = std::string(body.bytes(body.left()));
            out.msg = std::move(p);
            break;
        }
        case kTypePacketOut: {
            if (body.left() < 8) return Errc::malformed_body;
            PacketOut p;
            p.xid = xid;
            p.buffer_id = body.u32();
            p.in_port = body.u16();
            uint16_t actions_len = body.u16();
            if (actions_len > body.left()) return Errc::malformed_body;
            auto acts = read_actions(body, actions_len);
            if (!acts) return acts.error();
            p.actions = std::move(acts.value());
            p.data = std::string(body.bytes(body.left()));
            out.msg = std::move(p);
            break;
        }
        case kTypeFlowMod: {
            if (body.left() < kMatchLen + 24) return Errc::malformed_body;
            FlowMod f;
            f.xid = xid;
            f.match = read_match(body);
            f.cookie = body.u64();
            f.command = FlowModCommand(body.u16());
            f.idle_timeout = body.u16();
            f.hard_timeout = body.u16();
            f.priority = body.u16();
            f.buffer_id = body.u32();
            f.out_port = body.u16();
            f.flags = body.u16();
            auto acts = read_actions(body, body.left());
            if (!acts) return acts.error();
            f.actions = std::move(acts.value());
            out.msg = std::move(f);
            break;
        }
        case kTypePortMod: {
            if (body.left() != 24) return Errc::malformed_body;
            PortMod p;
            p.xid = xid;
            p.port_no = body.u16();
            p.hw_addr = body.mac();
            p.config = body.u32();
            p.mask = body.u32();
            p.advertise = body.u32();
            out.msg = std::move(p);
            break;
        }
        case kTypePortStatus: {
            if (body.left() != 8 + kPhyPortLen) return Errc::malformed_body;
            PortStatus p;
            p.xid = xid;
            p.reason = body.u8();
            body.skip(7);
            p.port = read_phy_port(body);
            out.msg = std::move(p);
            break;
        }
        default:
            out.msg = Unknown{xid, type, std::string(body.bytes(body.left()))};
    }
    return out;
}

Result<std::optional<OfMessage>> Decoder::next()
{
    if (buf_.empty()) return std::optional<OfMessage>{};
    auto res = parse(buf_);
    if (!res) {
        if (res.error() == Errc::truncated) return std::optional<OfMessage>{};
        // drop the framed length (when known) so the stream can continue
        if (buf_.size() >= 4) {
            size_t len = (uint8_t(buf_[2]) << 8) | uint8_t(buf_[3]);
            buf_.erase(0, std::max<size_t>(len, kHeaderLen) <= buf_.size()
                              ? std::max<size_t>(len, kHeaderLen)
                              : buf_.size());
        } else {
            buf_.clear();
        }
        return res.error();
    }
    buf_.erase(0, res->consumed);
    return std::optional<OfMessage>(std::move(res->msg));
}

}  // namespace yanc::ofp
