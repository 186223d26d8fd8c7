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

#include "yanc/ofp/translate.hpp"

namespace yanc::ofp {

OfMatch match_from_schema(const schema::FlowMatch& f)
{
    OfMatch m;
    uint32_t w = fw::all;
    if (f.in_port) {
        w &= ~fw::in_port;
        m.in_port = *f.in_port;
    }
    if (f.dl_src) {
        w &= ~fw::dl_src;
        m.dl_src = *f.dl_src;
    }
    if (f.dl_dst) {
        w &= ~fw::dl_dst;
        m.dl_dst = *f.dl_dst;
    }
    if (f.dl_vlan) {
        w &= ~fw::dl_vlan;
        m.dl_vlan = *f.dl_vlan;
    }
    if (f.dl_vlan_pcp) {
        w &= ~fw::dl_vlan_pcp;
        m.dl_vlan_pcp = *f.dl_vlan_pcp;
    }
    if (f.dl_type) {
        w &= ~fw::dl_type;
        m.dl_type = *f.dl_type;
    }
    if (f.nw_tos) {
        w &= ~fw::nw_tos;
        m.nw_tos = *f.nw_tos;
    }
    if (f.nw_proto) {
        w &= ~fw::nw_proto;
        m.nw_proto = *f.nw_proto;
    }
    m.wildcards = w;
    if (f.nw_src) m.set_nw_src(f.nw_src->addr, f.nw_src->prefix);
    if (f.nw_dst) m.set_nw_dst(f.nw_dst->addr, f.nw_dst->prefix);
    if (f.tp_src) {
        m.wildcards &= ~fw::tp_src;
        m.tp_src = *f.tp_src;
    }
    if (f.tp_dst) {
        m.wildcards &= ~fw::tp_dst;
        m.tp_dst = *f.tp_dst;
    }
    m.canonicalize();
    return m;
}

schema::FlowMatch match_to_schema(const OfMatch& in)
{
    OfMatch m = in;
    m.canonicalize();
    schema::FlowMatch f;
    const uint32_t w = m.wildcards;
    if (!(w & fw::in_port)) f.in_port = m.in_port;
    if (!(w & fw::dl_src)) f.dl_src = m.dl_src;
    if (!(w & fw::dl_dst)) f.dl_dst = m.dl_dst;
    if (!(w & fw::dl_vlan)) f.dl_vlan = m.dl_vlan;
    if (!(w & fw::dl_vlan_pcp)) f.dl_vlan_pcp = m.dl_vlan_pcp;
    if (!(w & fw::dl_type)) f.dl_type = m.dl_type;
    if (!(w & fw::nw_tos)) f.nw_tos = m.nw_tos;
    if (!(w & fw::nw_proto)) f.nw_proto = m.nw_proto;
    if (m.nw_src_bits() < 32) f.nw_src = Cidr{m.nw_src, uint8_t(32 - m.nw_src_bits())};
    if (m.nw_dst_bits() < 32) f.nw_dst = Cidr{m.nw_dst, uint8_t(32 - m.nw_dst_bits())};
    if (!(w & fw::tp_src)) f.tp_src = m.tp_src;
    if (!(w & fw::tp_dst)) f.tp_dst = m.tp_dst;
    return f;
}

std::vector<Action> actions_from_schema(const std::vector<schema::FlowAction>& in)
{
    std::vector<Action> out;
    out.reserve(in.size());
    for (const auto& a : in) {
        switch (a.kind) {
            case schema::FlowAction::Kind::output:
                out.emplace_back(ActionOutput{a.port, 0});
                break;
            case schema::FlowAction::Kind::set_dl_src:
                out.emplace_back(ActionSetDlSrc{a.mac});
                break;
            case schema::FlowAction::Kind::set_dl_dst:
                out.emplace_back(ActionSetDlDst{a.mac});
                break;
        }
    }
    return out;
}

}  // namespace yanc::ofp
