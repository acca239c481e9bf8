// Copyright 2026 The Parrot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARROT_TEMPLATES_HPP
#define PARROT_TEMPLATES_HPP

// Static pipeline templates. A template is a complete P4-16 program that
// pulls generated code in through five include hooks:
//
//   headers.p4inc  top level, after the standard header types
//   structs.p4inc  inside the headers and metadata structs (included twice,
//                  guarded by PARROT_HEADER_MEMBERS / PARROT_METADATA_MEMBERS)
//   parser.p4inc   inside the parser, before the standard states
//   decls.p4inc    ingress control declarations
//   apply.p4inc    ingress apply block, only for valid IPv4 packets
//
// Contract offered to generated code: `hdr`, `meta`, `standard_metadata`,
// `packet`; the parrot_* metadata counters and flags below; the
// ATOMIC_BEGIN/ATOMIC_END macros; the chain entry states
// parrot_chain_ipv4_udp / parrot_chain_ipv4_tcp which the template only
// enters when PARROT_CHAIN_IPV4_UDP / PARROT_CHAIN_IPV4_TCP is defined.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "parrot/error.hpp"

namespace parrot {

enum class TemplateId { V1ModelBasic };

inline std::string_view to_string(TemplateId) { return "v1model_basic"; }

inline std::optional<TemplateId> parse_template(std::string_view s) {
  if (s == "v1model_basic") return TemplateId::V1ModelBasic;
  return std::nullopt;
}

inline constexpr std::array<std::string_view, 5> kFragmentNames = {
    "headers.p4inc", "parser.p4inc", "structs.p4inc", "decls.p4inc",
    "apply.p4inc"};

// Egress port used by the template's static forwarding.
inline constexpr std::uint16_t kDefaultEgressPort = 1;

namespace detail {

inline constexpr std::string_view kV1ModelBasic = R"p4(/*
 * v1model_basic: static forwarding pipeline for offloaded payload
 * processing. Generated fragments are pulled in through #include hooks.
 */
#include <core.p4>
#include <v1model.p4>

#define ATOMIC_BEGIN @atomic {
#define ATOMIC_END }

const bit<16> PARROT_ETHERTYPE_IPV4 = 0x0800;
const bit<8> PARROT_PROTO_TCP = 6;
const bit<8> PARROT_PROTO_UDP = 17;
const bit<9> PARROT_DEFAULT_PORT = 1;

header ethernet_t {
    bit<48> dstAddr;
    bit<48> srcAddr;
    bit<16> etherType;
}

header ipv4_t {
    bit<4> version;
    bit<4> ihl;
    bit<8> diffserv;
    bit<16> totalLen;
    bit<16> identification;
    bit<3> flags;
    bit<13> fragOffset;
    bit<8> ttl;
    bit<8> protocol;
    bit<16> hdrChecksum;
    bit<32> srcAddr;
    bit<32> dstAddr;
}

header udp_t {
    bit<16> srcPort;
    bit<16> dstPort;
    bit<16> len;
    bit<16> checksum;
}

header tcp_t {
    bit<16> srcPort;
    bit<16> dstPort;
    bit<32> seqNo;
    bit<32> ackNo;
    bit<4> dataOffset;
    bit<4> res;
    bit<8> flags;
    bit<16> window;
    bit<16> checksum;
    bit<16> urgentPtr;
}

#include "headers.p4inc"

struct headers_t {
    ethernet_t eth;
    ipv4_t ipv4;
    udp_t udp;
    tcp_t tcp;
#define PARROT_HEADER_MEMBERS
#include "structs.p4inc"
#undef PARROT_HEADER_MEMBERS
}

struct metadata_t {
    bit<16> parrot_added_bytes;
    bit<16> parrot_removed_bytes;
    bit<16> parrot_consumed_bytes;
    bit<1> parrot_processed;
    bit<1> parrot_payload_modified;
    bit<1> parrot_truncate;
#define PARROT_METADATA_MEMBERS
#include "structs.p4inc"
#undef PARROT_METADATA_MEMBERS
}

parser ParrotParser(packet_in packet,
                    out headers_t hdr,
                    inout metadata_t meta,
                    inout standard_metadata_t standard_metadata) {
#include "parser.p4inc"

    state start {
        packet.extract(hdr.eth);
        transition select(hdr.eth.etherType) {
            PARROT_ETHERTYPE_IPV4: parse_ipv4;
            default: accept;
        }
    }

    state parse_ipv4 {
        packet.extract(hdr.ipv4);
        transition select(hdr.ipv4.protocol) {
            PARROT_PROTO_UDP: parse_udp;
            PARROT_PROTO_TCP: parse_tcp;
            default: accept;
        }
    }

    state parse_udp {
        packet.extract(hdr.udp);
#ifdef PARROT_CHAIN_IPV4_UDP
        transition parrot_chain_ipv4_udp;
#else
        transition accept;
#endif
    }

    state parse_tcp {
        packet.extract(hdr.tcp);
#ifdef PARROT_CHAIN_IPV4_TCP
        transition parrot_chain_ipv4_tcp;
#else
        transition accept;
#endif
    }
}

control ParrotVerifyChecksum(inout headers_t hdr, inout metadata_t meta) {
    apply { }
}

control ParrotIngress(inout headers_t hdr,
                      inout metadata_t meta,
                      inout standard_metadata_t standard_metadata) {
#include "decls.p4inc"

    apply {
        standard_metadata.egress_spec = PARROT_DEFAULT_PORT;
        if (hdr.ipv4.isValid()) {
#include "apply.p4inc"
        }
        if (meta.parrot_truncate == 1w1) {
            if (hdr.udp.isValid()) {
                meta.parrot_removed_bytes = meta.parrot_removed_bytes + (hdr.udp.len - 16w8 - meta.parrot_consumed_bytes);
            } else {
                meta.parrot_removed_bytes = meta.parrot_removed_bytes + (hdr.ipv4.totalLen - 16w40 - meta.parrot_consumed_bytes);
            }
        }
        if (meta.parrot_processed == 1w1) {
            hdr.ipv4.totalLen = hdr.ipv4.totalLen + meta.parrot_added_bytes - meta.parrot_removed_bytes;
            if (hdr.udp.isValid()) {
                hdr.udp.len = hdr.udp.len + meta.parrot_added_bytes - meta.parrot_removed_bytes;
                if (meta.parrot_payload_modified == 1w1) {
                    // Payload changed; a zero UDP checksum means "not computed".
                    hdr.udp.checksum = 16w0;
                }
            }
        }
        if (meta.parrot_truncate == 1w1) {
            truncate((bit<32>)hdr.ipv4.totalLen + 32w14);
        }
    }
}

control ParrotEgress(inout headers_t hdr,
                     inout metadata_t meta,
                     inout standard_metadata_t standard_metadata) {
    apply { }
}

control ParrotComputeChecksum(inout headers_t hdr, inout metadata_t meta) {
    apply {
        update_checksum(
            hdr.ipv4.isValid() && meta.parrot_processed == 1w1,
            { hdr.ipv4.version,
              hdr.ipv4.ihl,
              hdr.ipv4.diffserv,
              hdr.ipv4.totalLen,
              hdr.ipv4.identification,
              hdr.ipv4.flags,
              hdr.ipv4.fragOffset,
              hdr.ipv4.ttl,
              hdr.ipv4.protocol,
              hdr.ipv4.srcAddr,
              hdr.ipv4.dstAddr },
            hdr.ipv4.hdrChecksum,
            HashAlgorithm.csum16);
    }
}

control ParrotDeparser(packet_out packet, in headers_t hdr) {
    apply {
        packet.emit(hdr);
    }
}

V1Switch(ParrotParser(),
         ParrotVerifyChecksum(),
         ParrotIngress(),
         ParrotEgress(),
         ParrotComputeChecksum(),
         ParrotDeparser()) main;
)p4";

// Identifiers the template (or core.p4/v1model.p4) defines for generated
// code to use, member names included.
inline constexpr std::array<std::string_view, 54> kV1ModelContract = {
    "hdr", "meta", "standard_metadata", "packet",
    "eth", "ipv4", "udp", "tcp",
    "dstAddr", "srcAddr", "etherType", "version", "ihl", "diffserv",
    "totalLen", "identification", "flags", "fragOffset", "ttl", "protocol",
    "hdrChecksum", "srcPort", "dstPort", "len", "checksum", "seqNo", "ackNo",
    "dataOffset", "res", "window", "urgentPtr",
    "parrot_added_bytes", "parrot_removed_bytes", "parrot_consumed_bytes",
    "parrot_processed", "parrot_payload_modified", "parrot_truncate",
    "egress_spec", "ingress_port",
    "ATOMIC_BEGIN", "ATOMIC_END", "PARROT_HEADER_MEMBERS",
    "PARROT_METADATA_MEMBERS", "accept",
    "register", "random", "read", "write", "extract", "lookahead",
    "setValid", "setInvalid", "isValid", "apply",
};

}  // namespace detail

inline std::string_view template_text(TemplateId) { return detail::kV1ModelBasic; }

inline std::span<const std::string_view> template_contract(TemplateId) {
  return detail::kV1ModelContract;
}

inline std::string template_file_name(TemplateId id) {
  return std::string(to_string(id)) + ".p4";
}

}  // namespace parrot

#endif  // PARROT_TEMPLATES_HPP
