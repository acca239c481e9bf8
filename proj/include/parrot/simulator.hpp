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

#ifndef PARROT_SIMULATOR_HPP
#define PARROT_SIMULATOR_HPP

// Executes a Solution on synthetic packets without generating any P4.
//
// The simulator mirrors what the shipped template does with generated
// code: classification walks the selectors in registration order, the
// matched processor runs with wrapping fixed-width arithmetic, the output
// layout replaces the input bytes at the start of the payload, lengths are
// adjusted by the byte delta, the UDP checksum is zeroed when the payload
// changes and the IPv4 header checksum is recomputed.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "parrot/core.hpp"
#include "parrot/error.hpp"
#include "parrot/flow.hpp"
#include "parrot/selector.hpp"
#include "parrot/solution.hpp"
#include "parrot/templates.hpp"

namespace parrot {

struct PacketField {
  std::string_view name;
  unsigned bits;

  UWidth value_width() const {
    return StandardField{name, bits}.value_width();
  }
};

// Every standard-header field of a packet, in wire order.
inline std::span<const PacketField> packet_fields(ProtocolStack stack) {
  static constexpr std::array<PacketField, 17> udp = {{
      {"eth.dstAddr", 48}, {"eth.srcAddr", 48}, {"eth.etherType", 16},
      {"ipv4.versionIhl", 8}, {"ipv4.diffserv", 8}, {"ipv4.totalLen", 16},
      {"ipv4.identification", 16}, {"ipv4.flagsFragOffset", 16},
      {"ipv4.ttl", 8}, {"ipv4.protocol", 8}, {"ipv4.hdrChecksum", 16},
      {"ipv4.srcAddr", 32}, {"ipv4.dstAddr", 32},
      {"udp.srcPort", 16}, {"udp.dstPort", 16}, {"udp.len", 16},
      {"udp.checksum", 16},
  }};
  static constexpr std::array<PacketField, 22> tcp = {{
      {"eth.dstAddr", 48}, {"eth.srcAddr", 48}, {"eth.etherType", 16},
      {"ipv4.versionIhl", 8}, {"ipv4.diffserv", 8}, {"ipv4.totalLen", 16},
      {"ipv4.identification", 16}, {"ipv4.flagsFragOffset", 16},
      {"ipv4.ttl", 8}, {"ipv4.protocol", 8}, {"ipv4.hdrChecksum", 16},
      {"ipv4.srcAddr", 32}, {"ipv4.dstAddr", 32},
      {"tcp.srcPort", 16}, {"tcp.dstPort", 16}, {"tcp.seqNo", 32},
      {"tcp.ackNo", 32}, {"tcp.dataOffsetRes", 8}, {"tcp.flags", 8},
      {"tcp.window", 16}, {"tcp.checksum", 16}, {"tcp.urgentPtr", 16},
  }};
  if (stack == ProtocolStack::Ipv4Udp) return udp;
  return tcp;
}

inline const PacketField* find_packet_field(ProtocolStack stack,
                                            std::string_view name) {
  for (const auto& f : packet_fields(stack)) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

inline constexpr std::size_t kEthernetBytes = 14;
inline constexpr std::size_t kIpv4Bytes = 20;

inline std::size_t l4_bytes(ProtocolStack stack) {
  return stack == ProtocolStack::Ipv4Udp ? 8 : 20;
}

struct SimPacket {
  ProtocolStack stack = ProtocolStack::Ipv4Udp;
  std::uint16_t ingress_port = 0;
  FieldValues fields;
  Bytes payload;

  // Builds a well-formed packet: lengths match the payload and the IPv4
  // checksum is valid unless `overrides` says otherwise.
  static SimPacket make(ProtocolStack stack, Bytes payload,
                        const FieldValues& overrides = {},
                        std::uint16_t ingress_port = 0);

  const UValue& field(std::string_view name) const {
    auto it = fields.find(name);
    if (it == fields.end()) {
      throw Error(ErrorKind::UndeclaredName,
                  "packet has no field '" + std::string(name) + "'");
    }
    return it->second;
  }

  void set(std::string_view name, const UValue& v) {
    const auto* f = find_packet_field(stack, name);
    if (f == nullptr) {
      throw Error(ErrorKind::UndeclaredName,
                  "'" + std::string(name) + "' is not a field of " +
                      std::string(to_string(stack)) + " packets");
    }
    if (v.width() != f->value_width() ||
        (f->bits < 64 && (v.magnitude() >> f->bits) != 0)) {
      throw Error(ErrorKind::WidthMismatch,
                  std::string(name) + " is " + std::to_string(f->bits) +
                      " bits, got " + to_string(v));
    }
    fields.insert_or_assign(std::string(name), v);
  }

  friend bool operator==(const SimPacket&, const SimPacket&) = default;
};

namespace detail {

inline void append_bits(Bytes& out, std::uint64_t v, unsigned bits) {
  for (unsigned i = bits / 8; i-- > 0;) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

inline Bytes header_bytes(const SimPacket& p, std::string_view prefix) {
  Bytes out;
  for (const auto& f : packet_fields(p.stack)) {
    if (f.name.starts_with(prefix)) append_bits(out, p.field(f.name).magnitude(), f.bits);
  }
  return out;
}

}  // namespace detail

inline Bytes ipv4_header_bytes(const SimPacket& p) {
  return detail::header_bytes(p, "ipv4.");
}

// Ethernet + IPv4 + L4 header + payload as they appear on the wire.
inline Bytes to_wire(const SimPacket& p) {
  Bytes out;
  for (const auto& f : packet_fields(p.stack)) {
    detail::append_bits(out, p.field(f.name).magnitude(), f.bits);
  }
  out.insert(out.end(), p.payload.begin(), p.payload.end());
  return out;
}

inline void refresh_ipv4_checksum(SimPacket& p) {
  p.set("ipv4.hdrChecksum", UValue(u16, 0));
  p.set("ipv4.hdrChecksum", UValue(u16, internet_checksum(ipv4_header_bytes(p))));
}

inline SimPacket SimPacket::make(ProtocolStack stack, Bytes payload,
                                 const FieldValues& overrides,
                                 std::uint16_t ingress_port) {
  SimPacket p;
  p.stack = stack;
  p.ingress_port = ingress_port;
  p.payload = std::move(payload);
  for (const auto& f : packet_fields(stack)) {
    p.fields.insert_or_assign(std::string(f.name), UValue(f.value_width(), 0));
  }
  auto l4 = l4_bytes(stack);
  p.set("eth.etherType", UValue(u16, 0x0800));
  p.set("ipv4.versionIhl", UValue(u8, 0x45));
  p.set("ipv4.ttl", UValue(u8, 64));
  p.set("ipv4.protocol", UValue(u8, stack == ProtocolStack::Ipv4Udp ? 17 : 6));
  p.set("ipv4.totalLen",
        UValue::wrapping(u16, kIpv4Bytes + l4 + p.payload.size()));
  if (stack == ProtocolStack::Ipv4Udp) {
    p.set("udp.len", UValue::wrapping(u16, l4 + p.payload.size()));
  } else {
    p.set("tcp.dataOffsetRes", UValue(u8, 0x50));
  }
  for (const auto& [name, value] : overrides) p.set(name, value);
  if (!overrides.contains("ipv4.hdrChecksum")) refresh_ipv4_checksum(p);
  return p;
}

struct RingState {
  std::vector<UValue> slots;
  std::size_t head = 0;

  friend bool operator==(const RingState&, const RingState&) = default;
};

struct ProcessorRuntime {
  FieldValues shared;
  std::map<std::string, RingState, std::less<>> rings;

  friend bool operator==(const ProcessorRuntime&, const ProcessorRuntime&) = default;
};

// Register contents that persist across packets, keyed by processor name,
// plus the random generator. The generator is std::mt19937_64, whose
// output sequence for a given seed is fixed by the C++ standard.
class SimState {
 public:
  static SimState initial(const Solution& solution, std::uint64_t seed) {
    SimState s;
    s.rng_.seed(seed);
    for (const FlowProcessor* p : solution.processors()) {
      ProcessorRuntime rt;
      for (const auto& v : p->shared_decls()) rt.shared.emplace(v.name(), v.initial());
      for (const auto& r : p->ring_decls()) {
        rt.rings.emplace(r.name(),
                         RingState{std::vector<UValue>(r.capacity(),
                                                       UValue(r.element_width(), 0)),
                                   0});
      }
      s.processors_.emplace(p->name(), std::move(rt));
    }
    return s;
  }

  const UValue& shared(std::string_view processor, std::string_view name) const {
    const auto& rt = runtime(processor);
    auto it = rt.shared.find(name);
    if (it == rt.shared.end()) {
      throw Error(ErrorKind::UndeclaredName,
                  "no shared variable '" + std::string(name) + "'");
    }
    return it->second;
  }

  void set_shared(std::string_view processor, std::string_view name, UValue v) {
    auto& rt = runtime(processor);
    auto it = rt.shared.find(name);
    if (it == rt.shared.end()) {
      throw Error(ErrorKind::UndeclaredName,
                  "no shared variable '" + std::string(name) + "'");
    }
    if (it->second.width() != v.width()) {
      throw Error(ErrorKind::WidthMismatch, "shared variable '" +
                                                std::string(name) + "' is " +
                                                to_string(it->second.width()));
    }
    it->second = v;
  }

  const RingState& ring(std::string_view processor, std::string_view name) const {
    const auto& rt = runtime(processor);
    auto it = rt.rings.find(name);
    if (it == rt.rings.end()) {
      throw Error(ErrorKind::UndeclaredName, "no ring buffer '" + std::string(name) + "'");
    }
    return it->second;
  }

  const ProcessorRuntime& runtime(std::string_view processor) const {
    auto it = processors_.find(processor);
    if (it == processors_.end()) {
      throw Error(ErrorKind::UndeclaredName,
                  "no processor '" + std::string(processor) + "' in state");
    }
    return it->second;
  }
  ProcessorRuntime& runtime(std::string_view processor) {
    return const_cast<ProcessorRuntime&>(std::as_const(*this).runtime(processor));
  }

  std::mt19937_64& rng() noexcept { return rng_; }

  friend bool operator==(const SimState&, const SimState&) = default;

 private:
  std::map<std::string, ProcessorRuntime, std::less<>> processors_;
  std::mt19937_64 rng_;
};

enum class Verdict { Processed, Passthrough, Error };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Processed: return "PROCESSED";
    case Verdict::Passthrough: return "PASSTHROUGH";
    case Verdict::Error: return "ERROR";
  }
  return "?";
}

// One executed builder call. `target` names what was written, if anything.
struct TraceEvent {
  std::size_t ordinal;
  std::string kind;
  std::string target;
  std::optional<UValue> before;
  std::optional<UValue> after;
  std::vector<UValue> operands;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimResult {
  Verdict verdict = Verdict::Passthrough;
  std::string selector;  // set when processed
  std::uint16_t egress_port = kDefaultEgressPort;
  SimPacket packet;
  std::vector<TraceEvent> trace;
  std::string error;  // set when verdict is Error

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

struct SimStep {
  SimResult result;
  SimState state;
};

namespace detail {

inline bool eth_ipv4_matches(const SimPacket& p) {
  auto proto = p.stack == ProtocolStack::Ipv4Udp ? 17u : 6u;
  return p.field("eth.etherType").magnitude() == 0x0800 &&
         p.field("ipv4.protocol").magnitude() == proto;
}

class Interpreter {
 public:
  Interpreter(const FlowProcessor& p, ProcessorRuntime& rt, std::mt19937_64& rng,
              FieldValues input, std::uint16_t ingress_port,
              std::vector<TraceEvent>& trace)
      : p_(p), rt_(rt), rng_(rng), input_(std::move(input)),
        ingress_(ingress_port), trace_(trace) {
    if (p.output_layout()) {
      for (const auto& f : p.output_layout()->fields()) {
        output_.emplace(f.name(), UValue(f.width(), 0));
      }
    }
    for (const auto& l : p.local_decls()) locals_.emplace(l.name(), UValue(l.width(), 0));
  }

  void run() { block(p_.body()); }

  const FieldValues& output() const noexcept { return output_; }
  std::uint16_t egress() const noexcept { return egress_; }

 private:
  FieldValues& scope(Scope s) {
    switch (s) {
      case Scope::Input: return input_;
      case Scope::Output: return output_;
      case Scope::Local: return locals_;
      case Scope::Shared: return rt_.shared;
    }
    return locals_;
  }

  UValue read(const VarRef& r) { return scope(r.scope).at(r.name); }
  void write(const VarRef& r, const UValue& v) { scope(r.scope).at(r.name) = v; }

  UValue eval(const Operand& op) {
    if (auto* r = std::get_if<VarRef>(&op)) return read(*r);
    return std::get<UValue>(op);
  }

  static UValue flag(bool b) { return UValue(u8, b ? 1 : 0); }

  void record(std::size_t ordinal, std::string kind, std::string target = {},
              std::optional<UValue> before = {}, std::optional<UValue> after = {},
              std::vector<UValue> operands = {}) {
    trace_.push_back(TraceEvent{ordinal, std::move(kind), std::move(target),
                                before, after, std::move(operands)});
  }

  void assign(std::size_t ordinal, std::string_view kind, const VarRef& target,
              const UValue& value, std::vector<UValue> operands) {
    auto before = read(target);
    write(target, value);
    record(ordinal, std::string(kind), to_string(target), before, value,
           std::move(operands));
  }

  void block(const Block& b) {
    for (const auto& st : b.statements()) statement(st);
  }

  void statement(const Statement& st) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Command>) {
            std::visit([&](const auto& c) { exec(c, st.ordinal); }, node);
          } else if constexpr (std::is_same_v<T, std::unique_ptr<IfNode>>) {
            auto cond = read(node->cond);
            record(st.ordinal, "if", to_string(node->cond), cond, std::nullopt, {cond});
            if (cond.magnitude() != 0) {
              block(*node->then_block);
            } else if (node->else_block) {
              record(node->else_ordinal, "else");
              block(*node->else_block);
            }
          } else if constexpr (std::is_same_v<T, std::unique_ptr<SwitchNode>>) {
            auto sel = eval(node->selector);
            record(st.ordinal, "switch", {}, std::nullopt, std::nullopt, {sel});
            for (const auto& arm : node->cases) {
              if (arm.value == sel) {
                record(arm.ordinal, "case", {}, std::nullopt, std::nullopt, {arm.value});
                block(*arm.body);
                break;
              }
            }
          } else {
            // One packet at a time: the block is indivisible by construction.
            record(st.ordinal, "atomic_begin");
            block(*node->body);
            record(node->end_ordinal, "atomic_end");
          }
        },
        st.node);
  }

  void exec(const cmd::AssignConst& c, std::size_t n) {
    assign(n, "assign_const", c.target, c.value, {c.value});
  }
  void exec(const cmd::AssignVar& c, std::size_t n) {
    auto v = eval(c.source);
    assign(n, "assign", c.target, v, {v});
  }
  void exec(const cmd::Cast& c, std::size_t n) {
    auto v = eval(c.source);
    assign(n, "cast", c.target, cast_value(v, c.target.width), {v});
  }
  void exec(const cmd::Add& c, std::size_t n) {
    auto l = eval(c.lhs);
    auto r = eval(c.rhs);
    assign(n, "add", c.target, wrap_add(l, r), {l, r});
  }
  void exec(const cmd::Sub& c, std::size_t n) {
    auto l = eval(c.lhs);
    auto r = eval(c.rhs);
    assign(n, "sub", c.target, wrap_sub(l, r), {l, r});
  }
  void exec(const cmd::Equals& c, std::size_t n) {
    auto l = eval(c.lhs);
    auto r = eval(c.rhs);
    assign(n, "equals", c.target, flag(l == r), {l, r});
  }
  void exec(const cmd::Greater& c, std::size_t n) {
    auto l = eval(c.lhs);
    auto r = eval(c.rhs);
    assign(n, "greater", c.target, flag(l.magnitude() > r.magnitude()), {l, r});
  }
  void exec(const cmd::Rand& c, std::size_t n) {
    assign(n, "rand", c.target, UValue::wrapping(c.target.width, rng_()), {});
  }
  void exec(const cmd::RingPush& c, std::size_t n) {
    auto v = eval(c.source);
    auto& ring = rt_.rings.at(c.ring);
    auto before = ring.slots[ring.head];
    ring.slots[ring.head] = v;
    ring.head = (ring.head + 1) % ring.slots.size();
    record(n, "ring_push", c.ring, before, v, {v});
  }
  void exec(const cmd::RingReadHead& c, std::size_t n) {
    const auto& ring = rt_.rings.at(c.ring);
    auto v = ring.slots[ring.head];
    assign(n, "ring_read_head", c.target, v, {v});
  }
  void exec(const cmd::SendBack&, std::size_t n) {
    auto before = UValue(u16, egress_);
    egress_ = ingress_;
    record(n, "send_back", "egress_port", before, UValue(u16, egress_));
  }
  void exec(const cmd::Forward& c, std::size_t n) {
    auto before = UValue(u16, egress_);
    egress_ = c.port;
    record(n, "forward", "egress_port", before, UValue(u16, egress_));
  }

  const FlowProcessor& p_;
  ProcessorRuntime& rt_;
  std::mt19937_64& rng_;
  FieldValues input_;
  FieldValues output_;
  FieldValues locals_;
  std::uint16_t ingress_;
  std::uint16_t egress_ = kDefaultEgressPort;
  std::vector<TraceEvent>& trace_;
};

}  // namespace detail

// First selector, in registration order, whose stack matches and whose
// criteria all hold. Payload criteria read the leading payload bytes.
inline const FlowSelector* classify(const Solution& solution, const SimPacket& packet) {
  if (!detail::eth_ipv4_matches(packet)) return nullptr;
  for (const auto& s : solution.selectors()) {
    if (s.stack() != packet.stack) continue;
    bool standard_ok = true;
    for (const auto& c : s.criteria()) {
      if (!c.on_payload() && packet.field(c.field).magnitude() != c.value.magnitude()) {
        standard_ok = false;
        break;
      }
    }
    if (!standard_ok) continue;
    if (s.uses_lookahead()) {
      const auto& layout = *s.lookahead();
      if (packet.payload.size() < layout.byte_size()) {
        throw Error(ErrorKind::MalformedPacket,
                    "payload of " + std::to_string(packet.payload.size()) +
                        " bytes is shorter than lookahead layout '" +
                        layout.name() + "' of selector '" + s.name() + "'");
      }
      auto peek = deserialize_layout(layout, packet.payload);
      bool payload_ok = true;
      for (const auto& c : s.criteria()) {
        if (c.on_payload() && peek.at(c.field) != c.value) {
          payload_ok = false;
          break;
        }
      }
      if (!payload_ok) continue;
    }
    const auto& input = s.processor().input_layout();
    if (packet.payload.size() < input.byte_size()) {
      throw Error(ErrorKind::MalformedPacket,
                  "payload of " + std::to_string(packet.payload.size()) +
                      " bytes is shorter than input layout '" + input.name() +
                      "' of processor '" + s.processor().name() + "'");
    }
    return &s;
  }
  return nullptr;
}

inline SimStep simulate_packet(const Solution& solution, SimState state,
                               const SimPacket& packet) {
  SimResult result;
  result.packet = packet;
  const FlowSelector* sel = classify(solution, packet);
  if (sel == nullptr) {
    result.verdict = Verdict::Passthrough;
    return {std::move(result), std::move(state)};
  }
  const FlowProcessor& p = sel->processor();
  auto input = deserialize_layout(p.input_layout(), packet.payload);
  detail::Interpreter interp(p, state.runtime(p.name()), state.rng(), std::move(input),
                             packet.ingress_port, result.trace);
  interp.run();

  SimPacket& out = result.packet;
  if (p.output_layout()) {
    Bytes payload = serialize_layout(*p.output_layout(), interp.output());
    if (!p.truncate_payload()) {
      auto in_size = p.input_layout().byte_size();
      payload.insert(payload.end(), packet.payload.begin() + static_cast<std::ptrdiff_t>(in_size),
                     packet.payload.end());
    }
    auto delta = static_cast<std::uint64_t>(payload.size()) -
                 static_cast<std::uint64_t>(packet.payload.size());
    out.payload = std::move(payload);
    out.set("ipv4.totalLen",
            UValue::wrapping(u16, out.field("ipv4.totalLen").magnitude() + delta));
    if (out.stack == ProtocolStack::Ipv4Udp) {
      out.set("udp.len", UValue::wrapping(u16, out.field("udp.len").magnitude() + delta));
      out.set("udp.checksum", UValue(u16, 0));
    }
  }
  refresh_ipv4_checksum(out);
  result.verdict = Verdict::Processed;
  result.selector = sel->name();
  result.egress_port = interp.egress();
  return {std::move(result), std::move(state)};
}

// Threads one state through `packets` in order. A packet that fails is
// reported in its result and leaves the state as it was.
inline std::vector<SimResult> run_trace(const Solution& solution,
                                        std::span<const SimPacket> packets,
                                        SimState& state) {
  std::vector<SimResult> results;
  results.reserve(packets.size());
  for (const auto& packet : packets) {
    try {
      auto step = simulate_packet(solution, state, packet);
      state = std::move(step.state);
      results.push_back(std::move(step.result));
    } catch (const Error& e) {
      SimResult r;
      r.verdict = Verdict::Error;
      r.packet = packet;
      r.error = e.what();
      results.push_back(std::move(r));
    }
  }
  return results;
}

inline std::vector<SimResult> run_trace(const Solution& solution,
                                        std::span<const SimPacket> packets,
                                        std::uint64_t seed) {
  auto state = SimState::initial(solution, seed);
  return run_trace(solution, packets, state);
}

}  // namespace parrot

#endif  // PARROT_SIMULATOR_HPP
