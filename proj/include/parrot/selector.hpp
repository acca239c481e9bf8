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

#ifndef PARROT_SELECTOR_HPP
#define PARROT_SELECTOR_HPP

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parrot/core.hpp"
#include "parrot/error.hpp"
#include "parrot/flow.hpp"

namespace parrot {

enum class ProtocolStack { Ipv4Udp, Ipv4Tcp };

inline std::string_view to_string(ProtocolStack s) {
  return s == ProtocolStack::Ipv4Udp ? "IPV4_UDP" : "IPV4_TCP";
}

inline std::optional<ProtocolStack> parse_stack(std::string_view s) {
  if (s == "IPV4_UDP") return ProtocolStack::Ipv4Udp;
  if (s == "IPV4_TCP") return ProtocolStack::Ipv4Tcp;
  return std::nullopt;
}

// A standard-header field that selectors may match on. Ethernet addresses
// are 48 bits on the wire and carried in u64 values.
struct StandardField {
  std::string_view name;
  unsigned bits;

  UWidth value_width() const { return bits <= 8    ? u8
                                      : bits <= 16 ? u16
                                      : bits <= 32 ? u32
                                                   : u64; }
};

inline std::span<const StandardField> standard_fields(ProtocolStack stack) {
  static constexpr std::array<StandardField, 11> udp = {{
      {"eth.dstAddr", 48}, {"eth.srcAddr", 48}, {"eth.etherType", 16},
      {"ipv4.srcAddr", 32}, {"ipv4.dstAddr", 32}, {"ipv4.protocol", 8},
      {"ipv4.totalLen", 16}, {"ipv4.ttl", 8},
      {"udp.srcPort", 16}, {"udp.dstPort", 16}, {"udp.len", 16},
  }};
  static constexpr std::array<StandardField, 10> tcp = {{
      {"eth.dstAddr", 48}, {"eth.srcAddr", 48}, {"eth.etherType", 16},
      {"ipv4.srcAddr", 32}, {"ipv4.dstAddr", 32}, {"ipv4.protocol", 8},
      {"ipv4.totalLen", 16}, {"ipv4.ttl", 8},
      {"tcp.srcPort", 16}, {"tcp.dstPort", 16},
  }};
  if (stack == ProtocolStack::Ipv4Udp) return udp;
  return tcp;
}

inline const StandardField* find_standard_field(ProtocolStack stack,
                                                std::string_view name) {
  for (const auto& f : standard_fields(stack)) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

// `field` is either a qualified standard field ("udp.dstPort") or the bare
// name of a field of the selector's lookahead layout.
struct Criterion {
  std::string field;
  UValue value;

  bool on_payload() const noexcept {
    return field.find('.') == std::string::npos;
  }

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

// Binds packets of one protocol stack whose fields all equal the criteria
// values to a processor.
class FlowSelector {
 public:
  FlowSelector(std::string name, ProtocolStack stack,
               std::vector<Criterion> criteria,
               std::optional<HeaderLayout> lookahead,
               std::shared_ptr<const FlowProcessor> processor)
      : name_(std::move(name)),
        stack_(stack),
        criteria_(std::move(criteria)),
        lookahead_(std::move(lookahead)),
        processor_(std::move(processor)) {
    require_identifier(name_, "selector");
    if (processor_ == nullptr) {
      throw Error(ErrorKind::UndeclaredName,
                  "selector '" + name_ + "' has no processor");
    }
    if (criteria_.empty()) {
      throw Error(ErrorKind::MissingField,
                  "selector '" + name_ + "' needs at least one criterion");
    }
    for (const auto& c : criteria_) check_criterion(c);
  }

  const std::string& name() const noexcept { return name_; }
  ProtocolStack stack() const noexcept { return stack_; }
  const std::vector<Criterion>& criteria() const noexcept { return criteria_; }
  const std::optional<HeaderLayout>& lookahead() const noexcept {
    return lookahead_;
  }
  const FlowProcessor& processor() const noexcept { return *processor_; }
  const std::shared_ptr<const FlowProcessor>& processor_ptr() const noexcept {
    return processor_;
  }

  bool uses_lookahead() const {
    return std::any_of(criteria_.begin(), criteria_.end(),
                       [](const Criterion& c) { return c.on_payload(); });
  }

 private:
  void check_criterion(const Criterion& c) const {
    UWidth expected = u8;
    if (c.on_payload()) {
      if (!lookahead_) {
        throw Error(ErrorKind::MissingLookahead,
                    "selector '" + name_ + "' matches payload field '" +
                        c.field + "' but declares no lookahead layout");
      }
      const auto* f = lookahead_->find(c.field);
      if (f == nullptr) {
        throw Error(ErrorKind::UndeclaredName,
                    "lookahead layout '" + lookahead_->name() +
                        "' has no field '" + c.field + "'");
      }
      expected = f->width();
    } else {
      const auto* f = find_standard_field(stack_, c.field);
      if (f == nullptr) {
        throw Error(ErrorKind::UndeclaredName,
                    "'" + c.field + "' is not a standard field of " +
                        std::string(to_string(stack_)));
      }
      expected = f->value_width();
      if (f->bits < 64 && c.value.magnitude() >> f->bits != 0) {
        throw Error(ErrorKind::WidthMismatch,
                    "value for " + c.field + " exceeds " +
                        std::to_string(f->bits) + " bits");
      }
    }
    if (c.value.width() != expected) {
      throw Error(ErrorKind::WidthMismatch,
                  "criterion on " + c.field + " needs a " + to_string(expected) +
                      " value, got " + to_string(c.value.width()));
    }
  }

  std::string name_;
  ProtocolStack stack_;
  std::vector<Criterion> criteria_;
  std::optional<HeaderLayout> lookahead_;
  std::shared_ptr<const FlowProcessor> processor_;
};

// Selectors of one stack in registration order. The parser tests them one
// state at a time; the first whose criteria all hold wins.
struct ParserChain {
  ProtocolStack stack;
  std::vector<FlowSelector> links;
};

// Stacks without selectors get no entry.
inline std::map<ProtocolStack, ParserChain> build_chains(
    std::span<const FlowSelector> selectors) {
  std::set<std::string_view> names;
  for (const auto& s : selectors) {
    if (!names.insert(s.name()).second) {
      throw Error(ErrorKind::DuplicateName,
                  "selector '" + s.name() + "' registered twice");
    }
  }
  std::map<ProtocolStack, ParserChain> chains;
  for (const auto& s : selectors) {
    auto [it, inserted] = chains.try_emplace(s.stack(), ParserChain{s.stack(), {}});
    it->second.links.push_back(s);
  }
  return chains;
}

}  // namespace parrot

#endif  // PARROT_SELECTOR_HPP
