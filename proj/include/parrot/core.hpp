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

#ifndef PARROT_CORE_HPP
#define PARROT_CORE_HPP

// Fixed-width unsigned values, header layouts and the internet checksum.
//
// Every on-wire field is big-endian. Widths are restricted to whole bytes
// (8, 16, 32 or 64 bits), so serialization never deals with bit offsets.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parrot/error.hpp"

namespace parrot {

class UWidth {
 public:
  constexpr explicit UWidth(unsigned bits) : bits_(bits) {
    if (bits != 8 && bits != 16 && bits != 32 && bits != 64) {
      throw Error(ErrorKind::InvalidWidth,
                  "width must be 8, 16, 32 or 64 bits, got " +
                      std::to_string(bits));
    }
  }

  constexpr unsigned bits() const noexcept { return bits_; }
  constexpr std::size_t bytes() const noexcept { return bits_ / 8; }
  constexpr std::uint64_t mask() const noexcept {
    return bits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits_) - 1;
  }

  friend constexpr bool operator==(UWidth, UWidth) = default;
  friend constexpr auto operator<=>(UWidth, UWidth) = default;

 private:
  unsigned bits_;
};

inline constexpr UWidth u8{8};
inline constexpr UWidth u16{16};
inline constexpr UWidth u32{32};
inline constexpr UWidth u64{64};

inline std::string to_string(UWidth w) { return "u" + std::to_string(w.bits()); }

// An unsigned value tagged with its width; the magnitude always fits.
class UValue {
 public:
  UValue(UWidth width, std::uint64_t magnitude)
      : width_(width), magnitude_(magnitude) {
    if (magnitude > width.mask()) {
      throw Error(ErrorKind::ValueOutOfRange,
                  std::to_string(magnitude) + " does not fit in " +
                      to_string(width));
    }
  }

  // Reduces `magnitude` modulo 2^width instead of rejecting it.
  static UValue wrapping(UWidth width, std::uint64_t magnitude) {
    return UValue(width, magnitude & width.mask());
  }

  UWidth width() const noexcept { return width_; }
  std::uint64_t magnitude() const noexcept { return magnitude_; }

  friend bool operator==(const UValue&, const UValue&) = default;

 private:
  UWidth width_;
  std::uint64_t magnitude_;
};

inline std::string to_string(const UValue& v) {
  return to_string(v.width()) + " " + std::to_string(v.magnitude());
}

namespace detail {

inline void require_same_width(const UValue& a, const UValue& b,
                               std::string_view op) {
  if (a.width() != b.width()) {
    throw Error(ErrorKind::WidthMismatch,
                std::string(op) + " of " + to_string(a.width()) + " and " +
                    to_string(b.width()));
  }
}

}  // namespace detail

inline UValue wrap_add(const UValue& a, const UValue& b) {
  detail::require_same_width(a, b, "wrap_add");
  return UValue::wrapping(a.width(), a.magnitude() + b.magnitude());
}

inline UValue wrap_sub(const UValue& a, const UValue& b) {
  detail::require_same_width(a, b, "wrap_sub");
  return UValue::wrapping(a.width(), a.magnitude() - b.magnitude());
}

// Widening keeps the magnitude, narrowing keeps the low-order bits.
inline UValue cast_value(const UValue& v, UWidth target) {
  return UValue::wrapping(target, v.magnitude());
}

// ---------------------------------------------------------------------------
// Identifiers

// P4-16 keywords plus the names the shipped template declares. Anything
// starting with "parrot_" belongs to the generator as well.
inline const std::set<std::string, std::less<>>& reserved_identifiers() {
  static const std::set<std::string, std::less<>> names = {
      // P4-16 keywords and reserved words
      "abstract", "action", "actions", "apply", "bit", "bool", "const",
      "control", "default", "default_action", "else", "entries", "enum",
      "error", "exact", "exit", "extern", "false", "header", "header_union",
      "if", "in", "inout", "int", "key", "list", "lpm", "match_kind", "out",
      "package", "packet_in", "packet_out", "parser", "priority", "return",
      "select", "size", "state", "string", "struct", "switch", "table",
      "ternary", "this", "transition", "true", "tuple", "type", "typedef",
      "value_set", "varbit", "verify", "void",
      // template contract
      "accept", "reject", "start", "hdr", "meta", "standard_metadata",
      "packet", "eth", "ipv4", "udp", "tcp", "headers_t", "metadata_t",
      "ethernet_t", "ipv4_t", "udp_t", "tcp_t", "main", "random", "register",
      "truncate", "ATOMIC_BEGIN", "ATOMIC_END",
  };
  return names;
}

inline bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto is_alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!is_alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return is_alpha(c) || is_digit(c); });
}

inline bool is_reserved(std::string_view name) {
  return reserved_identifiers().contains(name) || name.starts_with("parrot_") ||
         name.starts_with("PARROT_");
}

// Throws InvalidIdentifier or ReservedName. `what` names the declaration
// kind in the message.
inline void require_identifier(std::string_view name, std::string_view what) {
  if (!is_identifier(name)) {
    throw Error(ErrorKind::InvalidIdentifier,
                std::string(what) + " name '" + std::string(name) +
                    "' is not an identifier");
  }
  if (is_reserved(name)) {
    throw Error(ErrorKind::ReservedName, std::string(what) + " name '" +
                                             std::string(name) +
                                             "' is reserved");
  }
}

// ---------------------------------------------------------------------------
// Declarations

class FieldDecl {
 public:
  FieldDecl(std::string name, UWidth width)
      : name_(std::move(name)), width_(width) {
    require_identifier(name_, "field");
  }

  const std::string& name() const noexcept { return name_; }
  UWidth width() const noexcept { return width_; }

  friend bool operator==(const FieldDecl&, const FieldDecl&) = default;

 private:
  std::string name_;
  UWidth width_;
};

class HeaderLayout {
 public:
  HeaderLayout(std::string name, std::vector<FieldDecl> fields)
      : name_(std::move(name)), fields_(std::move(fields)) {
    require_identifier(name_, "layout");
    if (fields_.empty()) {
      throw Error(ErrorKind::MissingField,
                  "layout '" + name_ + "' must declare at least one field");
    }
    std::set<std::string_view> seen;
    for (const auto& f : fields_) {
      if (!seen.insert(f.name()).second) {
        throw Error(ErrorKind::DuplicateName, "field '" + f.name() +
                                                  "' declared twice in layout '" +
                                                  name_ + "'");
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<FieldDecl>& fields() const noexcept { return fields_; }

  std::size_t byte_size() const noexcept {
    std::size_t n = 0;
    for (const auto& f : fields_) n += f.width().bytes();
    return n;
  }

  const FieldDecl* find(std::string_view field) const noexcept {
    auto it = std::find_if(fields_.begin(), fields_.end(),
                           [&](const FieldDecl& f) { return f.name() == field; });
    return it == fields_.end() ? nullptr : &*it;
  }

  friend bool operator==(const HeaderLayout&, const HeaderLayout&) = default;

 private:
  std::string name_;
  std::vector<FieldDecl> fields_;
};

class SharedVariableDecl {
 public:
  SharedVariableDecl(std::string name, UWidth width)
      : SharedVariableDecl(std::move(name), width, UValue(width, 0)) {}

  SharedVariableDecl(std::string name, UWidth width, UValue initial)
      : name_(std::move(name)), width_(width), initial_(initial) {
    require_identifier(name_, "shared variable");
    if (initial_.width() != width_) {
      throw Error(ErrorKind::WidthMismatch,
                  "initial value of '" + name_ + "' is " +
                      to_string(initial_.width()) + ", declared " +
                      to_string(width_));
    }
  }

  const std::string& name() const noexcept { return name_; }
  UWidth width() const noexcept { return width_; }
  const UValue& initial() const noexcept { return initial_; }

  friend bool operator==(const SharedVariableDecl&,
                         const SharedVariableDecl&) = default;

 private:
  std::string name_;
  UWidth width_;
  UValue initial_;
};

// Fixed-capacity ring of registers plus one head-index register. Pushes
// write at the head and advance it modulo the capacity; the head therefore
// always designates the oldest slot.
class RingBufferDecl {
 public:
  RingBufferDecl(std::string name, UWidth element_width, std::size_t capacity)
      : name_(std::move(name)),
        element_width_(element_width),
        capacity_(capacity) {
    require_identifier(name_, "ring buffer");
    if (capacity_ == 0) {
      throw Error(ErrorKind::ValueOutOfRange,
                  "ring buffer '" + name_ + "' needs a capacity of at least 1");
    }
  }

  const std::string& name() const noexcept { return name_; }
  UWidth element_width() const noexcept { return element_width_; }
  std::size_t capacity() const noexcept { return capacity_; }

  friend bool operator==(const RingBufferDecl&, const RingBufferDecl&) = default;

 private:
  std::string name_;
  UWidth element_width_;
  std::size_t capacity_;
};

// ---------------------------------------------------------------------------
// Byte serialization

using Bytes = std::vector<std::uint8_t>;
using FieldValues = std::map<std::string, UValue, std::less<>>;

inline void append_big_endian(Bytes& out, const UValue& v) {
  for (std::size_t i = v.width().bytes(); i-- > 0;) {
    out.push_back(static_cast<std::uint8_t>(v.magnitude() >> (8 * i)));
  }
}

inline std::uint64_t read_big_endian(std::span<const std::uint8_t> bytes) {
  std::uint64_t v = 0;
  for (auto b : bytes) v = (v << 8) | b;
  return v;
}

inline Bytes serialize_layout(const HeaderLayout& layout,
                              const FieldValues& values) {
  Bytes out;
  out.reserve(layout.byte_size());
  for (const auto& f : layout.fields()) {
    auto it = values.find(f.name());
    if (it == values.end()) {
      throw Error(ErrorKind::MissingField, "no value for field '" + f.name() +
                                               "' of layout '" + layout.name() +
                                               "'");
    }
    if (it->second.width() != f.width()) {
      throw Error(ErrorKind::WidthMismatch,
                  "field '" + f.name() + "' is " + to_string(f.width()) +
                      ", value is " + to_string(it->second.width()));
    }
    append_big_endian(out, it->second);
  }
  return out;
}

// Reads the leading layout.byte_size() bytes; anything after is left alone.
inline FieldValues deserialize_layout(const HeaderLayout& layout,
                                      std::span<const std::uint8_t> bytes) {
  if (bytes.size() < layout.byte_size()) {
    throw Error(ErrorKind::TooShort,
                "layout '" + layout.name() + "' needs " +
                    std::to_string(layout.byte_size()) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  FieldValues values;
  std::size_t offset = 0;
  for (const auto& f : layout.fields()) {
    auto n = f.width().bytes();
    values.emplace(f.name(),
                   UValue(f.width(), read_big_endian(bytes.subspan(offset, n))));
    offset += n;
  }
  return values;
}

// RFC 1071 one's-complement checksum. Odd-length input is summed as if
// followed by one zero byte.
inline std::uint16_t internet_checksum(std::span<const std::uint8_t> data) {
  std::uint32_t sum = 0;
  std::size_t i = 0;
  for (; i + 1 < data.size(); i += 2) {
    sum += static_cast<std::uint32_t>(data[i] << 8 | data[i + 1]);
  }
  if (i < data.size()) sum += static_cast<std::uint32_t>(data[i] << 8);
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum & 0xFFFF);
}

}  // namespace parrot

#endif  // PARROT_CORE_HPP
