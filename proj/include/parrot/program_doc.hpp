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

#ifndef PARROT_PROGRAM_DOC_HPP
#define PARROT_PROGRAM_DOC_HPP

// JSON program documents and trace files.
//
// Loading a program replays every body node through the builder API, so the
// same semantic checks run as for hand-written builder code. Failures carry
// the JSON path of the offending node, e.g. "processors[0].body[3].then[1]".
//
// Operands are either reference strings ("in.guess", "out.c1",
// "local.tmp", "shared.secret") or constants such as {"u8": 71}. Numbers may
// be JSON integers, decimal strings or "0x"-prefixed hex strings.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "parrot/core.hpp"
#include "parrot/error.hpp"
#include "parrot/flow.hpp"
#include "parrot/selector.hpp"
#include "parrot/simulator.hpp"
#include "parrot/solution.hpp"
#include "parrot/templates.hpp"

namespace parrot {

using Json = nlohmann::ordered_json;

// An Error located in a JSON document.
class LoadError : public Error {
 public:
  LoadError(ErrorKind kind, std::string path, const std::string& message)
      : Error(kind, message),
        path_(std::move(path)),
        what_(path_ + ": " + std::string(to_string(kind)) + ": " + message) {}

  const std::string& path() const noexcept { return path_; }
  const char* what() const noexcept override { return what_.c_str(); }

  // InvalidDocument and IoError mean the input is unusable; everything else
  // is a semantic problem with a well-formed document.
  bool semantic() const noexcept {
    return kind() != ErrorKind::InvalidDocument && kind() != ErrorKind::IoError;
  }

 private:
  std::string path_;
  std::string what_;
};

namespace doc {

[[noreturn]] inline void invalid(const std::string& path, const std::string& msg) {
  throw LoadError(ErrorKind::InvalidDocument, path, msg);
}

inline std::string member(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline const Json& require(const Json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) invalid(path, "expected an object");
  auto it = j.find(std::string(key));
  if (it == j.end()) invalid(path, "missing key '" + std::string(key) + "'");
  return *it;
}

inline const Json* optional_member(const Json& j, std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) invalid(path, "expected a string");
  return j.get<std::string>();
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) invalid(path, "expected an array");
  return j;
}

inline std::uint64_t as_uint(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) invalid(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    auto s = j.get<std::string>();
    int base = 10;
    std::string_view digits = s;
    if (digits.starts_with("0x") || digits.starts_with("0X")) {
      base = 16;
      digits.remove_prefix(2);
    }
    if (digits.empty()) invalid(path, "empty number '" + s + "'");
    std::uint64_t v = 0;
    for (char c : digits) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else invalid(path, "malformed number '" + s + "'");
      if (v > (~std::uint64_t{0} - static_cast<std::uint64_t>(d)) / static_cast<std::uint64_t>(base)) {
        invalid(path, "number '" + s + "' does not fit in 64 bits");
      }
      v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
    }
    return v;
  }
  invalid(path, "expected an unsigned integer");
}

inline bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) invalid(path, "expected true or false");
  return j.get<bool>();
}

inline UWidth as_width(const Json& j, const std::string& path) {
  auto bits = as_uint(j, path);
  if (bits != 8 && bits != 16 && bits != 32 && bits != 64) {
    throw LoadError(ErrorKind::InvalidWidth, path,
                    "width must be 8, 16, 32 or 64, got " + std::to_string(bits));
  }
  return UWidth(static_cast<unsigned>(bits));
}

// Runs `f`, relabelling library errors with `path`.
template <typename F>
auto at(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const LoadError&) {
    throw;
  } catch (const Error& e) {
    throw LoadError(e.kind(), path, e.detail());
  }
}

// {"u8": 71}
inline UValue as_constant(const Json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) invalid(path, "expected a constant like {\"u8\": 1}");
  const auto& [key, value] = *j.items().begin();
  static const std::map<std::string, unsigned, std::less<>> widths = {
      {"u8", 8}, {"u16", 16}, {"u32", 32}, {"u64", 64}};
  auto it = widths.find(key);
  if (it == widths.end()) invalid(path, "unknown constant width '" + key + "'");
  auto magnitude = as_uint(value, member(path, key));
  return at(path, [&] { return UValue(UWidth(it->second), magnitude); });
}

inline Json constant_to_json(const UValue& v) {
  Json j = Json::object();
  j["u" + std::to_string(v.width().bits())] = v.magnitude();
  return j;
}

inline VarRef as_ref(const FlowProcessor& p, const Json& j, const std::string& path) {
  auto s = as_string(j, path);
  auto dot = s.find('.');
  if (dot == std::string::npos) invalid(path, "reference '" + s + "' needs a scope prefix");
  auto scope_name = std::string_view(s).substr(0, dot);
  auto name = std::string_view(s).substr(dot + 1);
  Scope scope;
  if (scope_name == "in") scope = Scope::Input;
  else if (scope_name == "out") scope = Scope::Output;
  else if (scope_name == "local") scope = Scope::Local;
  else if (scope_name == "shared") scope = Scope::Shared;
  else invalid(path, "unknown scope '" + std::string(scope_name) + "'");
  return at(path, [&] { return p.ref(scope, name); });
}

inline Operand as_operand(const FlowProcessor& p, const Json& j, const std::string& path) {
  if (j.is_string()) return as_ref(p, j, path);
  return as_constant(j, path);
}

inline Json operand_to_json(const Operand& op) {
  if (auto* r = std::get_if<VarRef>(&op)) return to_string(*r);
  return constant_to_json(std::get<UValue>(op));
}

inline Hint as_hint(const Json& j, const std::string& path) {
  auto s = as_string(j, path);
  if (s == "IF_ELSE") return Hint::IfElse;
  if (s == "TABLE") return Hint::Table;
  invalid(path, "hint must be IF_ELSE or TABLE");
}

inline Command as_command(const FlowProcessor& p, std::string_view op, const Json& j,
                          const std::string& path) {
  auto ref = [&](std::string_view key) {
    return as_ref(p, require(j, key, path), member(path, key));
  };
  auto operand = [&](std::string_view key) {
    return as_operand(p, require(j, key, path), member(path, key));
  };
  if (op == "assign_const") {
    return cmd::AssignConst{ref("target"),
                            as_constant(require(j, "value", path), member(path, "value"))};
  }
  if (op == "assign") return cmd::AssignVar{ref("target"), operand("source")};
  if (op == "cast") return cmd::Cast{ref("target"), operand("source")};
  if (op == "add") return cmd::Add{ref("target"), operand("lhs"), operand("rhs")};
  if (op == "sub") return cmd::Sub{ref("target"), operand("lhs"), operand("rhs")};
  if (op == "equals") {
    Hint hint = Hint::IfElse;
    if (auto* h = optional_member(j, "hint")) hint = as_hint(*h, member(path, "hint"));
    return cmd::Equals{ref("target"), operand("lhs"), operand("rhs"), hint};
  }
  if (op == "greater") return cmd::Greater{ref("target"), operand("lhs"), operand("rhs")};
  if (op == "rand") return cmd::Rand{ref("target")};
  if (op == "ring_push") {
    return cmd::RingPush{as_string(require(j, "ring", path), member(path, "ring")),
                         operand("source")};
  }
  if (op == "ring_read_head") {
    return cmd::RingReadHead{as_string(require(j, "ring", path), member(path, "ring")),
                             ref("target")};
  }
  if (op == "send_back") return cmd::SendBack{};
  if (op == "forward") {
    auto port = as_uint(require(j, "port", path), member(path, "port"));
    if (port > 0xFFFF) {
      throw LoadError(ErrorKind::ValueOutOfRange, member(path, "port"),
                      "port must fit in 16 bits");
    }
    return cmd::Forward{static_cast<std::uint16_t>(port)};
  }
  invalid(member(path, "op"), "unknown op '" + std::string(op) + "'");
}

inline void replay(FlowProcessor& p, Block& block, const Json& body, const std::string& path) {
  as_array(body, path);
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Json& node = body[i];
    const std::string here = index(path, i);
    auto op = as_string(require(node, "op", here), member(here, "op"));
    if (op == "if") {
      auto cond = as_ref(p, require(node, "cond", here), member(here, "cond"));
      Block& then = at(here, [&]() -> Block& { return block.If(cond); });
      if (auto* t = optional_member(node, "then")) replay(p, then, *t, member(here, "then"));
      if (auto* e = optional_member(node, "else")) {
        Block& otherwise = at(here, [&]() -> Block& { return then.Else(); });
        replay(p, otherwise, *e, member(here, "else"));
        at(here, [&]() -> Block& { return otherwise.EndIf(); });
      } else {
        at(here, [&]() -> Block& { return then.EndIf(); });
      }
    } else if (op == "switch") {
      auto sel = as_operand(p, require(node, "selector", here), member(here, "selector"));
      SwitchBlock& sw = at(here, [&]() -> SwitchBlock& { return block.Switch(sel); });
      const auto cases_path = member(here, "cases");
      const Json* cases = optional_member(node, "cases");
      if (cases != nullptr) {
        as_array(*cases, cases_path);
        for (std::size_t k = 0; k < cases->size(); ++k) {
          const std::string arm = index(cases_path, k);
          auto value = as_constant(require((*cases)[k], "value", arm), member(arm, "value"));
          Block& body_block = at(arm, [&]() -> Block& { return sw.Case(value); });
          if (auto* b = optional_member((*cases)[k], "body")) {
            replay(p, body_block, *b, member(arm, "body"));
          }
        }
      }
      at(here, [&]() -> Block& { return sw.EndSwitch(); });
    } else if (op == "atomic") {
      Block& inner = at(here, [&]() -> Block& { return block.Atomic(); });
      if (auto* b = optional_member(node, "body")) replay(p, inner, *b, member(here, "body"));
      at(here, [&]() -> Block& { return inner.EndAtomic(); });
    } else {
      auto c = as_command(p, op, node, here);
      at(here, [&]() -> Block& { return block.add(std::move(c)); });
    }
  }
}

inline HeaderLayout as_layout(const std::string& name, const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<FieldDecl> fields;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string here = index(path, i);
    auto field = as_string(require(j[i], "name", here), member(here, "name"));
    auto width = as_width(require(j[i], "width", here), member(here, "width"));
    fields.push_back(at(here, [&] { return FieldDecl(field, width); }));
  }
  return at(path, [&] { return HeaderLayout(name, std::move(fields)); });
}

struct LayoutTable {
  std::map<std::string, HeaderLayout, std::less<>> layouts;

  const HeaderLayout& get(const Json& name_json, const std::string& path) const {
    auto name = as_string(name_json, path);
    auto it = layouts.find(name);
    if (it == layouts.end()) {
      throw LoadError(ErrorKind::UndeclaredName, path, "no layout named '" + name + "'");
    }
    return it->second;
  }
};

inline std::shared_ptr<FlowProcessor> as_processor(const LayoutTable& layouts, const Json& j,
                                                   const std::string& path) {
  ProcessorDecl decl{
      .name = as_string(require(j, "name", path), member(path, "name")),
      .input = layouts.get(require(j, "input", path), member(path, "input")),
  };
  if (auto* out = optional_member(j, "output")) {
    decl.output = layouts.get(*out, member(path, "output"));
  }
  if (auto* t = optional_member(j, "truncate_payload")) {
    decl.truncate_payload = as_bool(*t, member(path, "truncate_payload"));
  }
  if (auto* locals = optional_member(j, "locals")) {
    const auto base = member(path, "locals");
    as_array(*locals, base);
    for (std::size_t i = 0; i < locals->size(); ++i) {
      const std::string here = index(base, i);
      const Json& l = (*locals)[i];
      auto name = as_string(require(l, "name", here), member(here, "name"));
      bool flag = false;
      if (auto* f = optional_member(l, "flag")) flag = as_bool(*f, member(here, "flag"));
      if (flag) {
        decl.locals.push_back(at(here, [&] { return LocalDecl::flag(name); }));
      } else {
        auto width = as_width(require(l, "width", here), member(here, "width"));
        decl.locals.push_back(at(here, [&] { return LocalDecl(name, width); }));
      }
    }
  }
  if (auto* shared = optional_member(j, "shared")) {
    const auto base = member(path, "shared");
    as_array(*shared, base);
    for (std::size_t i = 0; i < shared->size(); ++i) {
      const std::string here = index(base, i);
      const Json& s = (*shared)[i];
      auto name = as_string(require(s, "name", here), member(here, "name"));
      auto width = as_width(require(s, "width", here), member(here, "width"));
      std::uint64_t initial = 0;
      if (auto* v = optional_member(s, "initial")) initial = as_uint(*v, member(here, "initial"));
      decl.shared.push_back(at(here, [&] {
        return SharedVariableDecl(name, width, UValue(width, initial));
      }));
    }
  }
  if (auto* rings = optional_member(j, "rings")) {
    const auto base = member(path, "rings");
    as_array(*rings, base);
    for (std::size_t i = 0; i < rings->size(); ++i) {
      const std::string here = index(base, i);
      const Json& r = (*rings)[i];
      auto name = as_string(require(r, "name", here), member(here, "name"));
      auto width = as_width(require(r, "width", here), member(here, "width"));
      auto capacity = as_uint(require(r, "capacity", here), member(here, "capacity"));
      decl.rings.push_back(at(here, [&] {
        return RingBufferDecl(name, width, static_cast<std::size_t>(capacity));
      }));
    }
  }
  auto p = at(path, [&] { return std::make_shared<FlowProcessor>(std::move(decl)); });
  const auto body_path = member(path, "body");
  if (auto* body = optional_member(j, "body")) replay(*p, p->body(), *body, body_path);
  at(body_path, [&] { p->validate_complete(); });
  return p;
}

inline std::string hex_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

inline Bytes hex_decode(std::string_view hex, const std::string& path) {
  if (hex.size() % 2 != 0) invalid(path, "hex string has odd length");
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    invalid(path, "malformed hex digit '" + std::string(1, c) + "'");
  };
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace doc

// ---------------------------------------------------------------------------
// Programs

inline Solution load_program(const Json& j) {
  using namespace doc;
  if (!j.is_object()) invalid("", "program document must be an object");

  LayoutTable layouts;
  if (auto* l = optional_member(j, "layouts")) {
    if (!l->is_object()) invalid("layouts", "expected an object of layouts");
    for (const auto& [name, fields] : l->items()) {
      layouts.layouts.emplace(name, as_layout(name, fields, member("layouts", name)));
    }
  }

  std::map<std::string, std::shared_ptr<const FlowProcessor>, std::less<>> processors;
  if (auto* procs = optional_member(j, "processors")) {
    as_array(*procs, "processors");
    for (std::size_t i = 0; i < procs->size(); ++i) {
      const std::string here = index("processors", i);
      auto p = as_processor(layouts, (*procs)[i], here);
      if (!processors.emplace(p->name(), p).second) {
        throw LoadError(ErrorKind::DuplicateName, here,
                        "processor '" + p->name() + "' declared twice");
      }
    }
  }

  std::vector<FlowSelector> selectors;
  if (auto* sels = optional_member(j, "selectors")) {
    as_array(*sels, "selectors");
    for (std::size_t i = 0; i < sels->size(); ++i) {
      const std::string here = index("selectors", i);
      const Json& s = (*sels)[i];
      auto name = as_string(require(s, "name", here), member(here, "name"));
      auto stack_name = as_string(require(s, "stack", here), member(here, "stack"));
      auto stack = parse_stack(stack_name);
      if (!stack) invalid(member(here, "stack"), "unknown protocol stack '" + stack_name + "'");
      auto proc_name = as_string(require(s, "processor", here), member(here, "processor"));
      auto proc = processors.find(proc_name);
      if (proc == processors.end()) {
        throw LoadError(ErrorKind::UndeclaredName, member(here, "processor"),
                        "no processor named '" + proc_name + "'");
      }
      std::optional<HeaderLayout> lookahead;
      if (auto* la = optional_member(s, "lookahead")) {
        lookahead = layouts.get(*la, member(here, "lookahead"));
      }
      std::vector<Criterion> criteria;
      const auto crit_path = member(here, "criteria");
      const Json& crits = as_array(require(s, "criteria", here), crit_path);
      for (std::size_t k = 0; k < crits.size(); ++k) {
        const std::string c = index(crit_path, k);
        criteria.push_back(Criterion{
            as_string(require(crits[k], "field", c), member(c, "field")),
            as_constant(require(crits[k], "value", c), member(c, "value"))});
      }
      selectors.push_back(at(here, [&] {
        return FlowSelector(name, *stack, std::move(criteria), std::move(lookahead),
                            proc->second);
      }));
    }
  }

  TemplateId tmpl = TemplateId::V1ModelBasic;
  if (auto* t = optional_member(j, "template")) {
    auto name = as_string(*t, "template");
    auto parsed = parse_template(name);
    if (!parsed) {
      throw LoadError(ErrorKind::UnknownTemplate, "template", "no template named '" + name + "'");
    }
    tmpl = *parsed;
  }

  CodegenConfig options;
  if (auto* o = optional_member(j, "options")) {
    if (!o->is_object()) invalid("options", "expected an object");
    if (auto* c = optional_member(*o, "emit_combined")) {
      options.emit_combined = as_bool(*c, "options.emit_combined");
    }
    if (auto* n = optional_member(*o, "indent")) {
      options.indent = static_cast<int>(std::min<std::uint64_t>(as_uint(*n, "options.indent"), 1000));
    }
  }
  return at("", [&] { return Solution(std::move(selectors), tmpl, options); });
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(ErrorKind::IoError, path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(ErrorKind::InvalidDocument, path.string(), e.what());
  }
}

inline Solution load_program_file(const std::filesystem::path& path) {
  return load_program(read_json_file(path));
}

namespace doc {

inline Json layout_to_json(const HeaderLayout& layout) {
  Json fields = Json::array();
  for (const auto& f : layout.fields()) {
    fields.push_back(Json{{"name", f.name()}, {"width", f.width().bits()}});
  }
  return fields;
}

inline Json block_to_json(const Block& b, bool ordinals);

inline Json statement_to_json(const Statement& st, bool ordinals) {
  Json j = Json::object();
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Command>) {
          j["op"] = std::string(command_name(node));
          std::visit(
              [&](const auto& c) {
                using C = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<C, cmd::AssignConst>) {
                  j["target"] = to_string(c.target);
                  j["value"] = constant_to_json(c.value);
                } else if constexpr (std::is_same_v<C, cmd::AssignVar> ||
                                     std::is_same_v<C, cmd::Cast>) {
                  j["target"] = to_string(c.target);
                  j["source"] = operand_to_json(c.source);
                } else if constexpr (std::is_same_v<C, cmd::Add> ||
                                     std::is_same_v<C, cmd::Sub> ||
                                     std::is_same_v<C, cmd::Greater>) {
                  j["target"] = to_string(c.target);
                  j["lhs"] = operand_to_json(c.lhs);
                  j["rhs"] = operand_to_json(c.rhs);
                } else if constexpr (std::is_same_v<C, cmd::Equals>) {
                  j["target"] = to_string(c.target);
                  j["lhs"] = operand_to_json(c.lhs);
                  j["rhs"] = operand_to_json(c.rhs);
                  if (c.hint != Hint::IfElse) j["hint"] = std::string(to_string(c.hint));
                } else if constexpr (std::is_same_v<C, cmd::Rand>) {
                  j["target"] = to_string(c.target);
                } else if constexpr (std::is_same_v<C, cmd::RingPush>) {
                  j["ring"] = c.ring;
                  j["source"] = operand_to_json(c.source);
                } else if constexpr (std::is_same_v<C, cmd::RingReadHead>) {
                  j["ring"] = c.ring;
                  j["target"] = to_string(c.target);
                } else if constexpr (std::is_same_v<C, cmd::Forward>) {
                  j["port"] = c.port;
                }
              },
              node);
        } else if constexpr (std::is_same_v<T, std::unique_ptr<IfNode>>) {
          j["op"] = "if";
          j["cond"] = to_string(node->cond);
          j["then"] = block_to_json(*node->then_block, ordinals);
          if (node->else_block) j["else"] = block_to_json(*node->else_block, ordinals);
          if (ordinals) {
            j["else_ordinal"] = node->else_ordinal;
            j["end_ordinal"] = node->end_ordinal;
          }
        } else if constexpr (std::is_same_v<T, std::unique_ptr<SwitchNode>>) {
          j["op"] = "switch";
          j["selector"] = operand_to_json(node->selector);
          Json cases = Json::array();
          for (const auto& arm : node->cases) {
            Json a = {{"value", constant_to_json(arm.value)},
                      {"body", block_to_json(*arm.body, ordinals)}};
            if (ordinals) a["ordinal"] = arm.ordinal;
            cases.push_back(std::move(a));
          }
          j["cases"] = std::move(cases);
          if (ordinals) j["end_ordinal"] = node->end_ordinal;
        } else {
          j["op"] = "atomic";
          j["body"] = block_to_json(*node->body, ordinals);
          if (ordinals) j["end_ordinal"] = node->end_ordinal;
        }
      },
      st.node);
  if (ordinals) j["ordinal"] = st.ordinal;
  return j;
}

inline Json block_to_json(const Block& b, bool ordinals) {
  Json out = Json::array();
  for (const auto& st : b.statements()) out.push_back(statement_to_json(st, ordinals));
  return out;
}

}  // namespace doc

// Declarations and body of one processor. With `ordinals`, every node also
// carries the builder-call numbers, which makes the dump an exact image of
// the tree (used to check that rejected calls change nothing).
inline Json processor_to_json(const FlowProcessor& p, bool ordinals = false) {
  using namespace doc;
  Json j = Json::object();
  j["name"] = p.name();
  j["input"] = p.input_layout().name();
  if (p.output_layout()) j["output"] = p.output_layout()->name();
  if (p.truncate_payload()) j["truncate_payload"] = true;
  if (!p.local_decls().empty()) {
    Json locals = Json::array();
    for (const auto& l : p.local_decls()) {
      if (l.boolean()) {
        locals.push_back(Json{{"name", l.name()}, {"flag", true}});
      } else {
        locals.push_back(Json{{"name", l.name()}, {"width", l.width().bits()}});
      }
    }
    j["locals"] = std::move(locals);
  }
  if (!p.shared_decls().empty()) {
    Json shared = Json::array();
    for (const auto& s : p.shared_decls()) {
      Json e = {{"name", s.name()}, {"width", s.width().bits()}};
      if (s.initial().magnitude() != 0) e["initial"] = s.initial().magnitude();
      shared.push_back(std::move(e));
    }
    j["shared"] = std::move(shared);
  }
  if (!p.ring_decls().empty()) {
    Json rings = Json::array();
    for (const auto& r : p.ring_decls()) {
      rings.push_back(Json{{"name", r.name()},
                           {"width", r.element_width().bits()},
                           {"capacity", r.capacity()}});
    }
    j["rings"] = std::move(rings);
  }
  j["body"] = block_to_json(p.body(), ordinals);
  return j;
}

inline Json export_program(const Solution& solution) {
  using namespace doc;
  std::map<std::string, const HeaderLayout*, std::less<>> layouts;
  auto note = [&](const HeaderLayout& l) {
    auto [it, inserted] = layouts.try_emplace(l.name(), &l);
    if (!inserted && !(*it->second == l)) {
      throw Error(ErrorKind::DuplicateName,
                  "two different layouts are named '" + l.name() + "'");
    }
  };
  auto procs = solution.processors();
  for (const FlowProcessor* p : procs) {
    note(p->input_layout());
    if (p->output_layout()) note(*p->output_layout());
  }
  for (const auto& s : solution.selectors()) {
    if (s.lookahead()) note(*s.lookahead());
  }

  Json j = Json::object();
  Json layouts_json = Json::object();
  for (const auto& [name, l] : layouts) layouts_json[name] = layout_to_json(*l);
  j["layouts"] = std::move(layouts_json);
  Json procs_json = Json::array();
  for (const FlowProcessor* p : procs) procs_json.push_back(processor_to_json(*p));
  j["processors"] = std::move(procs_json);
  Json sels = Json::array();
  for (const auto& s : solution.selectors()) {
    Json e = Json::object();
    e["name"] = s.name();
    e["stack"] = std::string(to_string(s.stack()));
    e["processor"] = s.processor().name();
    if (s.lookahead()) e["lookahead"] = s.lookahead()->name();
    Json crits = Json::array();
    for (const auto& c : s.criteria()) {
      crits.push_back(Json{{"field", c.field}, {"value", constant_to_json(c.value)}});
    }
    e["criteria"] = std::move(crits);
    sels.push_back(std::move(e));
  }
  j["selectors"] = std::move(sels);
  j["template"] = std::string(to_string(solution.template_id()));
  j["options"] = Json{{"emit_combined", solution.options().emit_combined},
                      {"indent", solution.options().indent}};
  return j;
}

// ---------------------------------------------------------------------------
// Traces

struct TraceDoc {
  std::uint64_t seed = 0;
  std::vector<SimPacket> packets;
};

inline TraceDoc load_trace(const Json& j) {
  using namespace doc;
  if (!j.is_object()) invalid("", "trace document must be an object");
  TraceDoc t;
  if (auto* s = optional_member(j, "seed")) t.seed = as_uint(*s, "seed");
  const Json& packets = as_array(require(j, "packets", ""), "packets");
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const std::string here = index("packets", i);
    const Json& pj = packets[i];
    if (!pj.is_object()) invalid(here, "expected an object");
    ProtocolStack stack = ProtocolStack::Ipv4Udp;
    if (auto* s = optional_member(pj, "stack")) {
      auto name = as_string(*s, member(here, "stack"));
      auto parsed = parse_stack(name);
      if (!parsed) invalid(member(here, "stack"), "unknown protocol stack '" + name + "'");
      stack = *parsed;
    }
    std::uint16_t port = 0;
    if (auto* p = optional_member(pj, "ingress_port")) {
      auto v = as_uint(*p, member(here, "ingress_port"));
      if (v > 0xFFFF) invalid(member(here, "ingress_port"), "port must fit in 16 bits");
      port = static_cast<std::uint16_t>(v);
    }
    Bytes payload;
    if (auto* h = optional_member(pj, "payload_hex")) {
      payload = hex_decode(as_string(*h, member(here, "payload_hex")), member(here, "payload_hex"));
    }
    FieldValues overrides;
    if (auto* f = optional_member(pj, "fields")) {
      const auto fields_path = member(here, "fields");
      if (!f->is_object()) invalid(fields_path, "expected an object");
      for (const auto& [name, value] : f->items()) {
        const auto fpath = member(fields_path, name);
        const auto* field = find_packet_field(stack, name);
        if (field == nullptr) invalid(fpath, "unknown packet field '" + name + "'");
        auto v = as_uint(value, fpath);
        if (field->bits < 64 && (v >> field->bits) != 0) {
          invalid(fpath, "value does not fit in " + std::to_string(field->bits) + " bits");
        }
        overrides.insert_or_assign(name, UValue(field->value_width(), v));
      }
    }
    t.packets.push_back(at(here, [&] {
      return SimPacket::make(stack, std::move(payload), overrides, port);
    }));
  }
  return t;
}

inline Json packet_fields_to_json(const SimPacket& p) {
  Json fields = Json::object();
  for (const auto& f : packet_fields(p.stack)) {
    fields[std::string(f.name)] = p.field(f.name).magnitude();
  }
  return fields;
}

inline Json trace_event_to_json(const TraceEvent& e) {
  Json j = Json::object();
  j["ordinal"] = e.ordinal;
  j["kind"] = e.kind;
  if (!e.target.empty()) j["target"] = e.target;
  if (e.before) j["before"] = e.before->magnitude();
  if (e.after) j["after"] = e.after->magnitude();
  if (!e.operands.empty()) {
    Json ops = Json::array();
    for (const auto& v : e.operands) ops.push_back(v.magnitude());
    j["operands"] = std::move(ops);
  }
  return j;
}

inline Json results_to_json(std::uint64_t seed, std::span<const SimResult> results,
                            bool with_trace) {
  Json out = Json::object();
  out["seed"] = seed;
  Json arr = Json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    Json j = Json::object();
    j["index"] = i;
    j["verdict"] = std::string(to_string(r.verdict));
    if (r.verdict == Verdict::Error) {
      j["error"] = r.error;
      arr.push_back(std::move(j));
      continue;
    }
    if (!r.selector.empty()) j["selector"] = r.selector;
    j["egress_port"] = r.egress_port;
    j["payload_hex"] = doc::hex_encode(r.packet.payload);
    j["fields"] = packet_fields_to_json(r.packet);
    if (with_trace) {
      Json events = Json::array();
      for (const auto& e : r.trace) events.push_back(trace_event_to_json(e));
      j["trace"] = std::move(events);
    }
    arr.push_back(std::move(j));
  }
  out["results"] = std::move(arr);
  return out;
}

}  // namespace parrot

#endif  // PARROT_PROGRAM_DOC_HPP
