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

#ifndef PARROT_CODEGEN_HPP
#define PARROT_CODEGEN_HPP

// P4-16 emission. generate() turns a Solution into the five fragment files
// the template includes. Output depends only on the Solution: no
// timestamps, and every collection is walked in declaration or
// registration order.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
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

struct GeneratedFileSet {
  std::string headers;
  std::string parser;
  std::string structs;
  std::string decls;
  std::string apply;
  // The template with every hook replaced by its fragment.
  std::optional<std::string> combined;

  // Fragments in hook order, then program.p4 when present.
  std::vector<std::pair<std::string, std::string>> files() const {
    std::vector<std::pair<std::string, std::string>> out = {
        {"headers.p4inc", headers},
        {"parser.p4inc", parser},
        {"structs.p4inc", structs},
        {"decls.p4inc", decls},
        {"apply.p4inc", apply},
    };
    if (combined) out.emplace_back("program.p4", *combined);
    return out;
  }

  friend bool operator==(const GeneratedFileSet&, const GeneratedFileSet&) = default;
};

struct ProcessorFragments {
  std::string decls;
  std::string apply;
};

namespace codegen {

// Indentation-aware line writer.
class Writer {
 public:
  Writer(int indent_width, int level) : width_(indent_width), level_(level) {}

  Writer& line(std::string_view text) {
    if (!text.empty()) out_.append(static_cast<std::size_t>(width_ * level_), ' ');
    out_.append(text);
    out_.push_back('\n');
    return *this;
  }
  // Preprocessor lines are never indented.
  Writer& directive(std::string_view text) {
    out_.append(text);
    out_.push_back('\n');
    return *this;
  }
  Writer& blank() {
    if (!out_.empty() && !out_.ends_with("\n\n")) out_.push_back('\n');
    return *this;
  }
  Writer& open(std::string_view head) {
    line(std::string(head) + " {");
    ++level_;
    return *this;
  }
  Writer& close(std::string_view tail = "}") {
    --level_;
    line(tail);
    return *this;
  }
  Writer& indent() { ++level_; return *this; }
  Writer& dedent() { --level_; return *this; }

  const std::string& str() const noexcept { return out_; }
  std::string take() { return std::move(out_); }

 private:
  int width_;
  int level_;
  std::string out_;
};

inline std::string bit_type(UWidth w) {
  return "bit<" + std::to_string(w.bits()) + ">";
}

inline std::string literal(unsigned bits, std::uint64_t v) {
  return std::to_string(bits) + "w" + std::to_string(v);
}

inline std::string literal(const UValue& v) {
  return literal(v.width().bits(), v.magnitude());
}

inline std::string input_header(const FlowProcessor& p) { return p.name() + "_in"; }
inline std::string output_header(const FlowProcessor& p) { return p.name() + "_out"; }
inline std::string variable(const FlowProcessor& p, std::string_view name) {
  return p.name() + "_" + std::string(name);
}
inline std::string shared_register(const FlowProcessor& p, std::string_view name) {
  return "parrot_reg_" + p.name() + "_" + std::string(name);
}
inline std::string ring_register(const FlowProcessor& p, std::string_view name) {
  return "parrot_ring_" + p.name() + "_" + std::string(name);
}
inline std::string init_register(const FlowProcessor& p) {
  return "parrot_init_" + p.name();
}
inline std::string equals_table(const FlowProcessor& p, std::size_t ordinal) {
  return "parrot_eq_" + p.name() + "_" + std::to_string(ordinal);
}
inline std::string hit_flag(const FlowSelector& s) { return "parrot_hit_" + s.name(); }
inline std::string extract_state(const FlowSelector& s) {
  return "parrot_extract_" + s.name();
}
inline std::string peek_type(const FlowSelector& s) {
  return "parrot_peek_" + s.name() + "_t";
}
inline std::string peek_var(const FlowSelector& s) { return "parrot_peek_" + s.name(); }

inline std::string chain_state(ProtocolStack stack, std::size_t link) {
  std::string base = stack == ProtocolStack::Ipv4Udp ? "parrot_chain_ipv4_udp"
                                                     : "parrot_chain_ipv4_tcp";
  return link == 0 ? base : base + "_" + std::to_string(link);
}

inline std::string chain_macro(ProtocolStack stack) {
  return "PARROT_CHAIN_" + std::string(to_string(stack));
}

inline std::string ref_expr(const FlowProcessor& p, const VarRef& r) {
  switch (r.scope) {
    case Scope::Input: return "hdr." + input_header(p) + "." + r.name;
    case Scope::Output: return "hdr." + output_header(p) + "." + r.name;
    case Scope::Local:
    case Scope::Shared: return variable(p, r.name);
  }
  return {};
}

inline std::string operand_expr(const FlowProcessor& p, const Operand& op) {
  if (auto* r = std::get_if<VarRef>(&op)) return ref_expr(p, *r);
  return literal(std::get<UValue>(op));
}

inline void emit_header_type(Writer& w, const std::string& type,
                             const HeaderLayout& layout) {
  w.open("header " + type);
  for (const auto& f : layout.fields()) {
    w.line(bit_type(f.width()) + " " + f.name() + ";");
  }
  w.close();
}

// Emits the apply-block statements of one processor body.
class BodyEmitter {
 public:
  BodyEmitter(const FlowProcessor& p, Writer& w) : p_(p), w_(w) {}

  void block(const Block& b) {
    for (const auto& st : b.statements()) statement(st);
  }

 private:
  void statement(const Statement& st) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Command>) {
            w_.line("// #" + std::to_string(st.ordinal) + " " +
                    std::string(command_name(node)));
            command(node, st.ordinal);
          } else if constexpr (std::is_same_v<T, std::unique_ptr<IfNode>>) {
            w_.line("// #" + std::to_string(st.ordinal) + " if " +
                    to_string(node->cond));
            w_.open("if (" + ref_expr(p_, node->cond) + " == 8w1)");
            block(*node->then_block);
            if (node->else_block) {
              w_.dedent();
              w_.line("} else {");
              w_.indent();
              block(*node->else_block);
            }
            w_.close();
          } else if constexpr (std::is_same_v<T, std::unique_ptr<SwitchNode>>) {
            w_.line("// #" + std::to_string(st.ordinal) + " switch");
            read_shared(node->selector);
            std::string sel = operand_expr(p_, node->selector);
            bool first = true;
            for (const auto& arm : node->cases) {
              std::string cond = "(" + sel + " == " + literal(arm.value) + ")";
              if (first) {
                w_.open("if " + cond);
              } else {
                w_.dedent();
                w_.line("} else if " + cond + " {");
                w_.indent();
              }
              first = false;
              block(*arm.body);
            }
            if (!first) w_.close();
          } else {
            w_.line("// #" + std::to_string(st.ordinal) + " atomic");
            w_.line("ATOMIC_BEGIN");
            w_.indent();
            block(*node->body);
            w_.dedent();
            w_.line("ATOMIC_END");
          }
        },
        st.node);
  }

  void read_shared(const Operand& op) {
    if (auto* r = std::get_if<VarRef>(&op); r && r->scope == Scope::Shared) {
      read_shared(*r);
    }
  }
  void read_shared(const VarRef& r) {
    w_.line(shared_register(p_, r.name) + ".read(" + variable(p_, r.name) + ", 0);");
  }
  void write_shared(const VarRef& r) {
    if (r.scope == Scope::Shared) {
      w_.line(shared_register(p_, r.name) + ".write(0, " + variable(p_, r.name) + ");");
    }
  }
  // Each shared operand is loaded once, in operand order.
  void read_operands(std::initializer_list<const Operand*> ops) {
    std::set<std::string> done;
    for (const Operand* op : ops) {
      auto* r = std::get_if<VarRef>(op);
      if (r && r->scope == Scope::Shared && done.insert(r->name).second) {
        read_shared(*r);
      }
    }
  }

  std::string target(const VarRef& r) { return ref_expr(p_, r); }
  std::string expr(const Operand& op) { return operand_expr(p_, op); }

  void flag_if(const VarRef& t, const std::string& cond) {
    w_.open("if (" + cond + ")");
    w_.line(target(t) + " = 8w1;");
    w_.dedent();
    w_.line("} else {");
    w_.indent();
    w_.line(target(t) + " = 8w0;");
    w_.close();
  }

  void command(const Command& c, std::size_t ordinal) {
    std::visit([&](const auto& x) { emit(x, ordinal); }, c);
  }

  void emit(const cmd::AssignConst& c, std::size_t) {
    w_.line(target(c.target) + " = " + literal(c.value) + ";");
    write_shared(c.target);
  }
  void emit(const cmd::AssignVar& c, std::size_t) {
    read_operands({&c.source});
    w_.line(target(c.target) + " = " + expr(c.source) + ";");
    write_shared(c.target);
  }
  void emit(const cmd::Cast& c, std::size_t) {
    read_operands({&c.source});
    w_.line(target(c.target) + " = (" + bit_type(c.target.width) + ")" +
            expr(c.source) + ";");
    write_shared(c.target);
  }
  void emit(const cmd::Add& c, std::size_t) {
    read_operands({&c.lhs, &c.rhs});
    w_.line(target(c.target) + " = " + expr(c.lhs) + " + " + expr(c.rhs) + ";");
    write_shared(c.target);
  }
  void emit(const cmd::Sub& c, std::size_t) {
    read_operands({&c.lhs, &c.rhs});
    w_.line(target(c.target) + " = " + expr(c.lhs) + " - " + expr(c.rhs) + ";");
    write_shared(c.target);
  }
  void emit(const cmd::Equals& c, std::size_t ordinal) {
    read_operands({&c.lhs, &c.rhs});
    if (c.hint == Hint::Table) {
      auto table = equals_table(p_, ordinal);
      w_.line(table + "_diff = " + expr(c.lhs) + " - " + expr(c.rhs) + ";");
      w_.line(table + ".apply();");
    } else {
      flag_if(c.target, expr(c.lhs) + " == " + expr(c.rhs));
    }
  }
  void emit(const cmd::Greater& c, std::size_t) {
    read_operands({&c.lhs, &c.rhs});
    flag_if(c.target, expr(c.lhs) + " > " + expr(c.rhs));
  }
  void emit(const cmd::Rand& c, std::size_t) {
    auto w = c.target.width;
    w_.line("random(" + target(c.target) + ", " + literal(w.bits(), 0) + ", " +
            literal(w.bits(), w.mask()) + ");");
    write_shared(c.target);
  }
  void emit(const cmd::RingPush& c, std::size_t) {
    const auto& ring = *p_.find_ring(c.ring);
    auto reg = ring_register(p_, c.ring);
    auto idx = reg + "_idx";
    read_operands({&c.source});
    w_.line(reg + "_head.read(" + idx + ", 0);");
    w_.line(reg + ".write(" + idx + ", " + expr(c.source) + ");");
    w_.open("if (" + idx + " == " + literal(32, ring.capacity() - 1) + ")");
    w_.line(idx + " = 32w0;");
    w_.dedent();
    w_.line("} else {");
    w_.indent();
    w_.line(idx + " = " + idx + " + 32w1;");
    w_.close();
    w_.line(reg + "_head.write(0, " + idx + ");");
  }
  void emit(const cmd::RingReadHead& c, std::size_t) {
    auto reg = ring_register(p_, c.ring);
    auto idx = reg + "_idx";
    w_.line(reg + "_head.read(" + idx + ", 0);");
    w_.line(reg + ".read(" + target(c.target) + ", " + idx + ");");
    write_shared(c.target);
  }
  void emit(const cmd::SendBack&, std::size_t) {
    w_.line("standard_metadata.egress_spec = standard_metadata.ingress_port;");
  }
  void emit(const cmd::Forward& c, std::size_t) {
    w_.line("standard_metadata.egress_spec = (bit<9>)" + literal(16, c.port) + ";");
  }

  const FlowProcessor& p_;
  Writer& w_;
};

inline void collect_tables(const Block& b,
                           std::vector<std::pair<std::size_t, const cmd::Equals*>>& out) {
  for (const auto& st : b.statements()) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Command>) {
            if (auto* eq = std::get_if<cmd::Equals>(&node);
                eq && eq->hint == Hint::Table) {
              out.emplace_back(st.ordinal, eq);
            }
          } else if constexpr (std::is_same_v<T, std::unique_ptr<IfNode>>) {
            collect_tables(*node->then_block, out);
            if (node->else_block) collect_tables(*node->else_block, out);
          } else if constexpr (std::is_same_v<T, std::unique_ptr<SwitchNode>>) {
            for (const auto& arm : node->cases) collect_tables(*arm.body, out);
          } else {
            collect_tables(*node->body, out);
          }
        },
        st.node);
  }
}

inline bool needs_init(const FlowProcessor& p) {
  for (const auto& s : p.shared_decls()) {
    if (s.initial().magnitude() != 0) return true;
  }
  return false;
}

}  // namespace codegen

// Declarations and apply statements for one processor. The apply part runs
// when any of `hit_flags` (metadata flag names) is set.
inline ProcessorFragments emit_processor_control(
    const FlowProcessor& p, const std::vector<std::string>& hit_flags,
    int indent = 4) {
  using namespace codegen;
  p.validate_complete();
  ProcessorFragments out;

  Writer d(indent, 1);
  d.line("// processor " + p.name());
  for (const auto& l : p.local_decls()) {
    d.line(bit_type(l.width()) + " " + variable(p, l.name()) + ";");
  }
  for (const auto& s : p.shared_decls()) {
    d.line(bit_type(s.width()) + " " + variable(p, s.name()) + ";");
  }
  for (const auto& r : p.ring_decls()) {
    d.line("bit<32> " + ring_register(p, r.name()) + "_idx;");
  }
  std::vector<std::pair<std::size_t, const cmd::Equals*>> tables;
  collect_tables(p.body(), tables);
  for (const auto& [ordinal, eq] : tables) {
    d.line(bit_type(width_of(eq->lhs)) + " " + equals_table(p, ordinal) + "_diff;");
  }
  if (needs_init(p)) d.line("bit<1> " + init_register(p) + "_flag;");
  for (const auto& s : p.shared_decls()) {
    d.line("register<" + bit_type(s.width()) + ">(1) " + shared_register(p, s.name()) + ";");
  }
  for (const auto& r : p.ring_decls()) {
    d.line("register<" + bit_type(r.element_width()) + ">(" +
           std::to_string(r.capacity()) + ") " + ring_register(p, r.name()) + ";");
    d.line("register<bit<32>>(1) " + ring_register(p, r.name()) + "_head;");
  }
  if (needs_init(p)) d.line("register<bit<1>>(1) " + init_register(p) + ";");
  for (const auto& [ordinal, eq] : tables) {
    auto table = equals_table(p, ordinal);
    auto target = ref_expr(p, eq->target);
    d.blank();
    d.open("action " + table + "_true()");
    d.line(target + " = 8w1;");
    d.close();
    d.open("action " + table + "_false()");
    d.line(target + " = 8w0;");
    d.close();
    d.open("table " + table);
    d.open("key =");
    d.line(table + "_diff : exact;");
    d.close();
    d.open("actions =");
    d.line(table + "_true;");
    d.line(table + "_false;");
    d.close();
    d.open("const entries =");
    d.line(literal(width_of(eq->lhs).bits(), 0) + " : " + table + "_true();");
    d.close();
    d.line("const default_action = " + table + "_false();");
    d.close();
  }
  out.decls = d.take();

  Writer a(indent, 3);
  a.line("// processor " + p.name());
  std::string guard;
  for (const auto& flag : hit_flags) {
    if (!guard.empty()) guard += " || ";
    guard += "meta." + flag + " == 1w1";
  }
  if (guard.empty()) guard = "true";
  a.open("if (" + guard + ")");
  a.line("meta.parrot_processed = 1w1;");
  if (needs_init(p)) {
    a.line(init_register(p) + ".read(" + init_register(p) + "_flag, 0);");
    a.open("if (" + init_register(p) + "_flag == 1w0)");
    for (const auto& s : p.shared_decls()) {
      a.line(shared_register(p, s.name()) + ".write(0, " + literal(s.initial()) + ");");
    }
    a.line(init_register(p) + ".write(0, 1w1);");
    a.close();
  }
  if (p.output_layout()) {
    a.line("hdr." + output_header(p) + ".setValid();");
    for (const auto& f : p.output_layout()->fields()) {
      a.line("hdr." + output_header(p) + "." + f.name() + " = " +
             literal(f.width().bits(), 0) + ";");
    }
  }
  for (const auto& l : p.local_decls()) {
    a.line(variable(p, l.name()) + " = " + literal(l.width().bits(), 0) + ";");
  }
  BodyEmitter(p, a).block(p.body());
  if (p.output_layout()) {
    a.line("hdr." + input_header(p) + ".setInvalid();");
    a.line("meta.parrot_payload_modified = 1w1;");
    auto in_size = static_cast<long long>(p.input_layout().byte_size());
    auto out_size = static_cast<long long>(p.output_layout()->byte_size());
    if (out_size > in_size) {
      a.line("meta.parrot_added_bytes = meta.parrot_added_bytes + " +
             literal(16, static_cast<std::uint64_t>(out_size - in_size)) + ";");
    } else if (out_size < in_size) {
      a.line("meta.parrot_removed_bytes = meta.parrot_removed_bytes + " +
             literal(16, static_cast<std::uint64_t>(in_size - out_size)) + ";");
    }
    if (p.truncate_payload()) {
      a.line("meta.parrot_truncate = 1w1;");
      a.line("meta.parrot_consumed_bytes = " +
             literal(16, static_cast<std::uint64_t>(in_size)) + ";");
    }
  }
  a.close();
  out.apply = a.take();
  return out;
}

// Parser states for one chain: link k tests its selector's criteria, jumps
// to its extract state on a match and to link k+1 (or accept) otherwise.
inline std::string emit_parser_chain(const ParserChain& chain, int indent = 4) {
  using namespace codegen;
  Writer w(indent, 1);
  for (std::size_t k = 0; k < chain.links.size(); ++k) {
    const FlowSelector& s = chain.links[k];
    std::string miss = k + 1 < chain.links.size()
                           ? chain_state(chain.stack, k + 1)
                           : std::string("accept");
    std::vector<std::string> keys;
    std::vector<std::string> values;
    for (const auto& c : s.criteria()) {
      if (c.on_payload()) {
        keys.push_back(peek_var(s) + "." + c.field);
        values.push_back(literal(c.value));
      } else {
        const auto* f = find_standard_field(s.stack(), c.field);
        keys.push_back("hdr." + c.field);
        values.push_back(literal(f->bits, c.value.magnitude()));
      }
    }
    auto join = [](const std::vector<std::string>& xs) {
      std::string r;
      for (const auto& x : xs) r += (r.empty() ? "" : ", ") + x;
      return r;
    };
    std::string keyset = values.size() == 1 ? values[0] : "(" + join(values) + ")";

    w.blank();
    w.line("// " + std::string(to_string(chain.stack)) + " link " +
           std::to_string(k) + ": selector " + s.name() + " -> processor " +
           s.processor().name());
    w.open("state " + chain_state(chain.stack, k));
    if (s.uses_lookahead()) {
      w.line(peek_type(s) + " " + peek_var(s) + " = packet.lookahead<" +
             peek_type(s) + ">();");
    }
    w.open("transition select(" + join(keys) + ")");
    w.line(keyset + ": " + extract_state(s) + ";");
    w.line("default: " + miss + ";");
    w.close();
    w.close();
    w.blank();
    w.open("state " + extract_state(s));
    w.line("packet.extract(hdr." + input_header(s.processor()) + ");");
    w.line("meta." + hit_flag(s) + " = 1w1;");
    w.line("transition accept;");
    w.close();
  }
  return w.take();
}

// Replaces each `#include "<fragment>"` line of the template.
inline std::string splice_template(std::string_view tmpl, const GeneratedFileSet& set) {
  std::string out;
  std::size_t pos = 0;
  auto files = set.files();
  while (pos < tmpl.size()) {
    auto end = tmpl.find('\n', pos);
    if (end == std::string_view::npos) end = tmpl.size();
    std::string_view line = tmpl.substr(pos, end - pos);
    bool replaced = false;
    for (const auto& [name, text] : files) {
      if (line == "#include \"" + name + "\"") {
        out += text;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.append(line);
      if (end < tmpl.size()) out.push_back('\n');
    }
    pos = end + 1;
  }
  return out;
}

inline GeneratedFileSet generate(const Solution& solution) {
  using namespace codegen;
  const int indent = solution.options().indent;
  constexpr std::string_view banner = "// Generated by parrot. Do not edit.\n";
  GeneratedFileSet set;

  Writer headers(indent, 0);
  std::set<std::string> peek_types;
  for (const FlowProcessor* p : solution.processors()) {
    emit_header_type(headers, input_header(*p) + "_t", p->input_layout());
    headers.blank();
    if (p->output_layout()) {
      emit_header_type(headers, output_header(*p) + "_t", *p->output_layout());
      headers.blank();
    }
  }
  for (const auto& s : solution.selectors()) {
    if (s.uses_lookahead()) {
      emit_header_type(headers, peek_type(s), *s.lookahead());
      headers.blank();
    }
  }

  Writer structs(indent, 1);
  if (!solution.selectors().empty()) {
    structs.directive("#ifdef PARROT_HEADER_MEMBERS");
    for (const FlowProcessor* p : solution.processors()) {
      structs.line(input_header(*p) + "_t " + input_header(*p) + ";");
      if (p->output_layout()) {
        structs.line(output_header(*p) + "_t " + output_header(*p) + ";");
      }
    }
    structs.directive("#endif");
    structs.directive("#ifdef PARROT_METADATA_MEMBERS");
    for (const auto& s : solution.selectors()) {
      structs.line("bit<1> " + hit_flag(s) + ";");
    }
    structs.directive("#endif");
  }

  std::string parser;
  auto chains = build_chains(solution.selectors());
  for (const auto& [stack, chain] : chains) {
    parser += "#define " + chain_macro(stack) + "\n";
  }
  for (const auto& [stack, chain] : chains) {
    parser += emit_parser_chain(chain, indent);
  }

  std::string decls;
  std::string apply;
  for (const FlowProcessor* p : solution.processors()) {
    std::vector<std::string> flags;
    for (const FlowSelector* s : solution.selectors_of(*p)) {
      flags.push_back(hit_flag(*s));
    }
    auto frag = emit_processor_control(*p, flags, indent);
    if (!decls.empty()) decls += "\n";
    decls += frag.decls;
    if (!apply.empty()) apply += "\n";
    apply += frag.apply;
  }

  auto finish = [&](std::string body) {
    while (body.ends_with("\n\n")) body.pop_back();
    return body.empty() ? body : std::string(banner) + body;
  };
  set.headers = finish(headers.take());
  set.structs = finish(structs.take());
  set.parser = finish(std::move(parser));
  set.decls = finish(std::move(decls));
  set.apply = finish(std::move(apply));
  if (solution.options().emit_combined) {
    set.combined = splice_template(template_text(solution.template_id()), set);
  }
  return set;
}

// Writes every file of `set` plus a copy of the template into `dir`. Files
// are staged in a sibling temporary directory and moved in only once all of
// them were written, so a failure leaves `dir` untouched.
inline std::vector<std::filesystem::path> write_generated(
    const GeneratedFileSet& set, TemplateId tmpl, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto files = set.files();
  files.emplace_back(template_file_name(tmpl), std::string(template_text(tmpl)));

  std::error_code ec;
  fs::path target = fs::absolute(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot resolve " + dir.string());
  fs::path parent = target.parent_path();
  static std::atomic<unsigned> counter{0};
  auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  fs::path staging = parent / (".parrot-staging-" + target.filename().string() +
                               "-" + std::to_string(stamp) + "-" +
                               std::to_string(counter++));
  auto fail = [&](const std::string& what) {
    std::error_code ignore;
    fs::remove_all(staging, ignore);
    throw Error(ErrorKind::IoError, what);
  };

  if (!fs::create_directories(staging, ec) || ec) {
    fail("cannot create staging directory next to " + target.string());
  }
  for (const auto& [name, text] : files) {
    std::ofstream f(staging / name, std::ios::binary);
    f << text;
    f.close();
    if (!f) fail("cannot write " + (staging / name).string());
  }
  fs::create_directories(target, ec);
  if (ec || !fs::is_directory(target)) fail("cannot create " + target.string());

  std::vector<fs::path> written;
  for (const auto& [name, text] : files) {
    fs::rename(staging / name, target / name, ec);
    if (ec) {
      for (const auto& w : written) fs::remove(w, ec);
      fail("cannot move " + name + " into " + target.string());
    }
    written.push_back(target / name);
  }
  fs::remove_all(staging, ec);
  return written;
}

}  // namespace parrot

#endif  // PARROT_CODEGEN_HPP
