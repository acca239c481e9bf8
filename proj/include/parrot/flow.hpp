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

#ifndef PARROT_FLOW_HPP
#define PARROT_FLOW_HPP

// Builder API for flow processors.
//
// A FlowProcessor owns a tree of Blocks. Every builder call (add, If, Else,
// EndIf, Switch, Case, EndSwitch, Atomic, EndAtomic) is checked against the
// processor's declarations before anything is mutated, so a rejected call
// leaves the tree untouched. Successful calls are numbered; the number is
// stored on the statement and echoed by codegen and simulation traces.
//
//   auto& body = proc.body();
//   body.add(cmd::Greater{proc.local("gt"), proc.local("s"), proc.in("guess")})
//       .If(proc.local("gt"))
//           .add(cmd::AssignConst{proc.out("c1"), UValue(u8, 'G')})
//       .EndIf()
//       .add(cmd::SendBack{});

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "parrot/core.hpp"
#include "parrot/error.hpp"

namespace parrot {

enum class Scope { Input, Output, Local, Shared };

inline std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::Input: return "in";
    case Scope::Output: return "out";
    case Scope::Local: return "local";
    case Scope::Shared: return "shared";
  }
  return "?";
}

struct VarRef {
  Scope scope;
  std::string name;
  UWidth width;

  friend bool operator==(const VarRef&, const VarRef&) = default;
};

inline std::string to_string(const VarRef& r) {
  return std::string(to_string(r.scope)) + "." + r.name;
}

using Operand = std::variant<VarRef, UValue>;

inline UWidth width_of(const Operand& op) {
  if (const auto* r = std::get_if<VarRef>(&op)) return r->width;
  return std::get<UValue>(op).width();
}

inline UWidth width_of(const VarRef& r) { return r.width; }

enum class Hint { IfElse, Table };

inline std::string_view to_string(Hint h) {
  return h == Hint::Table ? "TABLE" : "IF_ELSE";
}

// A local variable. Flags are u8 locals restricted to {0, 1}; only they
// may receive comparison results or act as If conditions.
class LocalDecl {
 public:
  LocalDecl(std::string name, UWidth width)
      : field_(std::move(name), width) {}

  static LocalDecl flag(std::string name) {
    LocalDecl d(std::move(name), u8);
    d.boolean_ = true;
    return d;
  }

  const std::string& name() const noexcept { return field_.name(); }
  UWidth width() const noexcept { return field_.width(); }
  bool boolean() const noexcept { return boolean_; }

  friend bool operator==(const LocalDecl&, const LocalDecl&) = default;

 private:
  FieldDecl field_;
  bool boolean_ = false;
};

namespace cmd {

struct AssignConst {
  VarRef target;
  UValue value;
  friend bool operator==(const AssignConst&, const AssignConst&) = default;
};

struct AssignVar {
  VarRef target;
  Operand source;
  friend bool operator==(const AssignVar&, const AssignVar&) = default;
};

// The only command that may change width.
struct Cast {
  VarRef target;
  Operand source;
  friend bool operator==(const Cast&, const Cast&) = default;
};

struct Add {
  VarRef target;
  Operand lhs;
  Operand rhs;
  friend bool operator==(const Add&, const Add&) = default;
};

struct Sub {
  VarRef target;
  Operand lhs;
  Operand rhs;
  friend bool operator==(const Sub&, const Sub&) = default;
};

struct Equals {
  VarRef target;
  Operand lhs;
  Operand rhs;
  Hint hint = Hint::IfElse;
  friend bool operator==(const Equals&, const Equals&) = default;
};

// target = lhs > rhs
struct Greater {
  VarRef target;
  Operand lhs;
  Operand rhs;
  friend bool operator==(const Greater&, const Greater&) = default;
};

struct Rand {
  VarRef target;
  friend bool operator==(const Rand&, const Rand&) = default;
};

struct RingPush {
  std::string ring;
  Operand source;
  friend bool operator==(const RingPush&, const RingPush&) = default;
};

// Reads the slot under the head index, i.e. the oldest element.
struct RingReadHead {
  std::string ring;
  VarRef target;
  friend bool operator==(const RingReadHead&, const RingReadHead&) = default;
};

struct SendBack {
  friend bool operator==(const SendBack&, const SendBack&) = default;
};

struct Forward {
  std::uint16_t port;
  friend bool operator==(const Forward&, const Forward&) = default;
};

}  // namespace cmd

using Command =
    std::variant<cmd::AssignConst, cmd::AssignVar, cmd::Cast, cmd::Add,
                 cmd::Sub, cmd::Equals, cmd::Greater, cmd::Rand, cmd::RingPush,
                 cmd::RingReadHead, cmd::SendBack, cmd::Forward>;

inline std::string_view command_name(const Command& c) {
  static constexpr std::string_view names[] = {
      "assign_const", "assign", "cast",     "add",            "sub",
      "equals",       "greater", "rand",    "ring_push",      "ring_read_head",
      "send_back",    "forward"};
  return names[c.index()];
}

class Block;
class SwitchBlock;
struct IfNode;
struct SwitchNode;
struct AtomicNode;

namespace detail {
struct ProcessorState;
}

enum class BlockKind { Body, Then, Else, Case, Atomic };

// One entry of a block: a plain command or a structured node. Structured
// nodes live on the heap so that blocks handed out by the builder keep
// their address while siblings are appended.
struct Statement {
  std::size_t ordinal;
  std::variant<Command, std::unique_ptr<IfNode>, std::unique_ptr<SwitchNode>,
               std::unique_ptr<AtomicNode>>
      node;
};

class Block {
 public:
  Block(const Block&) = delete;
  Block& operator=(const Block&) = delete;

  BlockKind kind() const noexcept { return kind_; }
  // The block that holds the statement which opened this one; null for the
  // processor body.
  Block* parent() const noexcept { return parent_; }
  const std::vector<Statement>& statements() const noexcept {
    return statements_;
  }
  bool closed() const noexcept { return closed_; }
  bool empty() const noexcept { return statements_.empty(); }

  Block& add(Command c);

  Block& If(const VarRef& cond);
  Block& Else();
  Block& EndIf();

  SwitchBlock& Switch(const Operand& selector);
  // Only valid on a Case block: opens the next arm of the same switch.
  Block& Case(const UValue& value);
  Block& EndSwitch();

  Block& Atomic();
  Block& EndAtomic();

 private:
  friend class FlowProcessor;
  friend class SwitchBlock;

  Block(detail::ProcessorState* owner, BlockKind kind, Block* parent)
      : owner_(owner), kind_(kind), parent_(parent) {}

  static std::unique_ptr<Block> make(detail::ProcessorState* owner,
                                     BlockKind kind, Block* parent) {
    return std::unique_ptr<Block>(new Block(owner, kind, parent));
  }

  void require_appendable() const;
  bool inside_atomic() const noexcept;

  detail::ProcessorState* owner_;
  BlockKind kind_;
  Block* parent_;
  IfNode* if_node_ = nullptr;
  SwitchNode* switch_node_ = nullptr;
  AtomicNode* atomic_node_ = nullptr;
  std::vector<Statement> statements_;
  bool closed_ = false;
  bool inner_open_ = false;
};

// Returned by Block::Switch; only accepts Case and EndSwitch.
class SwitchBlock {
 public:
  SwitchBlock(const SwitchBlock&) = delete;
  SwitchBlock& operator=(const SwitchBlock&) = delete;

  Block& Case(const UValue& value);
  Block& EndSwitch();

 private:
  friend class Block;
  friend struct SwitchNode;
  SwitchBlock(detail::ProcessorState* owner, Block* parent, SwitchNode* node)
      : owner_(owner), parent_(parent), node_(node) {}

  detail::ProcessorState* owner_;
  Block* parent_;
  SwitchNode* node_;
};

struct IfNode {
  VarRef cond;
  std::unique_ptr<Block> then_block;
  std::unique_ptr<Block> else_block;
  std::size_t else_ordinal = 0;
  std::size_t end_ordinal = 0;  // 0 while open
};

struct CaseArm {
  UValue value;
  std::size_t ordinal;
  std::unique_ptr<Block> body;
};

struct SwitchNode {
  SwitchNode(detail::ProcessorState* owner, Block* parent, Operand sel)
      : selector(std::move(sel)), handle(owner, parent, this) {}

  Operand selector;
  std::vector<CaseArm> cases;
  std::size_t end_ordinal = 0;
  SwitchBlock handle;
};

struct AtomicNode {
  std::unique_ptr<Block> body;
  std::size_t end_ordinal = 0;
};

// Everything a processor declares, in declaration order.
struct ProcessorDecl {
  std::string name;
  HeaderLayout input;
  std::optional<HeaderLayout> output = std::nullopt;
  std::vector<LocalDecl> locals = {};
  std::vector<SharedVariableDecl> shared = {};
  std::vector<RingBufferDecl> rings = {};
  // Drop the payload that follows the input layout. Only honoured when an
  // output layout replaces the input.
  bool truncate_payload = false;
};

namespace detail {

struct ProcessorState {
  explicit ProcessorState(ProcessorDecl d) : decl(std::move(d)) {}

  ProcessorDecl decl;
  std::size_t calls = 0;
  std::unique_ptr<Block> body;

  std::size_t next_site() const noexcept { return calls + 1; }

  [[noreturn]] void fail(ErrorKind kind, const std::string& msg) const {
    throw SemanticError(kind, msg, next_site());
  }

  std::size_t commit() noexcept { return ++calls; }

  const LocalDecl* find_local(std::string_view name) const {
    for (const auto& l : decl.locals)
      if (l.name() == name) return &l;
    return nullptr;
  }
  const SharedVariableDecl* find_shared(std::string_view name) const {
    for (const auto& s : decl.shared)
      if (s.name() == name) return &s;
    return nullptr;
  }
  const RingBufferDecl* find_ring(std::string_view name) const {
    for (const auto& r : decl.rings)
      if (r.name() == name) return &r;
    return nullptr;
  }

  // Declared width of `name` in `scope`; fails with the matching kind.
  UWidth resolve(Scope scope, std::string_view name) const {
    switch (scope) {
      case Scope::Input:
        if (auto* f = decl.input.find(name)) return f->width();
        break;
      case Scope::Output:
        if (!decl.output) {
          fail(ErrorKind::OutputUndeclared,
               "processor '" + decl.name + "' has no output layout, cannot use "
               "out." + std::string(name));
        }
        if (auto* f = decl.output->find(name)) return f->width();
        break;
      case Scope::Local:
        if (auto* l = find_local(name)) return l->width();
        break;
      case Scope::Shared:
        if (auto* s = find_shared(name)) return s->width();
        break;
    }
    fail(ErrorKind::UndeclaredName, std::string(to_string(scope)) + "." +
                                        std::string(name) + " is not declared");
  }

  bool is_boolean(const VarRef& r) const {
    if (r.scope != Scope::Local) return false;
    auto* l = find_local(r.name);
    return l != nullptr && l->boolean();
  }

  void check_ref(const VarRef& r) const {
    auto w = resolve(r.scope, r.name);
    if (w != r.width) {
      fail(ErrorKind::WidthMismatch, to_string(r) + " is declared " +
                                         to_string(w) + " but referenced as " +
                                         to_string(r.width));
    }
  }

  void check_target(const VarRef& r) const {
    check_ref(r);
    if (r.scope == Scope::Input) {
      fail(ErrorKind::WriteToInput,
           to_string(r) + " is an input field and cannot be written");
    }
  }

  void check_operand(const Operand& op) const {
    if (auto* r = std::get_if<VarRef>(&op)) check_ref(*r);
  }

  void check_same_width(UWidth a, UWidth b, std::string_view what) const {
    if (a != b) {
      fail(ErrorKind::WidthMismatch, std::string(what) + ": " + to_string(a) +
                                         " vs " + to_string(b));
    }
  }

  void check_not_flag(const VarRef& target, std::string_view what) const {
    if (is_boolean(target)) {
      fail(ErrorKind::NotBoolean, std::string(what) + " cannot write flag " +
                                      to_string(target));
    }
  }

  void check_flag_target(const VarRef& target, std::string_view what) const {
    if (!is_boolean(target)) {
      fail(ErrorKind::NotBoolean, std::string(what) + " needs a flag local as "
                                  "target, got " + to_string(target));
    }
  }

  bool is_flag_operand(const Operand& op) const {
    if (auto* r = std::get_if<VarRef>(&op)) return is_boolean(*r);
    return std::get<UValue>(op).magnitude() <= 1;
  }

  void check_binary(const Operand& l, const Operand& r,
                    std::string_view what) const {
    check_operand(l);
    check_operand(r);
    check_same_width(width_of(l), width_of(r), what);
  }

  const RingBufferDecl& check_ring(std::string_view name) const {
    auto* ring = find_ring(name);
    if (ring == nullptr) {
      fail(ErrorKind::UndeclaredName,
           "ring buffer '" + std::string(name) + "' is not declared");
    }
    return *ring;
  }

  void check(const Command& c) const {
    std::visit([this](const auto& x) { check_one(x); }, c);
  }

  void check_one(const cmd::AssignConst& c) const {
    check_target(c.target);
    check_same_width(c.target.width, c.value.width(), "assign_const");
    if (is_boolean(c.target) && c.value.magnitude() > 1) {
      fail(ErrorKind::NotBoolean,
           "flag " + to_string(c.target) + " only holds 0 or 1");
    }
  }
  void check_one(const cmd::AssignVar& c) const {
    check_target(c.target);
    check_operand(c.source);
    check_same_width(c.target.width, width_of(c.source), "assign");
    if (is_boolean(c.target) && !is_flag_operand(c.source)) {
      fail(ErrorKind::NotBoolean,
           "flag " + to_string(c.target) + " can only be assigned a flag");
    }
  }
  void check_one(const cmd::Cast& c) const {
    check_target(c.target);
    check_operand(c.source);
    check_not_flag(c.target, "cast");
  }
  void check_one(const cmd::Add& c) const {
    check_target(c.target);
    check_binary(c.lhs, c.rhs, "add");
    check_same_width(c.target.width, width_of(c.lhs), "add");
    check_not_flag(c.target, "add");
  }
  void check_one(const cmd::Sub& c) const {
    check_target(c.target);
    check_binary(c.lhs, c.rhs, "sub");
    check_same_width(c.target.width, width_of(c.lhs), "sub");
    check_not_flag(c.target, "sub");
  }
  void check_one(const cmd::Equals& c) const {
    check_target(c.target);
    check_flag_target(c.target, "equals");
    check_binary(c.lhs, c.rhs, "equals");
  }
  void check_one(const cmd::Greater& c) const {
    check_target(c.target);
    check_flag_target(c.target, "greater");
    check_binary(c.lhs, c.rhs, "greater");
  }
  void check_one(const cmd::Rand& c) const {
    check_target(c.target);
    check_not_flag(c.target, "rand");
  }
  void check_one(const cmd::RingPush& c) const {
    const auto& ring = check_ring(c.ring);
    check_operand(c.source);
    check_same_width(ring.element_width(), width_of(c.source), "ring_push");
  }
  void check_one(const cmd::RingReadHead& c) const {
    const auto& ring = check_ring(c.ring);
    check_target(c.target);
    check_same_width(ring.element_width(), c.target.width, "ring_read_head");
    check_not_flag(c.target, "ring_read_head");
  }
  void check_one(const cmd::SendBack&) const {}
  void check_one(const cmd::Forward&) const {}
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Block

inline void Block::require_appendable() const {
  if (closed_) {
    owner_->fail(ErrorKind::OpenScope, "block is already closed");
  }
  if (inner_open_) {
    owner_->fail(ErrorKind::OpenScope,
                 "an inner If/Switch/Atomic scope of this block is still open");
  }
}

inline bool Block::inside_atomic() const noexcept {
  for (const Block* b = this; b != nullptr; b = b->parent_) {
    if (b->kind_ == BlockKind::Atomic) return true;
  }
  return false;
}

inline Block& Block::add(Command c) {
  require_appendable();
  owner_->check(c);
  statements_.push_back(Statement{owner_->calls + 1, std::move(c)});
  owner_->commit();
  return *this;
}

inline Block& Block::If(const VarRef& cond) {
  require_appendable();
  owner_->check_ref(cond);
  if (!owner_->is_boolean(cond)) {
    owner_->fail(ErrorKind::NotBoolean,
                 "If condition " + to_string(cond) + " is not a flag");
  }
  auto node = std::make_unique<IfNode>(IfNode{cond, nullptr, nullptr});
  node->then_block = make(owner_, BlockKind::Then, this);
  node->then_block->if_node_ = node.get();
  Block& then = *node->then_block;
  statements_.reserve(statements_.size() + 1);
  statements_.push_back(Statement{owner_->calls + 1, std::move(node)});
  inner_open_ = true;
  owner_->commit();
  return then;
}

inline Block& Block::Else() {
  if (kind_ != BlockKind::Then) {
    owner_->fail(ErrorKind::OpenScope, "Else is only valid on a Then block");
  }
  if (closed_ || if_node_->else_block != nullptr || if_node_->end_ordinal != 0) {
    owner_->fail(ErrorKind::OpenScope, "this If already has an Else or is closed");
  }
  if (inner_open_) {
    owner_->fail(ErrorKind::OpenScope,
                 "an inner scope of the Then block is still open");
  }
  auto else_block = make(owner_, BlockKind::Else, parent_);
  else_block->if_node_ = if_node_;
  Block& result = *else_block;
  if_node_->else_block = std::move(else_block);
  closed_ = true;
  if_node_->else_ordinal = owner_->commit();
  return result;
}

inline Block& Block::EndIf() {
  if (kind_ != BlockKind::Then && kind_ != BlockKind::Else) {
    owner_->fail(ErrorKind::OpenScope, "EndIf outside of an If scope");
  }
  if (closed_ || if_node_->end_ordinal != 0) {
    owner_->fail(ErrorKind::OpenScope, "this If scope is already closed");
  }
  if (inner_open_) {
    owner_->fail(ErrorKind::OpenScope, "an inner scope is still open");
  }
  closed_ = true;
  parent_->inner_open_ = false;
  if_node_->end_ordinal = owner_->commit();
  return *parent_;
}

inline SwitchBlock& Block::Switch(const Operand& selector) {
  require_appendable();
  owner_->check_operand(selector);
  auto node = std::make_unique<SwitchNode>(owner_, this, selector);
  SwitchBlock& handle = node->handle;
  statements_.reserve(statements_.size() + 1);
  statements_.push_back(Statement{owner_->calls + 1, std::move(node)});
  inner_open_ = true;
  owner_->commit();
  return handle;
}

inline Block& Block::Case(const UValue& value) {
  if (kind_ != BlockKind::Case) {
    owner_->fail(ErrorKind::OpenScope, "Case is only valid inside a Switch");
  }
  if (closed_) {
    owner_->fail(ErrorKind::OpenScope, "this case arm is already closed");
  }
  if (inner_open_) {
    owner_->fail(ErrorKind::OpenScope, "an inner scope is still open");
  }
  return switch_node_->handle.Case(value);
}

inline Block& Block::EndSwitch() {
  if (kind_ != BlockKind::Case) {
    owner_->fail(ErrorKind::OpenScope, "EndSwitch outside of a Switch");
  }
  if (closed_) {
    owner_->fail(ErrorKind::OpenScope, "this case arm is already closed");
  }
  if (inner_open_) {
    owner_->fail(ErrorKind::OpenScope, "an inner scope is still open");
  }
  return switch_node_->handle.EndSwitch();
}

inline Block& Block::Atomic() {
  require_appendable();
  if (inside_atomic()) {
    owner_->fail(ErrorKind::AtomicNesting,
                 "Atomic blocks cannot be nested inside Atomic blocks");
  }
  auto node = std::make_unique<AtomicNode>();
  node->body = make(owner_, BlockKind::Atomic, this);
  node->body->atomic_node_ = node.get();
  Block& body = *node->body;
  statements_.reserve(statements_.size() + 1);
  statements_.push_back(Statement{owner_->calls + 1, std::move(node)});
  inner_open_ = true;
  owner_->commit();
  return body;
}

inline Block& Block::EndAtomic() {
  if (kind_ != BlockKind::Atomic) {
    owner_->fail(ErrorKind::OpenScope, "EndAtomic outside of an Atomic block");
  }
  if (closed_) {
    owner_->fail(ErrorKind::OpenScope, "this Atomic block is already closed");
  }
  if (inner_open_) {
    owner_->fail(ErrorKind::OpenScope, "an inner scope is still open");
  }
  closed_ = true;
  parent_->inner_open_ = false;
  atomic_node_->end_ordinal = owner_->commit();
  return *parent_;
}

inline Block& SwitchBlock::Case(const UValue& value) {
  if (node_->end_ordinal != 0) {
    owner_->fail(ErrorKind::OpenScope, "this Switch is already closed");
  }
  if (!node_->cases.empty()) {
    if (node_->cases.back().body->inner_open_) {
      owner_->fail(ErrorKind::OpenScope, "an inner scope is still open");
    }
  }
  owner_->check_same_width(width_of(node_->selector), value.width(), "case");
  for (const auto& arm : node_->cases) {
    if (arm.value == value) {
      owner_->fail(ErrorKind::DuplicateName,
                   "duplicate case value " + to_string(value));
    }
  }
  auto body = Block::make(owner_, BlockKind::Case, parent_);
  body->switch_node_ = node_;
  Block& result = *body;
  if (!node_->cases.empty()) node_->cases.back().body->closed_ = true;
  node_->cases.push_back(CaseArm{value, owner_->calls + 1, std::move(body)});
  owner_->commit();
  return result;
}

inline Block& SwitchBlock::EndSwitch() {
  if (node_->end_ordinal != 0) {
    owner_->fail(ErrorKind::OpenScope, "this Switch is already closed");
  }
  if (!node_->cases.empty() && node_->cases.back().body->inner_open_) {
    owner_->fail(ErrorKind::OpenScope, "an inner scope is still open");
  }
  if (!node_->cases.empty()) node_->cases.back().body->closed_ = true;
  parent_->inner_open_ = false;
  node_->end_ordinal = owner_->commit();
  return *parent_;
}

// ---------------------------------------------------------------------------
// FlowProcessor

class FlowProcessor {
 public:
  explicit FlowProcessor(ProcessorDecl decl)
      : state_(std::make_unique<detail::ProcessorState>(std::move(decl))) {
    const auto& d = state_->decl;
    auto fail = [](ErrorKind kind, const std::string& msg) {
      throw SemanticError(kind, msg, 0);
    };
    if (!is_identifier(d.name)) {
      fail(ErrorKind::InvalidIdentifier,
           "processor name '" + d.name + "' is not an identifier");
    }
    if (is_reserved(d.name)) {
      fail(ErrorKind::ReservedName, "processor name '" + d.name + "' is reserved");
    }
    std::set<std::string_view> names;
    auto claim = [&](const std::string& name, std::string_view what) {
      if (!names.insert(name).second) {
        fail(ErrorKind::DuplicateName, std::string(what) + " '" + name +
                                           "' collides with another name in "
                                           "processor '" + d.name + "'");
      }
    };
    for (const auto& f : d.input.fields()) claim(f.name(), "input field");
    if (d.output) {
      for (const auto& f : d.output->fields()) claim(f.name(), "output field");
    }
    for (const auto& l : d.locals) claim(l.name(), "local");
    for (const auto& s : d.shared) claim(s.name(), "shared variable");
    for (const auto& r : d.rings) claim(r.name(), "ring buffer");
    state_->body = Block::make(state_.get(), BlockKind::Body, nullptr);
  }

  FlowProcessor(FlowProcessor&&) noexcept = default;
  FlowProcessor& operator=(FlowProcessor&&) noexcept = default;

  const std::string& name() const noexcept { return state_->decl.name; }
  const HeaderLayout& input_layout() const noexcept { return state_->decl.input; }
  const std::optional<HeaderLayout>& output_layout() const noexcept {
    return state_->decl.output;
  }
  const std::vector<LocalDecl>& local_decls() const noexcept {
    return state_->decl.locals;
  }
  const std::vector<SharedVariableDecl>& shared_decls() const noexcept {
    return state_->decl.shared;
  }
  const std::vector<RingBufferDecl>& ring_decls() const noexcept {
    return state_->decl.rings;
  }
  bool truncate_payload() const noexcept { return state_->decl.truncate_payload; }
  bool has_output() const noexcept { return state_->decl.output.has_value(); }

  Block& body() noexcept { return *state_->body; }
  const Block& body() const noexcept { return *state_->body; }

  // Number of successful builder calls so far.
  std::size_t call_count() const noexcept { return state_->calls; }

  VarRef ref(Scope scope, std::string_view name) const {
    return VarRef{scope, std::string(name), state_->resolve(scope, name)};
  }
  VarRef in(std::string_view name) const { return ref(Scope::Input, name); }
  VarRef out(std::string_view name) const { return ref(Scope::Output, name); }
  VarRef local(std::string_view name) const { return ref(Scope::Local, name); }
  VarRef shared(std::string_view name) const { return ref(Scope::Shared, name); }

  const LocalDecl* find_local(std::string_view name) const {
    return state_->find_local(name);
  }
  const SharedVariableDecl* find_shared(std::string_view name) const {
    return state_->find_shared(name);
  }
  const RingBufferDecl* find_ring(std::string_view name) const {
    return state_->find_ring(name);
  }
  bool is_boolean(const VarRef& r) const { return state_->is_boolean(r); }

  bool complete() const noexcept { return !state_->body->inner_open_; }

  // Fails with OpenScope when an If/Switch/Atomic was never closed. The
  // error site is the call that opened the outermost unclosed scope.
  void validate_complete() const {
    const Block& body = *state_->body;
    if (!body.inner_open_) return;
    throw SemanticError(ErrorKind::OpenScope,
                        "processor '" + name() + "' has an unclosed scope",
                        body.statements().back().ordinal);
  }

 private:
  std::unique_ptr<detail::ProcessorState> state_;
};

}  // namespace parrot

#endif  // PARROT_FLOW_HPP
