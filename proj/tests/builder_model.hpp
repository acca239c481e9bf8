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

#ifndef PARROT_TESTS_BUILDER_MODEL_HPP
#define PARROT_TESTS_BUILDER_MODEL_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "parrot/flow.hpp"
#include "parrot/program_doc.hpp"

namespace builder_model {

using namespace parrot;

inline FlowProcessor make_processor() {
  return FlowProcessor(ProcessorDecl{
      .name = "p",
      .input = HeaderLayout("p_in_l", {FieldDecl("a", u8), FieldDecl("b", u16)}),
      .output = HeaderLayout("p_out_l", {FieldDecl("o", u8), FieldDecl("w", u16)}),
      .locals = {LocalDecl("x", u8), LocalDecl("y", u16), LocalDecl::flag("f"),
                 LocalDecl::flag("g")},
      .shared = {SharedVariableDecl("s", u8, UValue(u8, 3))},
      .rings = {RingBufferDecl("r", u8, 3)},
  });
}

inline std::string ast(const FlowProcessor& p) { return processor_to_json(p, true).dump(); }

// Randomized builder sequences.
//
// A model keeps the stack of open scopes and the block each one must return
// to. Between valid calls, ill-formed calls are injected; each must raise
// its documented kind and leave the serialized AST and call count alone.


struct Frame {
  enum Kind { Then, Else, Case, Atomic } kind;
  Block* block;
  Block* opener;
  std::uint64_t next_case = 0;
};

class Model {
 public:
  explicit Model(std::uint64_t seed) : rng_(seed), p_(make_processor()) {}

  void run(int steps) {
    for (int i = 0; i < steps; ++i) {
      if (rng_() % 3 == 0) inject();
      step();
    }
    while (!stack_.empty()) close_top();
    check(p_.complete(), "processor left incomplete");
    check(p_.call_count() == calls_, "call count drifted");
    check_ordinals(p_.body(), 0);
  }

  int injected() const { return injected_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }

  static std::optional<ErrorKind> raised(const std::function<void()>& f) {
    try {
      f();
    } catch (const SemanticError& e) {
      return e.kind();
    } catch (const Error&) {
      return std::nullopt;
    }
    return std::nullopt;
  }

  Block& top() { return stack_.empty() ? p_.body() : *stack_.back().block; }
  bool in_atomic() const {
    for (const auto& f : stack_) {
      if (f.kind == Frame::Atomic) return true;
    }
    return false;
  }

  Command valid_command() {
    switch (rng_() % 9) {
      case 0: return cmd::AssignConst{p_.out("o"), UValue(u8, rng_() % 256)};
      case 1: return cmd::AssignVar{p_.local("y"), p_.in("b")};
      case 2: return cmd::Add{p_.local("x"), p_.in("a"), UValue(u8, rng_() % 256)};
      case 3: return cmd::Sub{p_.out("w"), p_.local("y"), p_.in("b")};
      case 4: return cmd::Equals{p_.local("f"), p_.in("a"), p_.local("x"),
                                 rng_() % 2 ? Hint::Table : Hint::IfElse};
      case 5: return cmd::Greater{p_.local("g"), p_.shared("s"), p_.in("a")};
      case 6: return cmd::Cast{p_.local("x"), p_.in("b")};
      case 7: return cmd::RingPush{"r", p_.local("x")};
      default: return cmd::RingReadHead{"r", p_.out("o")};
    }
  }

  void step() {
    const auto r = rng_() % 10;
    if (r < 4 || (r >= 8 && stack_.empty())) {
      top().add(valid_command());
      ++calls_;
    } else if (r == 4) {
      Block& opener = top();
      Block& then = opener.If(p_.local(rng_() % 2 ? "f" : "g"));
      ++calls_;
      check(then.parent() == &opener, "Then block has the wrong parent");
      stack_.push_back({Frame::Then, &then, &opener});
    } else if (r == 5) {
      Block& opener = top();
      SwitchBlock& sw = opener.Switch(p_.local("x"));
      ++calls_;
      if (rng_() % 4 == 0) {
        check(&sw.EndSwitch() == &opener, "EndSwitch returned the wrong block");
        ++calls_;
        return;
      }
      Block& arm = sw.Case(UValue(u8, 0));
      ++calls_;
      stack_.push_back({Frame::Case, &arm, &opener, 1});
    } else if (r == 6 && !in_atomic()) {
      Block& opener = top();
      Block& body = opener.Atomic();
      ++calls_;
      stack_.push_back({Frame::Atomic, &body, &opener});
    } else if (!stack_.empty()) {
      close_top();
    }
  }

  void close_top() {
    Frame& f = stack_.back();
    switch (f.kind) {
      case Frame::Then:
        if (rng_() % 2) {
          Block& e = f.block->Else();
          ++calls_;
          closed_.push_back(f.block);
          check(e.kind() == BlockKind::Else, "Else returned a non-Else block");
          f = {Frame::Else, &e, f.opener};
          return;
        }
        [[fallthrough]];
      case Frame::Else: {
        Block& back = f.block->EndIf();
        ++calls_;
        check(&back == f.opener, "scope closed to the wrong block");
        break;
      }
      case Frame::Case:
        if (rng_() % 2 && f.next_case < 256) {
          Block& arm = f.block->Case(UValue(u8, f.next_case++));
          ++calls_;
          closed_.push_back(f.block);
          f.block = &arm;
          return;
        } else {
          Block& back = f.block->EndSwitch();
          ++calls_;
          check(&back == f.opener, "scope closed to the wrong block");
        }
        break;
      case Frame::Atomic: {
        Block& back = f.block->EndAtomic();
        ++calls_;
        check(&back == f.opener, "scope closed to the wrong block");
        break;
      }
    }
    closed_.push_back(f.block);
    stack_.pop_back();
  }

  // One ill-formed call chosen among those applicable right now.
  void inject() {
    std::vector<std::pair<ErrorKind, std::function<void()>>> menu;
    Block& b = top();
    menu.emplace_back(ErrorKind::WidthMismatch,
                      [&] { b.add(cmd::AssignVar{p_.local("x"), p_.local("y")}); });
    menu.emplace_back(ErrorKind::WriteToInput,
                      [&] { b.add(cmd::AssignConst{p_.in("a"), UValue(u8, 1)}); });
    menu.emplace_back(ErrorKind::NotBoolean, [&] { b.If(p_.local("x")); });
    menu.emplace_back(ErrorKind::NotBoolean,
                      [&] { b.add(cmd::Equals{p_.local("y"), p_.in("b"), p_.local("y")}); });
    menu.emplace_back(ErrorKind::UndeclaredName,
                      [&] { b.add(cmd::RingReadHead{"missing", p_.local("x")}); });
    if (!stack_.empty()) {
      Block* opener = stack_.back().opener;
      menu.emplace_back(ErrorKind::OpenScope, [=, this] { opener->add(valid_command()); });
      menu.emplace_back(ErrorKind::OpenScope, [=] { opener->Atomic(); });
    }
    if (in_atomic()) menu.emplace_back(ErrorKind::AtomicNesting, [&] { b.Atomic(); });
    if (stack_.empty() || stack_.back().kind == Frame::Atomic) {
      menu.emplace_back(ErrorKind::OpenScope, [&] { b.EndIf(); });
      menu.emplace_back(ErrorKind::OpenScope, [&] { b.Else(); });
    }
    if (stack_.empty() || stack_.back().kind != Frame::Atomic) {
      menu.emplace_back(ErrorKind::OpenScope, [&] { b.EndAtomic(); });
    }
    if (!stack_.empty() && stack_.back().kind == Frame::Else) {
      menu.emplace_back(ErrorKind::OpenScope, [&] { b.Else(); });
    }
    if (!stack_.empty() && stack_.back().kind == Frame::Case) {
      menu.emplace_back(ErrorKind::DuplicateName, [&] { b.Case(UValue(u8, 0)); });
      menu.emplace_back(ErrorKind::WidthMismatch, [&] { b.Case(UValue(u16, 300)); });
    }
    if (!closed_.empty()) {
      Block* c = closed_[rng_() % closed_.size()];
      menu.emplace_back(ErrorKind::OpenScope, [=, this] { c->add(valid_command()); });
    }

    const auto before = ast(p_);
    auto& [want, call] = menu[rng_() % menu.size()];
    auto got = raised(call);
    check(got.has_value() && *got == want,
          "expected " + std::string(to_string(want)) + ", got " +
              (got ? std::string(to_string(*got)) : std::string("no SemanticError")));
    check(ast(p_) == before, "AST changed after a failed call");
    check(p_.call_count() == calls_, "failed call consumed an ordinal");
    ++injected_;
  }

  // Ordinals increase along the pre-order walk.
  std::size_t check_ordinals(const Block& b, std::size_t last) {
    for (const auto& st : b.statements()) {
      check(st.ordinal > last, "ordinals not increasing");
      last = st.ordinal;
      if (auto* n = std::get_if<std::unique_ptr<IfNode>>(&st.node)) {
        last = check_ordinals(*(*n)->then_block, last);
        if ((*n)->else_block) {
          check((*n)->else_ordinal > last, "ordinals not increasing");
          last = check_ordinals(*(*n)->else_block, (*n)->else_ordinal);
        }
        check((*n)->end_ordinal > last, "ordinals not increasing");
        last = (*n)->end_ordinal;
      } else if (auto* s = std::get_if<std::unique_ptr<SwitchNode>>(&st.node)) {
        for (const auto& arm : (*s)->cases) {
          check(arm.ordinal > last, "ordinals not increasing");
          last = check_ordinals(*arm.body, arm.ordinal);
        }
        check((*s)->end_ordinal > last, "ordinals not increasing");
        last = (*s)->end_ordinal;
      } else if (auto* a = std::get_if<std::unique_ptr<AtomicNode>>(&st.node)) {
        last = check_ordinals(*(*a)->body, last);
        check((*a)->end_ordinal > last, "ordinals not increasing");
        last = (*a)->end_ordinal;
      }
    }
    return last;
  }

  std::mt19937_64 rng_;
  FlowProcessor p_;
  std::vector<Frame> stack_;
  std::vector<Block*> closed_;
  std::size_t calls_ = 0;
  int injected_ = 0;
  std::vector<std::string> failures_;
};

}  // namespace builder_model

#endif  // PARROT_TESTS_BUILDER_MODEL_HPP
