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


#include <gtest/gtest.h>

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "builder_model.hpp"
#include "parrot/flow.hpp"
#include "parrot/program_doc.hpp"

using namespace parrot;

namespace {

using builder_model::make_processor;

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const SemanticError& e) {
    return e.kind();
  } catch (const Error& e) {
    ADD_FAILURE() << "not a SemanticError: " << e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::IoError;
}

}  // namespace

TEST(Builder, ScopesReturnTheEnclosingBlock) {
  auto p = make_processor();
  Block& body = p.body();
  Block& then = body.If(p.local("f"));
  EXPECT_EQ(then.kind(), BlockKind::Then);
  EXPECT_EQ(then.parent(), &body);
  Block& els = then.Else();
  EXPECT_EQ(els.kind(), BlockKind::Else);
  EXPECT_EQ(&els.EndIf(), &body);

  Block& arm = body.Switch(p.local("x")).Case(UValue(u8, 1));
  Block& arm2 = arm.Case(UValue(u8, 2));
  EXPECT_NE(&arm, &arm2);
  EXPECT_EQ(&arm2.EndSwitch(), &body);

  Block& at = body.Atomic();
  EXPECT_EQ(&at.EndAtomic(), &body);
  EXPECT_EQ(p.call_count(), 9u);
  EXPECT_NO_THROW(p.validate_complete());
}

TEST(Builder, NestedScopesUnwindInOrder) {
  auto p = make_processor();
  Block& body = p.body();
  Block& at = body.Atomic();
  Block& then = at.If(p.local("g"));
  Block& arm = then.Switch(p.in("a")).Case(UValue(u8, 7));
  arm.add(cmd::AssignConst{p.out("o"), UValue(u8, 7)});
  EXPECT_EQ(&arm.EndSwitch(), &then);
  EXPECT_EQ(&then.EndIf(), &at);
  EXPECT_EQ(&at.EndAtomic(), &body);
}

TEST(Builder, ErrorSiteIsTheFailingCall) {
  auto p = make_processor();
  p.body().add(cmd::AssignConst{p.out("o"), UValue(u8, 1)});
  p.body().add(cmd::AssignConst{p.out("o"), UValue(u8, 2)});
  try {
    p.body().add(cmd::AssignVar{p.local("x"), p.local("y")});
    FAIL();
  } catch (const SemanticError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WidthMismatch);
    EXPECT_EQ(e.site(), 3u);
    EXPECT_NE(std::string(e.what()).find("builder call #3"), std::string::npos);
  }
  // a failed call consumes no ordinal
  p.body().add(cmd::SendBack{});
  EXPECT_EQ(p.body().statements().back().ordinal, 3u);
}

TEST(Builder, DocumentedKinds) {
  auto p = make_processor();
  Block& b = p.body();
  EXPECT_EQ(kind_of([&] { b.add(cmd::AssignConst{p.in("a"), UValue(u8, 1)}); }),
            ErrorKind::WriteToInput);
  EXPECT_EQ(kind_of([&] { b.add(cmd::AssignConst{p.local("x"), UValue(u16, 1)}); }),
            ErrorKind::WidthMismatch);
  EXPECT_EQ(kind_of([&] { b.add(cmd::Add{p.local("x"), p.local("x"), p.in("b")}); }),
            ErrorKind::WidthMismatch);
  EXPECT_EQ(kind_of([&] { b.add(cmd::Greater{p.local("x"), p.in("a"), p.local("x")}); }),
            ErrorKind::NotBoolean);
  EXPECT_EQ(kind_of([&] { b.add(cmd::AssignConst{p.local("f"), UValue(u8, 2)}); }),
            ErrorKind::NotBoolean);
  EXPECT_EQ(kind_of([&] { b.add(cmd::Rand{p.local("f")}); }), ErrorKind::NotBoolean);
  EXPECT_EQ(kind_of([&] { b.If(p.local("x")); }), ErrorKind::NotBoolean);
  EXPECT_EQ(kind_of([&] { b.add(cmd::RingPush{"nope", p.in("a")}); }),
            ErrorKind::UndeclaredName);
  EXPECT_EQ(kind_of([&] { b.add(cmd::RingPush{"r", p.in("b")}); }), ErrorKind::WidthMismatch);
  EXPECT_EQ(kind_of([&] { (void)p.local("nope"); }), ErrorKind::UndeclaredName);
  EXPECT_EQ(kind_of([&] { b.EndIf(); }), ErrorKind::OpenScope);
  EXPECT_EQ(kind_of([&] { b.EndAtomic(); }), ErrorKind::OpenScope);
  EXPECT_EQ(kind_of([&] { b.Else(); }), ErrorKind::OpenScope);
  EXPECT_EQ(kind_of([&] { b.Case(UValue(u8, 1)); }), ErrorKind::OpenScope);
  EXPECT_EQ(kind_of([&] { b.EndSwitch(); }), ErrorKind::OpenScope);
  // forged reference with a wrong width
  EXPECT_EQ(kind_of([&] { b.add(cmd::AssignConst{VarRef{Scope::Local, "x", u16}, UValue(u16, 1)}); }),
            ErrorKind::WidthMismatch);
  EXPECT_EQ(p.call_count(), 0u);
  EXPECT_TRUE(b.empty());
}

TEST(Builder, OutputUndeclared) {
  FlowProcessor p(ProcessorDecl{.name = "q", .input = HeaderLayout("q_l", {FieldDecl("a", u8)})});
  EXPECT_EQ(kind_of([&] { (void)p.out("a"); }), ErrorKind::OutputUndeclared);
  EXPECT_EQ(kind_of([&] { p.body().add(cmd::AssignConst{VarRef{Scope::Output, "a", u8},
                                                         UValue(u8, 0)}); }),
            ErrorKind::OutputUndeclared);
}

TEST(Builder, AtomicCannotNest) {
  auto p = make_processor();
  Block& at = p.body().Atomic();
  EXPECT_EQ(kind_of([&] { at.Atomic(); }), ErrorKind::AtomicNesting);
  Block& then = at.If(p.local("f"));
  EXPECT_EQ(kind_of([&] { then.Atomic(); }), ErrorKind::AtomicNesting);
}

TEST(Builder, SwitchCaseRules) {
  auto p = make_processor();
  SwitchBlock& sw = p.body().Switch(p.local("y"));
  EXPECT_EQ(kind_of([&] { sw.Case(UValue(u8, 1)); }), ErrorKind::WidthMismatch);
  Block& a = sw.Case(UValue(u16, 1));
  EXPECT_EQ(kind_of([&] { a.Case(UValue(u16, 1)); }), ErrorKind::DuplicateName);
  Block& b = a.Case(UValue(u16, 2));
  // the first arm was closed by the second
  EXPECT_EQ(kind_of([&] { a.add(cmd::SendBack{}); }), ErrorKind::OpenScope);
  b.EndSwitch();
  EXPECT_EQ(kind_of([&] { sw.Case(UValue(u16, 3)); }), ErrorKind::OpenScope);
  EXPECT_EQ(kind_of([&] { b.add(cmd::SendBack{}); }), ErrorKind::OpenScope);
}

TEST(Builder, ParentIsBlockedWhileInnerScopeOpen) {
  auto p = make_processor();
  Block& then = p.body().If(p.local("f"));
  EXPECT_EQ(kind_of([&] { p.body().add(cmd::SendBack{}); }), ErrorKind::OpenScope);
  EXPECT_FALSE(p.complete());
  try {
    p.validate_complete();
    FAIL();
  } catch (const SemanticError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OpenScope);
    EXPECT_EQ(e.site(), 1u);
  }
  then.EndIf();
  EXPECT_TRUE(p.complete());
  EXPECT_EQ(kind_of([&] { then.add(cmd::SendBack{}); }), ErrorKind::OpenScope);
  EXPECT_EQ(kind_of([&] { then.EndIf(); }), ErrorKind::OpenScope);
}

TEST(Processor, DeclarationChecks) {
  auto decl = [](std::string name, std::vector<LocalDecl> locals) {
    return ProcessorDecl{.name = std::move(name),
                         .input = HeaderLayout("l", {FieldDecl("a", u8)}),
                         .locals = std::move(locals)};
  };
  try {
    FlowProcessor(decl("p", {LocalDecl("a", u8)}));
    FAIL();
  } catch (const SemanticError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateName);
    EXPECT_EQ(e.site(), 0u);
  }
  EXPECT_EQ(kind_of([&] { FlowProcessor(decl("control", {})); }), ErrorKind::ReservedName);
  EXPECT_EQ(kind_of([&] { FlowProcessor(decl("9p", {})); }), ErrorKind::InvalidIdentifier);
}

TEST(BuilderProperty, RandomSequences) {
  int injected = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    builder_model::Model m(seed);
    m.run(60);
    injected += m.injected();
    ASSERT_TRUE(m.failures().empty()) << "seed " << seed << ": " << m.failures().front();
  }
  EXPECT_GT(injected, 1000);
}
