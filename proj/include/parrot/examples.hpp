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


#ifndef PARROT_EXAMPLES_HPP
#define PARROT_EXAMPLES_HPP

// The two built-in programs, assembled with the builder API.
//
// guess_game answers a one-byte guess with "LT", "GT" or "OK" and draws a
// new secret on a win. insert_agg appends the sum of two u32 values to the
// payload and keeps a packet counter plus a short history of sums.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parrot/core.hpp"
#include "parrot/flow.hpp"
#include "parrot/selector.hpp"
#include "parrot/solution.hpp"

namespace parrot::examples {

inline constexpr std::uint16_t kGuessPort = 5555;
inline constexpr std::uint16_t kAggPort = 7777;
inline constexpr std::uint8_t kDefaultSecret = 42;

inline std::shared_ptr<FlowProcessor> guess_game_processor(Hint hint = Hint::IfElse,
                                                           std::uint8_t secret = kDefaultSecret) {
  auto p = std::make_shared<FlowProcessor>(ProcessorDecl{
      .name = "guess",
      .input = HeaderLayout("guess_in", {FieldDecl("guess", u8)}),
      .output = HeaderLayout("guess_out", {FieldDecl("c1", u8), FieldDecl("c2", u8)}),
      .locals = {LocalDecl("s", u8), LocalDecl::flag("gt"), LocalDecl::flag("lt"),
                 LocalDecl::flag("win")},
      .shared = {SharedVariableDecl("secret", u8, UValue(u8, secret))},
  });

  auto c = [](std::uint64_t v) { return UValue(u8, v); };
  const VarRef c1 = p->out("c1"), c2 = p->out("c2");
  const VarRef s = p->local("s"), guess = p->in("guess");
  const VarRef gt = p->local("gt"), lt = p->local("lt"), win = p->local("win");

  Block& b = p->body();
  b.add(cmd::AssignConst{c1, c('O')}).add(cmd::AssignConst{c2, c('K')});
  b.add(cmd::AssignVar{s, p->shared("secret")});
  // secret above the guess
  b.add(cmd::Greater{gt, s, guess});
  b.If(gt).add(cmd::AssignConst{c1, c('G')}).add(cmd::AssignConst{c2, c('T')}).EndIf();
  b.add(cmd::Greater{lt, guess, s});
  b.If(lt).add(cmd::AssignConst{c1, c('L')}).add(cmd::AssignConst{c2, c('T')}).EndIf();
  b.add(cmd::Equals{win, guess, s, hint});
  b.If(win).add(cmd::Rand{p->shared("secret")}).EndIf();
  b.add(cmd::SendBack{});
  return p;
}

inline Solution guess_game(Hint hint = Hint::IfElse, std::uint8_t secret = kDefaultSecret) {
  std::vector<FlowSelector> sel;
  sel.emplace_back("guess_sel", ProtocolStack::Ipv4Udp,
                   std::vector<Criterion>{{"udp.dstPort", UValue(u16, kGuessPort)}},
                   std::nullopt, guess_game_processor(hint, secret));
  return Solution(std::move(sel));
}

inline std::shared_ptr<FlowProcessor> insert_agg_processor() {
  auto p = std::make_shared<FlowProcessor>(ProcessorDecl{
      .name = "agg",
      .input = HeaderLayout("agg_in", {FieldDecl("value_a", u32), FieldDecl("value_b", u32)}),
      .output = HeaderLayout("agg_out", {FieldDecl("out_a", u32), FieldDecl("out_b", u32),
                                         FieldDecl("sum", u32)}),
      .shared = {SharedVariableDecl("packets", u32)},
      .rings = {RingBufferDecl("history", u32, 4)},
  });

  const VarRef a = p->in("value_a"), bv = p->in("value_b");
  const VarRef count = p->shared("packets");
  Block& b = p->body();
  b.add(cmd::AssignVar{p->out("out_a"), a}).add(cmd::AssignVar{p->out("out_b"), bv});
  b.add(cmd::Add{p->out("sum"), a, bv});
  b.Atomic().add(cmd::Add{count, count, UValue(u32, 1)}).EndAtomic();
  b.add(cmd::RingPush{"history", p->out("sum")});
  b.add(cmd::Forward{2});
  return p;
}

inline Solution insert_agg() {
  std::vector<FlowSelector> sel;
  sel.emplace_back("agg_sel", ProtocolStack::Ipv4Udp,
                   std::vector<Criterion>{{"udp.dstPort", UValue(u16, kAggPort)}},
                   std::nullopt, insert_agg_processor());
  return Solution(std::move(sel));
}

inline const std::vector<std::string_view>& names() {
  static const std::vector<std::string_view> n = {"guess_game", "insert_agg"};
  return n;
}

inline std::optional<Solution> by_name(std::string_view name) {
  if (name == "guess_game") return guess_game();
  if (name == "insert_agg") return insert_agg();
  return std::nullopt;
}

}  // namespace parrot::examples

#endif  // PARROT_EXAMPLES_HPP
