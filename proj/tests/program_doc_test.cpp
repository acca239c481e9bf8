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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "parrot/codegen.hpp"
#include "parrot/examples.hpp"
#include "parrot/program_doc.hpp"

using namespace parrot;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json guess_doc() { return export_program(examples::guess_game()); }

LoadError load_error(const Json& j) {
  try {
    load_program(j);
  } catch (const LoadError& e) {
    return e;
  }
  ADD_FAILURE() << "document was accepted";
  return LoadError(ErrorKind::IoError, "", "");
}

LoadError trace_error(const Json& j) {
  try {
    load_trace(j);
  } catch (const LoadError& e) {
    return e;
  }
  ADD_FAILURE() << "trace was accepted";
  return LoadError(ErrorKind::IoError, "", "");
}

}  // namespace

TEST(Export, ShippedAssetsMatchBuilderPrograms) {
  for (std::string name : {"guess_game", "insert_agg"}) {
    auto expected = export_program(*examples::by_name(name)).dump(2) + "\n";
    EXPECT_EQ(slurp(fs::path(PARROT_ASSETS) / "examples" / (name + ".json")), expected) << name;
  }
}

TEST(Export, RoundTripIsStable) {
  for (auto make : {+[] { return examples::guess_game(Hint::Table); },
                    +[] { return examples::insert_agg(); }}) {
    auto first = export_program(make());
    auto again = export_program(load_program(first));
    EXPECT_EQ(first, again);
  }
}

TEST(Export, OrdinalsOptional) {
  auto s = examples::guess_game();
  auto plain = processor_to_json(s.selectors()[0].processor());
  auto with = processor_to_json(s.selectors()[0].processor(), true);
  EXPECT_FALSE(plain["body"][0].contains("ordinal"));
  EXPECT_EQ(with["body"][0]["ordinal"], 1);
}

TEST(Load, ReplaysThroughTheBuilder) {
  auto s = load_program(guess_doc());
  ASSERT_EQ(s.selectors().size(), 1u);
  const auto& p = s.selectors()[0].processor();
  EXPECT_EQ(p.name(), "guess");
  EXPECT_EQ(p.call_count(), examples::guess_game().selectors()[0].processor().call_count());
  EXPECT_EQ(generate(s), generate(examples::guess_game()));
}

TEST(Load, SemanticErrorCarriesJsonPath) {
  auto j = guess_doc();
  j["processors"][0]["body"][3]["lhs"] = "in.guess";
  j["processors"][0]["body"][3]["target"] = "local.s";
  auto e = load_error(j);
  EXPECT_EQ(e.path(), "processors[0].body[3]");
  EXPECT_EQ(e.kind(), ErrorKind::NotBoolean);
  EXPECT_TRUE(e.semantic());

  j = guess_doc();
  j["processors"][0]["body"][3] = {{"op", "assign"}, {"target", "local.s"}, {"source", {{"u16", 5}}}};
  e = load_error(j);
  EXPECT_EQ(e.path(), "processors[0].body[3]");
  EXPECT_EQ(e.kind(), ErrorKind::WidthMismatch);
  EXPECT_NE(std::string(e.what()).find("processors[0].body[3]: WidthMismatch"), std::string::npos);
}

TEST(Load, NestedPaths) {
  auto j = guess_doc();
  j["processors"][0]["body"][4]["then"][1]["target"] = "in.guess";
  auto e = load_error(j);
  EXPECT_EQ(e.path(), "processors[0].body[4].then[1]");
  EXPECT_EQ(e.kind(), ErrorKind::WriteToInput);

  j = guess_doc();
  j["processors"][0]["body"][4]["then"][0]["target"] = "local.nope";
  e = load_error(j);
  EXPECT_EQ(e.path(), "processors[0].body[4].then[0].target");
  EXPECT_EQ(e.kind(), ErrorKind::UndeclaredName);

  j = guess_doc();
  j["processors"][0]["body"].push_back(
      {{"op", "atomic"}, {"body", Json::array({{{"op", "atomic"}}})}});
  e = load_error(j);
  EXPECT_EQ(e.path(), "processors[0].body[10].body[0]");
  EXPECT_EQ(e.kind(), ErrorKind::AtomicNesting);
}

TEST(Load, SwitchRoundTrip) {
  auto j = guess_doc();
  j["processors"][0]["body"].push_back(
      {{"op", "switch"},
       {"selector", "in.guess"},
       {"cases", Json::array({{{"value", {{"u8", 1}}}, {"body", Json::array({{{"op", "forward"}, {"port", 3}}})}},
                              {{"value", {{"u8", 2}}}, {"body", Json::array()}}})}});
  auto s = load_program(j);
  EXPECT_EQ(export_program(s), j);
  j["processors"][0]["body"].back()["cases"][1]["value"] = {{"u8", 1}};
  auto e = load_error(j);
  EXPECT_EQ(e.path(), "processors[0].body[10].cases[1]");
  EXPECT_EQ(e.kind(), ErrorKind::DuplicateName);
}

TEST(Load, SchemaErrors) {
  auto e = load_error(Json::array());
  EXPECT_EQ(e.kind(), ErrorKind::InvalidDocument);
  EXPECT_FALSE(e.semantic());

  auto j = guess_doc();
  j["processors"][0]["body"][0]["op"] = "frobnicate";
  e = load_error(j);
  EXPECT_EQ(e.kind(), ErrorKind::InvalidDocument);
  EXPECT_EQ(e.path(), "processors[0].body[0].op");

  j = guess_doc();
  j["processors"][0]["body"][0].erase("value");
  e = load_error(j);
  EXPECT_EQ(e.kind(), ErrorKind::InvalidDocument);
  EXPECT_EQ(e.path(), "processors[0].body[0]");

  j = guess_doc();
  j["processors"][0]["body"][0]["value"] = {{"u12", 1}};
  EXPECT_FALSE(load_error(j).semantic());

  j = guess_doc();
  j["layouts"]["guess_in"][0]["width"] = 12;
  e = load_error(j);
  EXPECT_EQ(e.kind(), ErrorKind::InvalidWidth);
  EXPECT_EQ(e.path(), "layouts.guess_in[0].width");
}

TEST(Load, DeclarationErrors) {
  auto j = guess_doc();
  j["selectors"][0]["processor"] = "nobody";
  auto e = load_error(j);
  EXPECT_EQ(e.kind(), ErrorKind::UndeclaredName);
  EXPECT_EQ(e.path(), "selectors[0].processor");

  j = guess_doc();
  j["selectors"][0]["criteria"][0]["value"] = {{"u8", 1}};
  e = load_error(j);
  EXPECT_EQ(e.kind(), ErrorKind::WidthMismatch);
  EXPECT_EQ(e.path(), "selectors[0]");

  j = guess_doc();
  j["selectors"].push_back(j["selectors"][0]);
  EXPECT_EQ(load_error(j).kind(), ErrorKind::DuplicateName);

  j = guess_doc();
  j["processors"][0]["locals"][0]["name"] = "guess";
  e = load_error(j);
  EXPECT_EQ(e.kind(), ErrorKind::DuplicateName);
  EXPECT_EQ(e.path(), "processors[0]");

  j = guess_doc();
  j["template"] = "tna";
  EXPECT_EQ(load_error(j).kind(), ErrorKind::UnknownTemplate);

  j = guess_doc();
  j["options"]["indent"] = 40;
  EXPECT_EQ(load_error(j).kind(), ErrorKind::ValueOutOfRange);
}

TEST(Load, Numbers) {
  auto j = guess_doc();
  j["processors"][0]["shared"][0]["initial"] = "0x2A";
  auto s = load_program(j);
  EXPECT_EQ(s.selectors()[0].processor().shared_decls()[0].initial().magnitude(), 42u);
  j["processors"][0]["shared"][0]["initial"] = "300";
  EXPECT_EQ(load_error(j).kind(), ErrorKind::ValueOutOfRange);
  j["processors"][0]["shared"][0]["initial"] = "4x";
  EXPECT_EQ(load_error(j).kind(), ErrorKind::InvalidDocument);
  j["processors"][0]["shared"][0]["initial"] = -1;
  EXPECT_EQ(load_error(j).kind(), ErrorKind::InvalidDocument);
}

TEST(Load, EmptyProgram) {
  auto s = load_program(Json::object());
  EXPECT_TRUE(s.selectors().empty());
  EXPECT_TRUE(generate(s).apply.empty());
}

TEST(Trace, LoadPackets) {
  Json t = {{"seed", "0x10"},
            {"packets", Json::array({{{"ingress_port", 3},
                                      {"fields", {{"udp.dstPort", "5555"}, {"ipv4.ttl", 9}}},
                                      {"payload_hex", "0A"}},
                                     {{"stack", "IPV4_TCP"}, {"payload_hex", ""}}})}};
  auto doc = load_trace(t);
  EXPECT_EQ(doc.seed, 16u);
  ASSERT_EQ(doc.packets.size(), 2u);
  EXPECT_EQ(doc.packets[0].ingress_port, 3);
  EXPECT_EQ(doc.packets[0].payload, Bytes{0x0A});
  EXPECT_EQ(doc.packets[0].field("udp.dstPort").magnitude(), 5555u);
  EXPECT_EQ(doc.packets[0].field("ipv4.ttl").magnitude(), 9u);
  EXPECT_EQ(doc.packets[1].stack, ProtocolStack::Ipv4Tcp);
}

TEST(Trace, Errors) {
  Json t = {{"packets", Json::array({{{"payload_hex", "0g"}}})}};
  auto e = trace_error(t);
  EXPECT_EQ(e.kind(), ErrorKind::InvalidDocument);
  EXPECT_EQ(e.path(), "packets[0].payload_hex");
  EXPECT_EQ(trace_error({{"packets", Json::array({{{"payload_hex", "abc"}}})}}).path(),
            "packets[0].payload_hex");
  EXPECT_EQ(trace_error({{"packets", Json::array({{{"fields", {{"udp.nope", 1}}}}})}}).path(),
            "packets[0].fields.udp.nope");
  EXPECT_EQ(trace_error({{"packets", Json::array({{{"fields", {{"ipv4.ttl", 256}}}}})}}).kind(),
            ErrorKind::InvalidDocument);
  EXPECT_EQ(trace_error(Json::object()).kind(), ErrorKind::InvalidDocument);
}

TEST(Results, Shape) {
  auto s = examples::guess_game();
  std::vector<SimPacket> packets{
      SimPacket::make(ProtocolStack::Ipv4Udp, {10}, {{"udp.dstPort", UValue(u16, 5555)}}, 4),
      SimPacket::make(ProtocolStack::Ipv4Udp, {}, {{"udp.dstPort", UValue(u16, 5555)}}),
      SimPacket::make(ProtocolStack::Ipv4Udp, {}, {{"udp.dstPort", UValue(u16, 1)}})};
  auto results = run_trace(s, packets, 1);
  auto j = results_to_json(1, results, false);
  EXPECT_EQ(j["seed"], 1);
  ASSERT_EQ(j["results"].size(), 3u);
  EXPECT_EQ(j["results"][0]["verdict"], "PROCESSED");
  EXPECT_EQ(j["results"][0]["payload_hex"], "4754");
  EXPECT_EQ(j["results"][0]["egress_port"], 4);
  EXPECT_FALSE(j["results"][0].contains("trace"));
  EXPECT_EQ(j["results"][1]["verdict"], "ERROR");
  EXPECT_TRUE(j["results"][1].contains("error"));
  EXPECT_EQ(j["results"][2]["verdict"], "PASSTHROUGH");
  EXPECT_FALSE(j["results"][2].contains("selector"));
  auto traced = results_to_json(1, results, true);
  EXPECT_EQ(traced["results"][0]["trace"][0]["kind"], "assign_const");
}

TEST(Hex, RoundTrip) {
  Bytes b{0x00, 0x7f, 0x80, 0xff};
  EXPECT_EQ(doc::hex_encode(b), "007f80ff");
  EXPECT_EQ(doc::hex_decode("007F80ff", "x"), b);
}
