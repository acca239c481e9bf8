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

#ifndef PARROT_SOLUTION_HPP
#define PARROT_SOLUTION_HPP

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "parrot/error.hpp"
#include "parrot/flow.hpp"
#include "parrot/selector.hpp"
#include "parrot/templates.hpp"

namespace parrot {

struct CodegenConfig {
  std::filesystem::path output_dir = {};
  bool emit_combined = true;
  int indent = 4;

  friend bool operator==(const CodegenConfig&, const CodegenConfig&) = default;
};

// The assembled program: selectors in registration order, each bound to a
// completed processor, plus the template to splice into.
class Solution {
 public:
  explicit Solution(std::vector<FlowSelector> selectors,
                    TemplateId tmpl = TemplateId::V1ModelBasic,
                    CodegenConfig options = {})
      : selectors_(std::move(selectors)),
        template_(tmpl),
        options_(std::move(options)) {
    std::set<std::string_view> names;
    std::map<std::string_view, const FlowProcessor*> processors;
    for (const auto& s : selectors_) {
      if (!names.insert(s.name()).second) {
        throw Error(ErrorKind::DuplicateName,
                    "selector '" + s.name() + "' registered twice");
      }
      const FlowProcessor& p = s.processor();
      auto [it, inserted] = processors.try_emplace(p.name(), &p);
      if (!inserted && it->second != &p) {
        throw Error(ErrorKind::DuplicateName,
                    "two different processors are named '" + p.name() + "'");
      }
      p.validate_complete();
    }
    check_emitted_names();
    if (options_.indent < 0 || options_.indent > 16) {
      throw Error(ErrorKind::ValueOutOfRange, "indent must be within 0..16");
    }
  }

  const std::vector<FlowSelector>& selectors() const noexcept { return selectors_; }
  TemplateId template_id() const noexcept { return template_; }
  const CodegenConfig& options() const noexcept { return options_; }

  // Distinct processors in order of first use.
  std::vector<const FlowProcessor*> processors() const {
    std::vector<const FlowProcessor*> out;
    for (const auto& s : selectors_) {
      const FlowProcessor* p = &s.processor();
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
  }

  std::vector<const FlowSelector*> selectors_of(const FlowProcessor& p) const {
    std::vector<const FlowSelector*> out;
    for (const auto& s : selectors_) {
      if (&s.processor() == &p) out.push_back(&s);
    }
    return out;
  }

 private:
  // Generated P4 names are "<processor>_<suffix>"; two processors can still
  // land on the same string, e.g. "a" + "b_c" and "a_b" + "c".
  void check_emitted_names() const {
    std::map<std::string, std::string> seen;
    for (const FlowProcessor* p : processors()) {
      std::vector<std::string> suffixes = {"in", "in_t", "out", "out_t"};
      for (const auto& l : p->local_decls()) suffixes.push_back(l.name());
      for (const auto& v : p->shared_decls()) suffixes.push_back(v.name());
      for (const auto& r : p->ring_decls()) {
        suffixes.push_back(r.name());
        suffixes.push_back(r.name() + "_head");
        suffixes.push_back(r.name() + "_idx");
      }
      for (const auto& suffix : suffixes) {
        std::string full = p->name() + "_" + suffix;
        auto [it, inserted] = seen.try_emplace(full, p->name());
        if (!inserted) {
          throw Error(ErrorKind::DuplicateName,
                      "generated name '" + full + "' is produced by both '" +
                          it->second + "' and '" + p->name() + "'");
        }
      }
    }
  }

  std::vector<FlowSelector> selectors_;
  TemplateId template_;
  CodegenConfig options_;
};

}  // namespace parrot

#endif  // PARROT_SOLUTION_HPP
