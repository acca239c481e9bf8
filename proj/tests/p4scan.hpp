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


#ifndef PARROT_TESTS_P4SCAN_HPP
#define PARROT_TESTS_P4SCAN_HPP

// Token-level checks over emitted P4: delimiter balance and a closed symbol
// table. Deliberately crude; it knows only the declaration shapes the
// generator emits.

#include <cctype>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace p4scan {

struct Token {
  enum Kind { Ident, Number, Punct } kind;
  std::string text;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (src.substr(i, 2) == "/*") {
      auto end = src.find("*/", i + 2);
      i = end == std::string_view::npos ? src.size() : end + 2;
    } else if (c == '"') {
      auto end = src.find('"', i + 1);
      i = end == std::string_view::npos ? src.size() : end + 1;
    } else if (c == '<' && !out.empty() && out.back().text == "include") {
      // system include path
      while (i < src.size() && src[i] != '>') ++i;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Number, std::string(src.substr(i, j - i))});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      out.push_back({Token::Ident, std::string(src.substr(i, j - i))});
      i = j;
    } else {
      out.push_back({Token::Punct, std::string(1, c)});
      ++i;
    }
  }
  return out;
}

// (), {} and [] nest properly.
inline bool balanced(std::string_view src) {
  std::string stack;
  for (const auto& t : tokenize(src)) {
    if (t.kind != Token::Punct) continue;
    char c = t.text[0];
    if (c == '(' || c == '{' || c == '[') {
      stack.push_back(c);
    } else if (c == ')' || c == '}' || c == ']') {
      char open = c == ')' ? '(' : c == '}' ? '{' : '[';
      if (stack.empty() || stack.back() != open) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {
      "action", "actions", "apply", "bit", "bool", "const", "control", "default",
      "default_action", "define", "else", "endif", "entries", "exact", "false",
      "header", "if", "ifdef", "ifndef", "include", "key", "parser", "select",
      "state", "struct", "table", "transition", "true", "undef",
  };
  return k;
}

struct SymbolReport {
  std::set<std::string> defined;
  std::set<std::string> undefined;
};

// Identifiers are definitions when they follow a declaring keyword, a bit<N>
// or register<..>(N) type, or another identifier used as a type name.
inline SymbolReport scan(std::span<const std::string> sources,
                         std::span<const std::string_view> contract) {
  SymbolReport r;
  std::vector<std::string> refs;
  static const std::set<std::string, std::less<>> declarers = {
      "header", "struct", "state", "action", "table", "define", "control", "parser"};
  for (const auto& src : sources) {
    auto toks = tokenize(src);
    auto is = [&](std::size_t k, std::string_view text) {
      return k < toks.size() && toks[k].text == text;
    };
    auto ident = [&](std::size_t k) { return k < toks.size() && toks[k].kind == Token::Ident; };
    for (std::size_t k = 0; k < toks.size(); ++k) {
      const auto& t = toks[k];
      if (t.kind != Token::Ident) continue;
      if (declarers.contains(t.text) && ident(k + 1)) {
        r.defined.insert(toks[k + 1].text);
        ++k;
        continue;
      }
      if (t.text == "bit" && is(k + 1, "<") && is(k + 3, ">") && ident(k + 4) &&
          (is(k + 5, ";") || is(k + 5, "="))) {
        r.defined.insert(toks[k + 4].text);
        k += 4;
        continue;
      }
      if (t.text == "register") {
        std::size_t j = k;
        while (j < toks.size() && !is(j, ")")) ++j;
        if (ident(j + 1)) r.defined.insert(toks[j + 1].text);
        for (std::size_t m = k + 1; m < j; ++m) {
          if (ident(m) && toks[m].text != "bit") refs.push_back(toks[m].text);
        }
        k = j + 1;
        continue;
      }
      if (ident(k + 1) && (is(k + 2, ";") || is(k + 2, "=")) && !keywords().contains(t.text) &&
          !keywords().contains(toks[k + 1].text)) {
        refs.push_back(t.text);
        r.defined.insert(toks[k + 1].text);
        ++k;
        continue;
      }
      refs.push_back(t.text);
    }
  }
  for (const auto& name : refs) {
    if (keywords().contains(name) || r.defined.contains(name)) continue;
    bool in_contract = false;
    for (auto c : contract) in_contract = in_contract || c == name;
    if (!in_contract) r.undefined.insert(name);
  }
  return r;
}

}  // namespace p4scan

#endif  // PARROT_TESTS_P4SCAN_HPP
