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


#ifndef PARROT_TESTS_CLI_RUN_HPP
#define PARROT_TESTS_CLI_RUN_HPP

// Runs the parrot binary through the shell and captures its streams.

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <unistd.h>

namespace clirun {

struct Run {
  int code;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string quote(const std::string& s) {
  std::string r = "'";
  for (char c : s) {
    if (c == '\'') r += "'\\''";
    else r += c;
  }
  return r + "'";
}

inline Run run(std::initializer_list<std::string> args) {
  namespace fs = std::filesystem;
  static std::atomic<int> counter{0};
  auto base = fs::temp_directory_path() /
              ("parrot-run-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::string cmd = quote(PARROT_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >" + quote(base.string() + ".out") + " 2>" + quote(base.string() + ".err");
  int status = std::system(cmd.c_str());
  Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(base.string() + ".out"),
        slurp(base.string() + ".err")};
  fs::remove(base.string() + ".out");
  fs::remove(base.string() + ".err");
  return r;
}

}  // namespace clirun

#endif  // PARROT_TESTS_CLI_RUN_HPP
