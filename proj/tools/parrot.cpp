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


// parrot: check, generate or simulate a JSON program description.
//
// Exit status: 0 ok, 1 I/O or malformed input, 2 semantic error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "parrot/parrot.hpp"

namespace {

namespace fs = std::filesystem;
using parrot::ErrorKind;

constexpr int kOk = 0;
constexpr int kIoError = 1;
constexpr int kSemantic = 2;

int exit_code(ErrorKind kind) {
  return kind == ErrorKind::IoError || kind == ErrorKind::InvalidDocument ? kIoError
                                                                          : kSemantic;
}

// Runs `f`, mapping library errors to diagnostics and exit codes.
template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const parrot::LoadError& e) {
    std::cerr << "parrot: " << e.what() << "\n";
    return e.semantic() ? kSemantic : kIoError;
  } catch (const parrot::Error& e) {
    std::cerr << "parrot: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "parrot: " << e.what() << "\n";
    return kIoError;
  }
}

bool write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  return static_cast<bool>(out);
}

int cmd_check(const std::string& program) {
  auto solution = parrot::load_program_file(program);
  std::cout << "ok: " << solution.selectors().size() << " selector(s), "
            << solution.processors().size() << " processor(s)\n";
  return kOk;
}

int cmd_generate(const std::string& program, const std::string& out_dir) {
  auto solution = parrot::load_program_file(program);
  auto files = parrot::generate(solution);
  for (const auto& p : parrot::write_generated(files, solution.template_id(), out_dir)) {
    std::cout << p.string() << "\n";
  }
  return kOk;
}

int cmd_simulate(const std::string& program, const std::string& trace_path,
                 std::optional<std::uint64_t> seed, const std::string& out_file,
                 bool with_trace) {
  auto solution = parrot::load_program_file(program);
  auto trace = parrot::load_trace(parrot::read_json_file(trace_path));
  const std::uint64_t s = seed.value_or(trace.seed);
  auto results = parrot::run_trace(solution, trace.packets, s);
  std::string text = parrot::results_to_json(s, results, with_trace).dump(2) + "\n";
  if (out_file.empty()) {
    std::cout << text;
  } else if (!write_text(out_file, text)) {
    throw parrot::Error(ErrorKind::IoError, "cannot write " + out_file);
  }
  return kOk;
}

int cmd_examples(const std::string& name, const std::string& out_dir) {
  std::vector<std::string> wanted;
  if (name.empty()) {
    for (auto n : parrot::examples::names()) wanted.emplace_back(n);
  } else {
    wanted.push_back(name);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  for (const auto& n : wanted) {
    auto solution = parrot::examples::by_name(n);
    if (!solution) {
      std::cerr << "parrot: unknown example '" << n << "'; available:";
      for (auto a : parrot::examples::names()) std::cerr << " " << a;
      std::cerr << "\n";
      return kSemantic;
    }
    fs::path path = fs::path(out_dir) / (n + ".json");
    if (!write_text(path, parrot::export_program(*solution).dump(2) + "\n")) {
      throw parrot::Error(ErrorKind::IoError, "cannot write " + path.string());
    }
    std::cout << path.string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parrot: P4 code generator for offloaded flow processors"};
  app.require_subcommand(1);

  std::string program, out, trace, name;
  std::optional<std::uint64_t> seed;
  bool with_trace = false;

  auto* check = app.add_subcommand("check", "Load a program and run every semantic check");
  check->add_option("program", program, "Program JSON")->required();

  auto* gen = app.add_subcommand("generate", "Emit P4 fragments, template and combined program");
  gen->add_option("program", program, "Program JSON")->required();
  gen->add_option("-o,--out", out, "Output directory")->required();

  auto* sim = app.add_subcommand("simulate", "Run a packet trace through the simulator");
  sim->add_option("program", program, "Program JSON")->required();
  sim->add_option("-t,--trace", trace, "Trace JSON")->required();
  sim->add_option("--seed", seed, "RNG seed (overrides the trace's seed)");
  sim->add_option("-o,--out", out, "Write results here instead of stdout");
  sim->add_flag("--trace-commands", with_trace, "Include per-command trace events");

  auto* ex = app.add_subcommand("examples", "Write built-in example programs");
  ex->add_option("name", name, "guess_game or insert_agg (default: both)");
  ex->add_option("-o,--out", out, "Output directory")->default_str(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kIoError;
  }

  if (*check) return guarded([&] { return cmd_check(program); });
  if (*gen) return guarded([&] { return cmd_generate(program, out); });
  if (*sim) {
    return guarded([&] { return cmd_simulate(program, trace, seed, out, with_trace); });
  }
  return guarded([&] { return cmd_examples(name, out.empty() ? "." : out); });
}
