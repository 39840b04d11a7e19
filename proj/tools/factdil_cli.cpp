// Copyright 2026 The factdil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// factdil: seeded generation, invariant batteries and single queries for
// factorisable channels. See README.md for usage.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "factdil/cli.hpp"

namespace {

using factdil::json;
namespace cli = factdil::cli;

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw factdil::ParseError("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorisable channel toolkit"};
  app.require_subcommand(1);

  cli::Options opt;
  double tol = 1e-8;
  std::string out;
  app.add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", tol, "Absolute tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Write the JSON document here instead of standard output");
  app.add_option("--trials", opt.trials, "Random trials per battery")->capture_default_str();

  std::string input;
  auto* gen = app.add_subcommand("generate", "Write a seeded random instance");
  std::string kind;
  std::size_t n = 2;
  std::size_t k = 0;
  std::string blocks;
  gen->add_option("kind", kind, "random_presentation | random_unitary_family | random_schur")->required();
  gen->add_option("--n", n, "System dimension, or Schur tuple length")->capture_default_str();
  gen->add_option("--k", k, "Ancilla dimension, or family size");
  gen->add_option("--blocks", blocks, "Block dimensions, e.g. 2,1");

  auto* verify = app.add_subcommand("verify", "Run an invariant battery on a JSON input");
  std::string suite;
  verify->add_option("input", input, "Input JSON file")->required();
  verify->add_option("--suite", suite, "presentation | symbol | power:m | schur | membership")->required();

  auto* symbol = app.add_subcommand("symbol", "Operator symbol of a presentation");
  symbol->add_option("input", input)->required();
  auto* power = app.add_subcommand("power", "m-th power of the channel of a presentation");
  std::size_t m = 2;
  power->add_option("input", input)->required();
  power->add_option("--m", m, "Power")->capture_default_str();
  auto* schur = app.add_subcommand("schur", "Schur symbol of a unitary tuple, or Schur recognition");
  schur->add_option("input", input)->required();
  auto* membership = app.add_subcommand("membership", "Convex-hull membership of a target channel");
  membership->add_option("input", input)->required();
  auto* monitor = app.add_subcommand("monitor", "Consecutive distances of a presentation sequence");
  monitor->add_option("input", input)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    opt.tol = factdil::Tolerance(tol, std::min(1e-10, tol));
    if (*gen) {
      emit(cli::cmd_generate(kind, n, k == 0 && blocks.empty() ? 2 : k, blocks, opt), out);
      return cli::kExitOk;
    }
    const json doc = cli::read_json_file(input);
    cli::Outcome res;
    if (*verify) {
      res = cli::cmd_verify(doc, suite, opt);
    } else if (*symbol) {
      res = cli::cmd_symbol(doc, opt);
    } else if (*power) {
      res = cli::cmd_power(doc, m, opt);
    } else if (*schur) {
      res = cli::cmd_schur(doc, opt);
    } else if (*membership) {
      res = cli::cmd_membership(doc, opt);
    } else {
      res = cli::cmd_monitor(doc, opt);
    }
    res.document["inputs"]["file"] = input;
    res.document["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
    emit(res.document, out);
    return res.exit_code;
  } catch (const factdil::InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return cli::kExitInvariant;
  } catch (const factdil::ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return cli::kExitInvariant;
  } catch (const factdil::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInput;
  }
}
