// Copyright 2026 The mua Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include "mua/cli.hpp"

namespace {

void add_mechanism_flags(CLI::App* cmd, std::string& mechanism, std::size_t& t,
                         std::string& inner) {
  cmd->add_option("--mechanism", mechanism, "ptas | half | lift | brute | greedy")
      ->check(CLI::IsMember({"ptas", "half", "lift", "brute", "greedy"}));
  cmd->add_option("--t", t, "size of the precisely served set (ptas, lift)");
  cmd->add_option("--inner", inner, "lift inner solver: exhaustive | single | piecewise | subadditive")
      ->check(CLI::IsMember({"exhaustive", "single", "piecewise", "subadditive"}));
}

void add_solve_flags(CLI::App* cmd, mua::cli::SolveOptions& o) {
  cmd->add_option("--input", o.input, "instance JSON file, - for stdin");
  cmd->add_option("--output", o.output, "report file, - for stdout");
  add_mechanism_flags(cmd, o.mechanism, o.t, o.inner);
  cmd->add_option("--payments", o.payments, "none | clarke | zero-pivot")
      ->check(CLI::IsMember({"none", "clarke", "zero-pivot"}));
  cmd->add_flag("--timing", o.timing, "add elapsed microseconds to the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truthful multi-unit auction mechanisms"};
  app.require_subcommand(1);

  mua::cli::SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "run a mechanism on an instance");
  add_solve_flags(solve_cmd, solve);

  mua::cli::SolveOptions verify;
  auto* verify_cmd =
      app.add_subcommand("verify", "compare a mechanism with the brute-force optimum");
  add_solve_flags(verify_cmd, verify);

  mua::cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->require_subcommand(1);
  gen_cmd->add_option("--output", gen.output, "instance file, - for stdout");
  auto* onepoint = gen_cmd->add_subcommand("onepoint", "bidder i wants exactly s_i items");
  onepoint->add_option("--s", gen.targets, "comma separated targets")->required();
  onepoint->add_option("--m", gen.m, "number of items")->required();
  auto* hard = gen_cmd->add_subcommand("subadditive-hard", "two-bidder subadditive hard instance");
  hard->add_option("--m", gen.m, "number of items")->required();
  hard->add_option("--s1", gen.s1, "threshold of bidder 1")->required();
  auto* random = gen_cmd->add_subcommand("random", "seeded random instance");
  random->add_option("--kind", gen.kind, "k_minded | marginal_piecewise | table | subadditive_table");
  random->add_option("--n", gen.n, "bidders");
  random->add_option("--m", gen.m, "items")->required();
  random->add_option("--k", gen.k, "bids or tuples per bidder");
  random->add_option("--value-cap", gen.value_cap, "largest price");
  for (auto* sub : {onepoint, hard, random}) {
    sub->add_option("--seed", gen.seed, "64-bit seed");
    sub->add_option("--output", gen.output, "instance file, - for stdout");
  }

  mua::cli::MisreportOptions mis;
  auto* mis_cmd = app.add_subcommand("misreport", "search for profitable misreports");
  mis_cmd->add_option("--input", mis.input, "instance JSON file, - for stdin");
  mis_cmd->add_option("--output", mis.output, "report file, - for stdout");
  add_mechanism_flags(mis_cmd, mis.mechanism, mis.t, mis.inner);
  mis_cmd->add_option("--payments", mis.payments, "clarke | zero-pivot")
      ->check(CLI::IsMember({"clarke", "zero-pivot"}));
  mis_cmd->add_option("--bidder", mis.bidder, "index of the misreporting bidder");
  mis_cmd->add_option("--samples", mis.samples, "number of misreports");
  mis_cmd->add_option("--seed", mis.seed, "64-bit seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mua::cli::kInvalidInput;
  }

  if (*solve_cmd) return mua::cli::cmd_solve(solve, std::cout, std::cerr);
  if (*verify_cmd) return mua::cli::cmd_verify(verify, std::cout, std::cerr);
  if (*mis_cmd) return mua::cli::cmd_misreport(mis, std::cout, std::cerr);
  if (*onepoint) gen.family = "onepoint";
  if (*hard) gen.family = "subadditive-hard";
  if (*random) gen.family = "random";
  return mua::cli::cmd_gen(gen, std::cout, std::cerr);
}
