// Copyright 2026 The qinterp Authors
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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qinterp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decide and construct quantum channels that interpolate between given states"};
  app.require_subcommand(1);

  qinterp::CliOptions opts;
  double tol = 0.0, boundary_tol = 0.0;
  int max_iter = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "feasibility / verification tolerance (default 1e-7)");
    sub->add_option("--boundary-tol", boundary_tol, "feasibility boundary band (default 1e-7)");
    sub->add_option("--max-iter", max_iter, "oracle iteration cap (default 20000)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--compact", opts.compact, "single-line JSON output");
  };

  std::vector<std::string> problems;
  auto* decide = app.add_subcommand("decide", "decide feasibility and emit a certificate");
  decide->add_option("problems", problems, "problem files ('-' for stdin)")->required();
  decide->add_flag("--oracle", opts.force_oracle, "skip fast paths and use the Choi oracle");
  decide->add_option("--jobs,-j", opts.jobs, "parallel workers for several problem files")
      ->check(CLI::PositiveNumber);
  add_common(decide);

  std::string problem, channel;
  auto* verify = app.add_subcommand("verify", "check a channel against a problem");
  verify->add_option("problem", problem, "problem file")->required();
  verify->add_option("channel", channel, "certificate or channel file")->required();
  add_common(verify);

  auto* screen = app.add_subcommand("screen", "run necessary-condition screeners");
  screen->add_option("problem", problem, "problem file ('-' for stdin)")->required();
  add_common(screen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qinterp::kExitInvalid;
  }
  for (auto* sub : {decide, verify, screen}) {
    if (sub->count("--tol") > 0) opts.tol = tol;
    if (sub->count("--boundary-tol") > 0) opts.boundary_tol = boundary_tol;
    if (sub->count("--max-iter") > 0) opts.max_iter = max_iter;
  }

  if (*decide) return qinterp::cmd_decide(problems, opts, std::cout, std::cerr);
  if (*verify) return qinterp::cmd_verify(problem, channel, opts, std::cout, std::cerr);
  return qinterp::cmd_screen(problem, opts, std::cout, std::cerr);
}
