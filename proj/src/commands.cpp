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

#include "qinterp/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "qinterp/io.hpp"
#include "qinterp/oracle.hpp"

namespace qinterp {

namespace {

Json read_json(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, "'" + path + "' is not valid JSON: " + e.what());
  }
}

ProblemFile load_problem(const std::string& path, const CliOptions& cli) {
  ProblemFile f = problem_from_json(read_json(path));
  if (cli.tol) f.options.tol = *cli.tol;
  if (cli.boundary_tol) f.options.boundary_tol = *cli.boundary_tol;
  if (cli.max_iter) f.options.max_iter = *cli.max_iter;
  if (cli.force_oracle) f.options.force_oracle = true;
  return f;
}

void emit(std::ostream& out, const Json& j, const CliOptions& cli) {
  out << (cli.compact ? j.dump() : j.dump(2)) << '\n';
}

struct Outcome {
  Json json;
  int code = kExitInvalid;
};

Outcome decide_one(const std::string& path, const CliOptions& cli) {
  Outcome o;
  try {
    const ProblemFile f = load_problem(path, cli);
    const Certificate c = decide(f.problem, f.options);
    o.json = certificate_to_json(c);
    o.code = exit_code(c.verdict);
  } catch (const Error& e) {
    o.json = {{"error", e.what()}, {"code", to_string(e.code())}};
    o.code = kExitInvalid;
  } catch (const Json::exception& e) {
    o.json = {{"error", e.what()}, {"code", "InvalidInput"}};
    o.code = kExitInvalid;
  }
  return o;
}

}  // namespace

int cmd_decide(const std::vector<std::string>& paths, const CliOptions& cli, std::ostream& out,
               std::ostream& err) {
  if (paths.empty()) {
    err << "decide: no problem file given\n";
    return kExitInvalid;
  }
  std::vector<Outcome> results(paths.size());
  const auto workers = static_cast<std::size_t>(std::max(1, cli.jobs));
  if (workers == 1 || paths.size() == 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) results[i] = decide_one(paths[i], cli);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, paths.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) results[i] = decide_one(paths[i], cli);
      });
    }
    for (auto& t : pool) t.join();
  }
  int code = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (results[i].code == kExitInvalid) err << paths[i] << ": " << results[i].json.value("error", "") << '\n';
    code = std::max(code, results[i].code);
  }
  if (paths.size() == 1) {
    emit(out, results[0].json, cli);
  } else {
    Json arr = Json::array();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      Json entry = results[i].json;
      entry["path"] = paths[i];
      arr.push_back(std::move(entry));
    }
    emit(out, arr, cli);
  }
  return code;
}

int cmd_verify(const std::string& problem_path, const std::string& channel_path,
               const CliOptions& cli, std::ostream& out, std::ostream& err) {
  try {
    const ProblemFile f = load_problem(problem_path, cli);
    const KrausChannel ch = channel_from_json(read_json(channel_path));
    if (ch.in_dim != f.problem.in_dim() || ch.out_dim != f.problem.out_dim()) {
      std::ostringstream os;
      os << "channel maps " << ch.in_dim << " -> " << ch.out_dim << " but the problem needs "
         << f.problem.in_dim() << " -> " << f.problem.out_dim();
      throw Error(ErrorCode::ShapeMismatch, os.str());
    }
    const double tol = cli.tol.value_or(kVerifyTol);
    const Residuals r = compute_residuals(ch, f.problem);
    Json failures = Json::array();
    if (!(r.interpolation <= tol)) failures.push_back("interpolation");
    if (requires_tp(f.problem.map_class) && !(r.tp <= tol)) failures.push_back("tp");
    if (requires_unital(f.problem.map_class) && !(r.unital <= tol)) failures.push_back("unital");
    if (f.problem.identity_image && !(r.identity_image <= tol)) failures.push_back("identity_image");
    const Json report = {{"valid", failures.empty()},
                         {"tol", tol},
                         {"map_class", to_string(f.problem.map_class)},
                         {"residuals",
                          {{"interpolation", r.interpolation},
                           {"tp", r.tp},
                           {"unital", r.unital},
                           {"identity_image", r.identity_image}}},
                         {"failures", failures}};
    emit(out, report, cli);
    return failures.empty() ? 0 : 1;
  } catch (const Error& e) {
    err << "verify: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err << "verify: " << e.what() << '\n';
  }
  return kExitInvalid;
}

int cmd_screen(const std::string& path, const CliOptions& cli, std::ostream& out,
               std::ostream& err) {
  try {
    const ProblemFile f = load_problem(path, cli);
    validate_for_class(f.problem);
    const auto results = screen(f.problem, f.options.boundary_tol);
    bool passed = true;
    Json arr = Json::array();
    for (const auto& s : results) {
      passed = passed && s.passed;
      arr.push_back(screen_to_json(s));
    }
    Json report = {{"passed", passed}, {"screeners", arr}};
    if (results.empty()) report["note"] = "no necessary conditions apply to this map class";
    emit(out, report, cli);
    return passed ? 0 : 1;
  } catch (const Error& e) {
    err << "screen: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err << "screen: " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace qinterp
