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

#pragma once

// Command implementations behind the qinterp executable. Each returns the
// process exit code: 0 FEASIBLE / pass, 1 INFEASIBLE / fail,
// 2 INDETERMINATE, 3 invalid input.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qinterp {

inline constexpr int kExitInvalid = 3;

struct CliOptions {
  std::optional<double> tol;
  std::optional<double> boundary_tol;
  std::optional<int> max_iter;
  bool force_oracle = false;
  int jobs = 1;
  bool compact = false;
};

/// One path prints a certificate object; several print an array in input
/// order and return the largest exit code. "-" reads stdin.
int cmd_decide(const std::vector<std::string>& paths, const CliOptions& options, std::ostream& out,
               std::ostream& err);

int cmd_verify(const std::string& problem_path, const std::string& channel_path,
               const CliOptions& options, std::ostream& out, std::ostream& err);

int cmd_screen(const std::string& path, const CliOptions& options, std::ostream& out,
               std::ostream& err);

}  // namespace qinterp
