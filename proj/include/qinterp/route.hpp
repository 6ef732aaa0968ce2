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

// Dispatch of a problem to the fastest applicable decider, with the Choi
// oracle as fallback.

#include "qinterp/problem.hpp"

namespace qinterp {

struct DecideOptions {
  double tol = kVerifyTol;           // oracle feasibility threshold
  int max_iter = 20000;              // oracle iteration cap
  double boundary_tol = kBoundaryTol;
  bool force_oracle = false;
};

/// Throws on invalid input: trace-preserving classes need density matrices,
/// the others positive semidefinite inputs and targets.
void validate_for_class(const FeasibilityProblem& p);

/// Inputs that are linearly independent (greedy, in order); the other
/// indices with their coefficients over the kept ones.
struct IndependentSubset {
  std::vector<std::size_t> kept;
  std::vector<std::pair<std::size_t, std::vector<Complex>>> dependent;
};
IndependentSubset independent_inputs(const std::vector<Matrix>& inputs, double tol = 1e-9);

Certificate decide(const FeasibilityProblem& p, const DecideOptions& options = {});

/// Runs the oracle regardless of shape.
Certificate decide_with_oracle(const FeasibilityProblem& p, const DecideOptions& options = {});

}  // namespace qinterp
