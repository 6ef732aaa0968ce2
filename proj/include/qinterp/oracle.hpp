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

// Choi-matrix feasibility oracle.

#include <vector>

#include "qinterp/dykstra.hpp"
#include "qinterp/problem.hpp"

namespace qinterp {

struct OracleOptions {
  DykstraOptions dykstra;
  // Eigenvalues at or below face_tol·max(1, λ_max) count as zero when
  // locating the face of the PSD cone the Choi matrix must lie in.
  double face_tol = 1e-9;
  // Sweeps before the first factor polish, and the polish iteration budget.
  int warm_iter = 1500;
  int polish_iter = 60;
};

/// T(X) read off a Choi matrix: Σ_ab X_ab J_ab.
Matrix choi_contract(const Matrix& j, const Matrix& x, Eigen::Index n, Eigen::Index m);

/// Orthonormal basis W (nm×d) such that every feasible Choi matrix has the
/// form W Z W* with Z ⪰ 0. Each pair A ⪰ 0, B ⪰ 0 forces J(ū⊗v) = 0 for
/// u ∈ range(A), v ∈ ker(B).
Matrix choi_face(const FeasibilityProblem& p, double tol = 1e-9);

/// Dykstra between the PSD cone and the affine interpolation constraints.
Certificate decide_general(const FeasibilityProblem& p, const OracleOptions& options = {});

/// Necessary conditions for trace-preserving classes: the trace-norm
/// condition on every pair and the pairwise fidelity condition. Returns an
/// empty list for other classes.
std::vector<ScreenResult> screen(const FeasibilityProblem& p, double boundary_tol = kBoundaryTol);

}  // namespace qinterp
