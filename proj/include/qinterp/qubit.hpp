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

// Decision procedures for qubit interpolation with k = 1, 2, 3, 4 input
// states, and the trace-norm necessary condition.

#include <vector>

#include "qinterp/problem.hpp"
#include "qinterp/states.hpp"

namespace qinterp {

struct QubitOptions {
  double boundary_tol = kBoundaryTol;
  int max_iter = 5000;    // k = 3 contraction search
  double step_tol = 1e-10;
};

struct QubitProblem {
  std::vector<DensityMatrix> inputs;
  std::vector<DensityMatrix> targets;

  /// Throws ShapeMismatch unless all states are 2×2 and the lists match.
  static QubitProblem from(const FeasibilityProblem& p);
  FeasibilityProblem as_problem() const;
};

/// ‖A1 − tA2‖₁ ≥ ‖B1 − tB2‖₁ on a grid of t ≥ 0. An empty grid means 200
/// log-spaced points in [1e-3, 1e3] plus the positive t where B1 − tB2 or
/// A1 − tA2 is singular. Works in any dimension. Reports the t with the
/// smallest margin ‖A1 − tA2‖₁ − ‖B1 − tB2‖₁; fails when that margin is
/// below −boundary_tol·max(1, t).
ScreenResult check_trace_norm_condition(const Matrix& a1, const Matrix& a2, const Matrix& b1,
                                        const Matrix& b2, const std::vector<double>& t_grid = {},
                                        double boundary_tol = kBoundaryTol);

/// The map X ↦ (tr X)·B1.
Certificate decide_qubit_k1(const DensityMatrix& b1);

Certificate decide_qubit_k2(const DensityMatrix& a1, const DensityMatrix& a2,
                            const DensityMatrix& b1, const DensityMatrix& b2,
                            const QubitOptions& options = {});

/// C = C0 + Σ_i params_i·directions_i with ‖C‖ ≤ 1 when feasible.
struct ContractionWitness {
  Matrix c;
  Matrix c0;
  std::vector<Matrix> directions;
  RealVector params;
};

struct ContractionSearch {
  Verdict verdict = Verdict::Indeterminate;
  ContractionWitness witness;
  int iterations = 0;
  double excess = 0.0;          // ‖C‖_op − 1 at the final iterate
  double inconsistency = 0.0;   // least-squares residual of the linear part
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

/// Contraction search for three pure inputs: find C with ‖C‖ ≤ 1,
/// tr √B2 C √B1 = e^{i(t2−t1)} x1*x2 and Re √B2 C √B1 = (B3 − α1²B1 − α2²B2)/(2α1α2),
/// where x3 = α1 e^{it1} x1 + α2 e^{it2} x2.
ContractionSearch find_contraction(const PureState& x1, const PureState& x2, const PureState& x3,
                                   const Matrix& b1, const Matrix& b2, const Matrix& b3,
                                   const QubitOptions& options = {});

/// Linearly independent A1..A3. Mixed inputs are first replaced by three
/// pure states on the circle where the plane of their Bloch vectors meets
/// the sphere.
Certificate decide_qubit_k3(const QubitProblem& p, const QubitOptions& options = {});

/// Linearly independent A1..A4: the unique linear extension is tested for
/// trace preservation and Choi positivity.
Certificate decide_qubit_k4(const QubitProblem& p, const QubitOptions& options = {});

}  // namespace qinterp
