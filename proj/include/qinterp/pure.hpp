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

// Pure-input interpolation: pure→pure TPCP maps, CP maps, CP maps with a
// prescribed image of the identity, and the unital variants. All reduce to
// a search for a correlation matrix M (PSD, unit diagonal).

#include <optional>
#include <string>
#include <vector>

#include "qinterp/dykstra.hpp"
#include "qinterp/problem.hpp"

namespace qinterp {

struct PureOptions {
  double boundary_tol = kBoundaryTol;
  double zero_tol = 1e-10;     // |(Y*Y)_ij| at or below counts as zero
  double warn_tol = 1e-6;      // quotients with |(Y*Y)_ij| below this are flagged
  double kernel_tol = 1e-9;    // relative eigenvalue cut for ker X*X
  double norm_tol = 1e-9;      // unit-column check for TPCP classes
  DykstraOptions dykstra;
};

/// Input columns x_i (n×k) and target columns y_i (m×k).
struct GramPair {
  Matrix x;
  Matrix y;

  static GramPair from_columns(const std::vector<Vector>& xs, const std::vector<Vector>& ys);
  Eigen::Index k() const { return x.cols(); }
  Matrix gx() const { return x.adjoint() * x; }
  Matrix gy() const { return y.adjoint() * y; }
  /// inputs x_i x_i*, targets y_i y_i*.
  FeasibilityProblem as_problem(MapClass c, const std::optional<Matrix>& identity_image = {}) const;
};

struct CorrelationOutcome {
  Verdict verdict = Verdict::Indeterminate;
  Matrix m;       // correlation matrix when FEASIBLE
  Matrix slack;   // B − Y[M̄ ∘ (X*X)⁺]Y* for target-constrained variants
  long iterations = 0;
  double residual = 0.0;
  double gap = 0.0;
  double min_eigenvalue = 0.0;  // forced-M fast path
  bool fast_path = false;
  std::string evidence;
  std::vector<std::string> warnings;
};

/// Orthonormal k×q basis Q such that every correlation matrix compatible
/// with ker(gx) (i.e. ker gx ⊆ ker M∘(Y*Y)) has the form Q Z Q*.
Matrix kernel_face(const Matrix& gx, const Matrix& y, double kernel_tol);

/// Correlation matrix M with gx = M ∘ (Y*Y). Used for pure targets and for
/// purifications of mixed targets alike.
CorrelationOutcome find_hadamard_correlation(const Matrix& gx, const Matrix& y,
                                             const PureOptions& options = {});

/// Rows of C with C*C = M (numerical rank of M rows).
Matrix correlation_factor(const Matrix& m);

/// Frame whose i-th column is c_i ⊗ y_i, with c_i the columns of C.
Matrix tensor_frame(const Matrix& c, const Matrix& y);

Certificate decide_pure_tpcp(const GramPair& g, const PureOptions& options = {});
Certificate decide_pure_cp(const GramPair& g, const PureOptions& options = {});
Certificate decide_pure_cp_with_target(const GramPair& g, const Matrix& b,
                                       const PureOptions& options = {});
Certificate decide_pure_unital_cp(const GramPair& g, const PureOptions& options = {});
Certificate decide_pure_unital_tpcp(const GramPair& g, const PureOptions& options = {});

}  // namespace qinterp
