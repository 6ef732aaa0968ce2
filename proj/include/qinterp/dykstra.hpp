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

// Convex-feasibility machinery shared by the Choi oracle and the
// correlation-matrix deciders: an isometric real coordinate system for
// Hermitian matrices, affine sets given by least-squares projection, and a
// cyclic Dykstra loop.

#include <functional>
#include <vector>

#include "qinterp/linalg.hpp"

namespace qinterp {

/// Real coordinates of a d×d Hermitian matrix: d diagonal entries followed
/// by √2·Re and √2·Im of each strictly-upper entry. The map is an isometry
/// from the Frobenius norm to the Euclidean norm.
struct HermitianCoordinates {
  static Eigen::Index size(Eigen::Index dim) { return dim * dim; }
  static RealVector pack(const Matrix& h);
  static Matrix unpack(const RealVector& x, Eigen::Index dim, Eigen::Index offset = 0);
  /// Hermitian basis element for coordinate `index`.
  static Matrix basis(Eigen::Index dim, Eigen::Index index);
};

/// {x : L x = b}, or the least-squares solutions when the system is
/// inconsistent (reported through inconsistency()).
class AffineSet {
 public:
  AffineSet(const RealMatrix& op, const RealVector& rhs, double rank_tol = 1e-10);

  RealVector project(const RealVector& x) const;
  double residual(const RealVector& x) const;
  double inconsistency() const noexcept { return inconsistency_; }
  Eigen::Index rank() const noexcept { return row_basis_.cols(); }
  Eigen::Index dim() const noexcept { return op_.cols(); }

 private:
  RealMatrix op_;
  RealVector rhs_;
  RealMatrix row_basis_;  // orthonormal basis of range(Lᵀ)
  RealVector particular_;  // L⁺ b
  double inconsistency_ = 0.0;
};

/// Builds the matrix of a linear map R^d → R^c by applying it to unit vectors.
RealMatrix assemble_operator(Eigen::Index domain_dim,
                             const std::function<RealVector(const RealVector&)>& map);

struct DykstraOptions {
  int max_iter = 20000;
  int window = 500;
  double feasible_tol = 1e-7;
  double infeasible_gap = 1e-5;
  // Iterate until the residual falls below feasible_tol·polish before
  // declaring convergence, leaving headroom for downstream verification.
  double polish = 1e-2;
  bool corrections = true;
};

enum class DykstraStop { Converged, Stalled, IterationCap };

struct DykstraResult {
  RealVector point;  // output of the last projection in the final sweep
  DykstraStop stop = DykstraStop::IterationCap;
  int iterations = 0;
  double gap = 0.0;       // spread between set outputs in the final sweep
  double residual = 0.0;  // caller-defined constraint residual at `point`
};

using Projector = std::function<RealVector(const RealVector&)>;

/// Cyclic Dykstra over `sets` from `start`. Stops when residual(point) drops
/// below feasible_tol·polish (Converged), when the spread stays above
/// infeasible_gap without shrinking by 0.1% over `window` sweeps (Stalled),
/// or at max_iter.
DykstraResult cyclic_dykstra(const RealVector& start, const std::vector<Projector>& sets,
                             const std::function<double(const RealVector&)>& residual,
                             const DykstraOptions& options);

/// A PSD Hermitian block inside a packed coordinate vector.
struct PsdBlock {
  Eigen::Index dim = 0;
  Eigen::Index offset = 0;
};

struct FactorPolishResult {
  RealVector point;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt on ‖op·x(R) − rhs‖ where every block of x is R_b R_b*.
/// Starts from the square roots of the (PSD-projected) blocks of `start`, so
/// the returned point is PSD by construction. The blocks must cover x.
FactorPolishResult polish_psd_factors(const RealMatrix& op, const RealVector& rhs,
                                      const RealVector& start,
                                      const std::vector<PsdBlock>& blocks, double tol,
                                      int max_iter = 200);

/// Projects the Hermitian block stored at `offset` onto the PSD cone.
RealVector project_psd_block(const RealVector& x, Eigen::Index dim, Eigen::Index offset = 0);

}  // namespace qinterp
