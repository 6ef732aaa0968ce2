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

// Dense complex linear algebra used by every other module. Eigenvalues are
// always returned in descending order and eigenvectors carry a fixed phase
// (first significant component real positive), so results are reproducible.

#include <cstddef>

#include "qinterp/error.hpp"

namespace qinterp {

inline constexpr double kHermitianTol = 1e-10;

struct EigenDecomposition {
  RealVector values;  // descending
  Matrix vectors;     // columns, unitary
};

struct SvdResult {
  Matrix u;
  RealVector singular;  // descending
  Matrix v;
};

enum class Subsystem { First, Second };

bool is_hermitian(const Matrix& h, double tol = kHermitianTol);

/// Throws ErrorCode::NotHermitian if ‖H − H*‖_max exceeds tol.
void require_hermitian(const Matrix& h, double tol = kHermitianTol,
                       const std::string& what = "matrix");

Matrix hermitian_part(const Matrix& h);

EigenDecomposition herm_eig(const Matrix& h, double tol = kHermitianTol);

/// Full SVD, singular values descending.
SvdResult svd(const Matrix& a);

/// Clipping tolerance for PSD checks: 1e-9 · max(1, max |λ|).
double psd_tolerance(const RealVector& eigenvalues);

bool is_psd(const Matrix& h, double tol_scale = 1.0);

double trace_norm(const Matrix& x);
double operator_norm(const Matrix& x);

/// Principal square root of a PSD matrix. Eigenvalues in [−psd_tol, 0) are
/// clipped; anything more negative raises NotPSD.
Matrix sqrt_psd(const Matrix& a);

/// Clips negative eigenvalues to zero (nearest PSD matrix in Frobenius norm).
Matrix project_psd(const Matrix& h);

/// F(A, B) = ‖√A √B‖₁.
double fidelity(const Matrix& a, const Matrix& b);

/// Moore–Penrose inverse; singular values below rcond·σ_max are dropped.
Matrix pinv(const Matrix& a, double rcond = 1e-10);

Matrix hadamard(const Matrix& a, const Matrix& b);

Matrix kron(const Matrix& a, const Matrix& b);

/// Traces out `which` factor of a (p·q)×(p·q) matrix on C^p ⊗ C^q.
Matrix partial_trace(const Matrix& m, std::size_t p, std::size_t q,
                     Subsystem which);

/// Orthonormal basis of ker(A): right singular vectors with σ ≤ rel_tol·σ_max.
Matrix null_space(const Matrix& a, double rel_tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of range(Q), Q having
/// orthonormal columns.
Matrix orthonormal_complement(const Matrix& q);

/// Unitary U with U·from = to, given from*·from = to*·to (equal Gram
/// matrices, same shape). The residual ‖U·from − to‖ scales with the Gram
/// mismatch.
Matrix unitary_from_frames(const Matrix& from, const Matrix& to);

/// Multiplies by a unit-modulus scalar so the first significant component
/// is real and positive.
Vector fix_phase(const Vector& v);

/// Eigenvector of a rank-one PSD matrix scaled so that x x* = A.
Vector rank_one_factor(const Matrix& a);

}  // namespace qinterp
