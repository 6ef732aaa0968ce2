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

// Validated quantum-state value types, spectral factorizations and
// purifications.

#include <optional>
#include <utility>

#include "qinterp/linalg.hpp"

namespace qinterp {

inline constexpr double kTraceTol = 1e-9;
inline constexpr double kNormTol = 1e-10;

/// Hermitian PSD matrix with unit trace.
class DensityMatrix {
 public:
  /// Throws NotHermitian, NotPSD or TraceNotOne.
  static DensityMatrix validate(const Matrix& m);

  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  explicit DensityMatrix(Matrix m) : matrix_(std::move(m)) {}
  Matrix matrix_;
};

inline DensityMatrix validate_density(const Matrix& m) { return DensityMatrix::validate(m); }

/// Unit vector with the first significant component real positive.
class PureState {
 public:
  /// Throws NotNormalized unless ‖v‖ = 1 within kNormTol.
  static PureState from_vector(const Vector& v);
  static PureState normalized(const Vector& v);

  const Vector& vector() const noexcept { return vector_; }
  Eigen::Index dim() const noexcept { return vector_.size(); }
  Matrix projector() const { return vector_ * vector_.adjoint(); }

 private:
  explicit PureState(Vector v) : vector_(std::move(v)) {}
  Vector vector_;
};

/// A = X D² X* with X having orthonormal columns and D strictly positive.
struct SpectralFactor {
  Matrix isometry;   // n × r
  RealVector diag;   // r entries, √(positive eigenvalues), descending

  Eigen::Index rank() const noexcept { return diag.size(); }
  Matrix weighted() const;  // X D
  Matrix reconstruct() const;
};

SpectralFactor spectral_factor(const DensityMatrix& a);

/// Same factorization for any PSD matrix (unnormalized targets of CP maps).
SpectralFactor spectral_factor_psd(const Matrix& a);

/// Unit vector in C^r ⊗ C^m stored ancilla-major: r consecutive blocks of
/// length m. The blocks y_j satisfy Σ_j y_j y_j* = the purified state.
struct Purification {
  Eigen::Index system_dim = 0;
  Eigen::Index ancilla_dim = 0;
  Vector vector;

  Vector block(Eigen::Index j) const { return vector.segment(j * system_dim, system_dim); }
  /// m × r matrix whose columns are the blocks.
  Matrix blocks() const;
  /// Σ_j y_j y_j*, i.e. the ancilla traced out.
  Matrix reduced() const;
};

/// φ = Σ_k √λ_k (W v_k) ⊗ v_k. Without W the eigenbasis is embedded
/// directly (W = I when r ≥ m, otherwise v_k ↦ e_k on the support).
Purification purify(const DensityMatrix& a, Eigen::Index ancilla_dim,
                    const std::optional<Matrix>& partial_isometry = std::nullopt);

/// Bookkeeping for rewriting a qubit pair (A1, A2) as pure states through
/// invertible linear combinations:
///   Ã1 = s1 (A1 − c A2),  Ã2 = s2 (A2 − c̃ Ã1),
/// each Ã a rank-one projector. A trace-preserving CP map sends A_i ↦ B_i iff
/// it sends Ã_i ↦ B̃_i with the same combinations applied to the targets.
struct QubitPairReduction {
  PureState x1;
  PureState x2;
  double c = 0.0;
  double c_tilde = 0.0;
  double scale1 = 1.0;
  double scale2 = 1.0;

  std::pair<Matrix, Matrix> apply(const Matrix& b1, const Matrix& b2) const;
};

/// Throws LinearlyDependent when the Frobenius Gram determinant of {A1, A2}
/// is below 1e-10.
QubitPairReduction reduce_qubit_pair(const DensityMatrix& a1, const DensityMatrix& a2);

}  // namespace qinterp
