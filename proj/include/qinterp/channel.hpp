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

// Kraus and Choi representations of completely positive maps.
//
// Index convention: the Choi matrix lives on C^n ⊗ C^m (input first),
//   J = Σ_{ab} E_ab ⊗ T(E_ab),
// and a vector w ∈ C^{nm} reshapes to an m×n Kraus operator through
//   F(p, a) = w(a·m + p).

#include <vector>

#include "qinterp/linalg.hpp"

namespace qinterp {

inline constexpr double kChannelFlagTol = 1e-8;

struct KrausChannel {
  Eigen::Index in_dim = 0;
  Eigen::Index out_dim = 0;
  std::vector<Matrix> operators;  // each out_dim × in_dim
  bool tp = false;
  bool unital = false;

  /// Checks shapes and sets the tp/unital flags at kChannelFlagTol.
  static KrausChannel from_operators(std::vector<Matrix> ops, Eigen::Index in_dim,
                                     Eigen::Index out_dim);

  Matrix apply(const Matrix& x) const;
  Matrix identity_image() const;  // Σ F F*
  Matrix dual_identity() const;   // Σ F* F
  double tp_residual() const;      // ‖Σ F*F − I_n‖_F
  double unital_residual() const;  // ‖Σ F F* − I_m‖_F
};

struct ChoiMatrix {
  Eigen::Index in_dim = 0;
  Eigen::Index out_dim = 0;
  Matrix j;

  Matrix block(Eigen::Index a, Eigen::Index b) const {
    return j.block(a * out_dim, b * out_dim, out_dim, out_dim);
  }
  /// T(X) = Σ_ab X_ab T(E_ab), evaluated from the Choi blocks.
  Matrix apply(const Matrix& x) const;
  Matrix output_trace() const { return partial_trace(j, in_dim, out_dim, Subsystem::Second); }
  Matrix input_trace() const { return partial_trace(j, in_dim, out_dim, Subsystem::First); }
};

Matrix apply_channel(const KrausChannel& ch, const Matrix& x);

ChoiMatrix choi_from_kraus(const KrausChannel& ch);

/// Eigendecomposition J = Σ λ_l w_l w_l*; one operator √λ_l·w_l per
/// eigenvalue above 1e-12·max(1, λ_max). Throws NotPSD past psd_tol.
KrausChannel kraus_from_choi(const ChoiMatrix& choi);

/// Kraus operators of the map whose Stinespring isometry sends the columns
/// of `inputs` (n×k) to the columns of `outputs` (m·r×k, read as r blocks of
/// length m). Requires equal Gram matrices; the unitary completion is padded
/// with zero blocks when m·r < n.
KrausChannel channel_from_frames(const Matrix& inputs, const Matrix& outputs,
                                 Eigen::Index out_dim);

/// T(X) = (tr X)·B as Kraus operators √μ_l w_l e_j*.
KrausChannel replacement_channel(Eigen::Index in_dim, const Matrix& b);

}  // namespace qinterp
