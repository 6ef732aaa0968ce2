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

// Mixed-target machinery: the fidelity screener, purification and
// partial-isometry certificates for pure inputs, the spectral-block
// certificate for mixed inputs, and the correlation form on canonical
// purifications.

#include <optional>
#include <vector>

#include "qinterp/pure.hpp"
#include "qinterp/states.hpp"

namespace qinterp {

/// F(B_i, B_j) ≥ F(A_i, A_j) for all pairs; reports the pair with the
/// smallest margin.
ScreenResult fidelity_screen(const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets,
                             double boundary_tol = kBoundaryTol);

struct PurificationCertificate {
  std::vector<Purification> purifications;  // one per input, shared ancilla size
  Matrix gram_check;                        // X*X − Y*Y at extraction
};

struct PurificationCheck {
  bool valid = false;
  double reduction_residual = 0.0;  // max_i ‖Σ_j y_ji y_ji* − B_i‖_F
  double gram_residual = 0.0;       // ‖X*X − Y*Y‖_max
  Matrix gram_diff;
  std::optional<KrausChannel> channel;  // built by unitary completion when valid
};

PurificationCheck verify_purification_certificate(const Matrix& x, const std::vector<Matrix>& targets,
                                                  const PurificationCertificate& cert,
                                                  double reduction_tol = 1e-8,
                                                  double gram_tol = kVerifyTol);

/// y_i = V x_i with V the stacked Kraus operators of the Choi-minimized
/// channel. Throws NotTracePreserving past kChannelFlagTol.
PurificationCertificate extract_purification_certificate(const KrausChannel& ch, const Matrix& x);

/// Partial isometries V_i (m×r) with Y_i = √B_i V_i.
struct IsometryCertificate {
  std::vector<Matrix> v;
};

struct IsometryCheck {
  bool valid = false;
  double reduction_residual = 0.0;  // max_i ‖√B_i V_i V_i* √B_i − B_i‖_F
  double gram_residual = 0.0;       // max |x_i*x_j − tr √B_i √B_j V_j V_i*|
};

IsometryCertificate isometry_certificate_from_purifications(const std::vector<Matrix>& targets,
                                                            const PurificationCertificate& cert);

IsometryCheck verify_isometry_certificate(const Matrix& x, const std::vector<Matrix>& targets,
                                          const IsometryCertificate& cert,
                                          double tol = kVerifyTol);

/// V[i][j] is s_i × s for input i and eigen-index j < r_i, relative to the
/// factors A_i = X_i D_i² X_i*, B_i = Y_i D̃_i² Y_i*.
struct GeneralCertificate {
  std::vector<SpectralFactor> input_factors;
  std::vector<SpectralFactor> target_factors;
  std::vector<std::vector<Matrix>> v;
};

struct GeneralCheck {
  bool valid = false;
  double partition_residual = 0.0;  // max_i ‖Σ_j V_ij V_ij* − I‖_F
  double gram_residual = 0.0;       // max over (i, i', p, q) of the trace-matching defect
};

GeneralCheck verify_general_certificate(const std::vector<SpectralFactor>& input_factors,
                                        const std::vector<SpectralFactor>& target_factors,
                                        const std::vector<std::vector<Matrix>>& v,
                                        double tol = kVerifyTol);

/// Factors recomputed from the states.
GeneralCheck verify_general_certificate(const std::vector<Matrix>& inputs,
                                        const std::vector<Matrix>& targets,
                                        const GeneralCertificate& cert, double tol = kVerifyTol);

/// Solves F_l X_i D_i e_j = Y_i D̃_i c_ij^l. Throws InconsistentSystem when the
/// channel does not map A_i to B_i.
GeneralCertificate extract_general_certificate(const KrausChannel& ch,
                                               const std::vector<Matrix>& inputs,
                                               const std::vector<Matrix>& targets,
                                               double tol = kVerifyTol);

struct CorrelationFormResult {
  bool sufficient_condition_met = false;
  Certificate certificate;  // FEASIBLE with channel, or INDETERMINATE
  std::vector<Purification> purifications;
};

/// X*X = M ∘ Y*Y on canonical purifications (W = I, ancilla size m, or 1
/// when every target is pure). A negative outcome does not show infeasibility.
CorrelationFormResult correlation_form_check(const Matrix& x, const std::vector<Matrix>& targets,
                                             const PureOptions& options = {});

}  // namespace qinterp
