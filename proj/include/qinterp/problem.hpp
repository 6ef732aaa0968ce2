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

// Interpolation problems, verdicts and certificates.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qinterp/channel.hpp"

namespace qinterp {

enum class MapClass { CP, TPCP, UCP, UTPCP };

const char* to_string(MapClass c);
MapClass map_class_from_string(const std::string& s);  // throws InvalidInput
bool requires_tp(MapClass c);
bool requires_unital(MapClass c);

inline constexpr double kVerifyTol = 1e-7;
inline constexpr double kBoundaryTol = 1e-7;

/// Find a map of class `map_class` with T(inputs[i]) = targets[i], and
/// T(I) = identity_image when one is prescribed.
struct FeasibilityProblem {
  std::vector<Matrix> inputs;
  std::vector<Matrix> targets;
  MapClass map_class = MapClass::TPCP;
  std::optional<Matrix> identity_image;

  Eigen::Index in_dim() const { return inputs.empty() ? 0 : inputs.front().rows(); }
  Eigen::Index out_dim() const { return targets.empty() ? 0 : targets.front().rows(); }
  std::size_t size() const { return inputs.size(); }

  /// Shape and Hermiticity checks; throws ShapeMismatch / NotHermitian / InvalidInput.
  void validate() const;
};

enum class Verdict { Feasible, Infeasible, Indeterminate };
const char* to_string(Verdict v);
int exit_code(Verdict v);

struct ScreenResult {
  std::string name;
  bool passed = true;
  std::size_t i = 0;
  std::size_t j = 0;
  double t = 0.0;       // trace-norm screener: worst t
  double margin = 0.0;  // negative when violated
  std::string detail;
};

struct Residuals {
  double interpolation = 0.0;  // max_i ‖T(A_i) − B_i‖_F
  double tp = 0.0;             // ‖Σ F*F − I‖_F
  double unital = 0.0;         // ‖Σ FF* − I‖_F
  double identity_image = 0.0; // ‖Σ FF* − B‖_F, prescribed T(I) only
};

Residuals compute_residuals(const KrausChannel& ch, const FeasibilityProblem& p);

/// Residuals relevant to the problem's class are all ≤ tol.
bool residuals_pass(const Residuals& r, const FeasibilityProblem& p, double tol = kVerifyTol);

struct Certificate {
  Verdict verdict = Verdict::Indeterminate;
  std::string route;
  std::optional<KrausChannel> channel;
  Residuals residuals;
  std::optional<Matrix> correlation;
  std::vector<ScreenResult> screeners;
  std::string evidence;
  std::map<std::string, double> metrics;
  long iterations = 0;
  std::vector<std::string> warnings;
};

/// Attaches `ch`, computes residuals and sets FEASIBLE when they pass;
/// otherwise INDETERMINATE with the failing residuals named in evidence.
void attach_channel(Certificate& cert, KrausChannel ch, const FeasibilityProblem& p,
                    double tol = kVerifyTol);

Certificate infeasible(std::string route, std::string evidence);

}  // namespace qinterp
