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

#include "qinterp/problem.hpp"

#include <sstream>

namespace qinterp {

const char* to_string(MapClass c) {
  switch (c) {
    case MapClass::CP: return "CP";
    case MapClass::TPCP: return "TPCP";
    case MapClass::UCP: return "UCP";
    case MapClass::UTPCP: return "UTPCP";
  }
  return "?";
}

MapClass map_class_from_string(const std::string& s) {
  if (s == "CP") return MapClass::CP;
  if (s == "TPCP") return MapClass::TPCP;
  if (s == "UCP") return MapClass::UCP;
  if (s == "UTPCP") return MapClass::UTPCP;
  throw Error(ErrorCode::InvalidInput, "unknown map class '" + s + "'");
}

bool requires_tp(MapClass c) { return c == MapClass::TPCP || c == MapClass::UTPCP; }
bool requires_unital(MapClass c) { return c == MapClass::UCP || c == MapClass::UTPCP; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "FEASIBLE";
    case Verdict::Infeasible: return "INFEASIBLE";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return 0;
    case Verdict::Infeasible: return 1;
    case Verdict::Indeterminate: return 2;
  }
  return 2;
}

void FeasibilityProblem::validate() const {
  if (inputs.empty()) throw Error(ErrorCode::InvalidInput, "problem has no input states");
  if (inputs.size() != targets.size()) {
    throw Error(ErrorCode::ShapeMismatch, "number of inputs and targets differ");
  }
  const Eigen::Index n = in_dim();
  const Eigen::Index m = out_dim();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].rows() != n || inputs[i].cols() != n) {
      throw Error(ErrorCode::ShapeMismatch, "input " + std::to_string(i) + " has wrong shape");
    }
    if (targets[i].rows() != m || targets[i].cols() != m) {
      throw Error(ErrorCode::ShapeMismatch, "target " + std::to_string(i) + " has wrong shape");
    }
    require_hermitian(inputs[i], kHermitianTol, "input " + std::to_string(i));
    require_hermitian(targets[i], kHermitianTol, "target " + std::to_string(i));
  }
  if (identity_image) {
    if (identity_image->rows() != m || identity_image->cols() != m) {
      throw Error(ErrorCode::ShapeMismatch, "prescribed identity image has wrong shape");
    }
    require_hermitian(*identity_image, kHermitianTol, "prescribed identity image");
  }
}

Residuals compute_residuals(const KrausChannel& ch, const FeasibilityProblem& p) {
  Residuals r;
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    r.interpolation = std::max(r.interpolation, (ch.apply(p.inputs[i]) - p.targets[i]).norm());
  }
  r.tp = ch.tp_residual();
  r.unital = ch.unital_residual();
  if (p.identity_image) r.identity_image = (ch.identity_image() - *p.identity_image).norm();
  return r;
}

bool residuals_pass(const Residuals& r, const FeasibilityProblem& p, double tol) {
  if (!(r.interpolation <= tol)) return false;
  if (requires_tp(p.map_class) && !(r.tp <= tol)) return false;
  if (requires_unital(p.map_class) && !(r.unital <= tol)) return false;
  if (p.identity_image && !(r.identity_image <= tol)) return false;
  return true;
}

void attach_channel(Certificate& cert, KrausChannel ch, const FeasibilityProblem& p, double tol) {
  cert.residuals = compute_residuals(ch, p);
  cert.channel = std::move(ch);
  if (residuals_pass(cert.residuals, p, tol)) {
    cert.verdict = Verdict::Feasible;
    return;
  }
  cert.verdict = Verdict::Indeterminate;
  std::ostringstream os;
  os << "constructed channel failed verification (interpolation " << cert.residuals.interpolation
     << ", tp " << cert.residuals.tp << ", unital " << cert.residuals.unital << ", identity image "
     << cert.residuals.identity_image << ")";
  cert.evidence = os.str();
}

Certificate infeasible(std::string route, std::string evidence) {
  Certificate c;
  c.verdict = Verdict::Infeasible;
  c.route = std::move(route);
  c.evidence = std::move(evidence);
  return c;
}

}  // namespace qinterp
