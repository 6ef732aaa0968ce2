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

#include "qinterp/route.hpp"

#include <sstream>

#include "qinterp/mixed.hpp"
#include "qinterp/oracle.hpp"
#include "qinterp/pure.hpp"
#include "qinterp/qubit.hpp"
#include "qinterp/states.hpp"

namespace qinterp {

void validate_for_class(const FeasibilityProblem& p) {
  p.validate();
  const bool tp = requires_tp(p.map_class);
  auto check = [&](const Matrix& a, const std::string& what) {
    if (tp) {
      try {
        DensityMatrix::validate(a);
      } catch (const Error& e) {
        throw Error(e.code(), what + ": " + e.what());
      }
    } else if (!is_psd(a)) {
      throw Error(ErrorCode::NotPSD, what + " is not positive semidefinite");
    }
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    check(p.inputs[i], "input " + std::to_string(i));
    check(p.targets[i], "target " + std::to_string(i));
  }
  if (p.identity_image && !is_psd(*p.identity_image)) {
    throw Error(ErrorCode::NotPSD, "prescribed identity image is not positive semidefinite");
  }
}

IndependentSubset independent_inputs(const std::vector<Matrix>& inputs, double tol) {
  IndependentSubset out;
  Matrix basis;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Vector v = Eigen::Map<const Vector>(inputs[i].data(), inputs[i].size());
    if (basis.cols() > 0) {
      const Vector c = basis.colPivHouseholderQr().solve(v);
      if ((basis * c - v).norm() <= tol * std::max(1.0, v.norm())) {
        out.dependent.emplace_back(i, std::vector<Complex>(c.data(), c.data() + c.size()));
        continue;
      }
    } else if (v.norm() <= tol) {
      out.dependent.emplace_back(i, std::vector<Complex>{});
      continue;
    }
    basis.conservativeResize(v.size(), basis.cols() + 1);
    basis.col(basis.cols() - 1) = v;
    out.kept.push_back(i);
  }
  return out;
}

namespace {

OracleOptions oracle_options(const DecideOptions& o) {
  OracleOptions opt;
  opt.dykstra.feasible_tol = o.tol;
  opt.dykstra.max_iter = o.max_iter;
  return opt;
}

PureOptions pure_options(const DecideOptions& o) {
  PureOptions opt;
  opt.boundary_tol = o.boundary_tol;
  opt.dykstra.feasible_tol = o.tol;
  opt.dykstra.max_iter = o.max_iter;
  return opt;
}

bool rank_at_most_one(const Matrix& a) {
  const auto eig = herm_eig(a, 1e-8);
  return eig.values.size() < 2 || eig.values(1) <= psd_tolerance(eig.values);
}

std::optional<Certificate> qubit_route(const FeasibilityProblem& p, const DecideOptions& o) {
  const IndependentSubset sub = independent_inputs(p.inputs);
  for (const auto& [idx, coef] : sub.dependent) {
    Matrix expected = Matrix::Zero(2, 2);
    double weight = 1.0;
    for (std::size_t t = 0; t < coef.size(); ++t) {
      expected += coef[t] * p.targets[sub.kept[t]];
      weight += std::abs(coef[t]);
    }
    const double defect = (expected - p.targets[idx]).norm();
    if (defect > o.boundary_tol * weight) {
      std::ostringstream os;
      os << "input " << idx << " is a linear combination of other inputs but target " << idx
         << " is not the same combination (defect " << defect << ")";
      Certificate c = infeasible("linear-consistency", os.str());
      c.metrics["dependency_defect"] = defect;
      return c;
    }
  }
  QubitProblem q;
  for (std::size_t i : sub.kept) {
    q.inputs.push_back(DensityMatrix::validate(p.inputs[i]));
    q.targets.push_back(DensityMatrix::validate(p.targets[i]));
  }
  QubitOptions qo;
  qo.boundary_tol = o.boundary_tol;
  try {
    switch (q.inputs.size()) {
      case 1: return decide_qubit_k1(q.targets[0]);
      case 2: return decide_qubit_k2(q.inputs[0], q.inputs[1], q.targets[0], q.targets[1], qo);
      case 3: return decide_qubit_k3(q, qo);
      case 4: return decide_qubit_k4(q, qo);
      default: return std::nullopt;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LinearlyDependent || e.code() == ErrorCode::DecompositionDegenerate) {
      return std::nullopt;
    }
    throw;
  }
}

std::optional<Certificate> pure_route(const FeasibilityProblem& p, const DecideOptions& o,
                                      std::vector<std::string>& notes) {
  for (const auto& a : p.inputs)
    if (!rank_at_most_one(a)) return std::nullopt;
  bool pure_targets = true;
  for (const auto& b : p.targets) pure_targets = pure_targets && rank_at_most_one(b);

  const auto k = static_cast<Eigen::Index>(p.size());
  Matrix x(p.in_dim(), k);
  for (Eigen::Index i = 0; i < k; ++i) x.col(i) = rank_one_factor(p.inputs[static_cast<std::size_t>(i)]);
  const PureOptions po = pure_options(o);

  if (!pure_targets) {
    if (p.map_class != MapClass::TPCP || p.identity_image) return std::nullopt;
    CorrelationFormResult r = correlation_form_check(x, p.targets, po);
    if (r.sufficient_condition_met) return r.certificate;
    notes.push_back("correlation form on canonical purifications: " + r.certificate.evidence);
    return std::nullopt;
  }
  GramPair g;
  g.x = x;
  g.y.resize(p.out_dim(), k);
  for (Eigen::Index i = 0; i < k; ++i) g.y.col(i) = rank_one_factor(p.targets[static_cast<std::size_t>(i)]);

  switch (p.map_class) {
    case MapClass::TPCP:
      if (p.identity_image) return std::nullopt;
      return decide_pure_tpcp(g, po);
    case MapClass::CP:
      if (p.identity_image) return decide_pure_cp_with_target(g, *p.identity_image, po);
      return decide_pure_cp(g, po);
    case MapClass::UCP:
      if (p.identity_image) return std::nullopt;
      return decide_pure_unital_cp(g, po);
    case MapClass::UTPCP:
      if (p.identity_image) return std::nullopt;
      return decide_pure_unital_tpcp(g, po);
  }
  return std::nullopt;
}

}  // namespace

Certificate decide_with_oracle(const FeasibilityProblem& p, const DecideOptions& options) {
  validate_for_class(p);
  return decide_general(p, oracle_options(options));
}

Certificate decide(const FeasibilityProblem& p, const DecideOptions& options) {
  validate_for_class(p);
  std::vector<ScreenResult> screens;
  if (!options.force_oracle) {
    screens = screen(p, options.boundary_tol);
    for (const auto& s : screens) {
      if (s.passed) continue;
      Certificate c = infeasible("screen:" + s.name, s.name + " necessary condition fails: " + s.detail);
      c.screeners = screens;
      return c;
    }
  }

  std::optional<Certificate> fast;
  std::vector<std::string> notes;
  if (!options.force_oracle) {
    const bool qubit = p.in_dim() == 2 && p.out_dim() == 2 && p.map_class == MapClass::TPCP &&
                       !p.identity_image;
    if (qubit) fast = qubit_route(p, options);
    if (!fast) fast = pure_route(p, options, notes);
  }
  if (fast && fast->channel) attach_channel(*fast, *fast->channel, p);
  if (fast && fast->verdict != Verdict::Indeterminate) {
    fast->screeners = screens;
    fast->warnings.insert(fast->warnings.end(), notes.begin(), notes.end());
    return *fast;
  }
  if (fast) notes.push_back(fast->route + " was inconclusive: " + fast->evidence);

  Certificate c = decide_general(p, oracle_options(options));
  c.screeners = screens;
  c.warnings.insert(c.warnings.end(), notes.begin(), notes.end());
  return c;
}

}  // namespace qinterp
