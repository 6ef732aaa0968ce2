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

#include "qinterp/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "qinterp/mixed.hpp"
#include "qinterp/qubit.hpp"

namespace qinterp {

Matrix choi_contract(const Matrix& j, const Matrix& x, Eigen::Index n, Eigen::Index m) {
  Matrix out = Matrix::Zero(m, m);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      if (x(a, b) != Complex(0.0)) out += x(a, b) * j.block(a * m, b * m, m, m);
  return out;
}

namespace {

void add_face_vectors(const Matrix& a, const Matrix& b, double tol, std::vector<Vector>& out) {
  const auto ea = herm_eig(a, 1e-8);
  const auto eb = herm_eig(b, 1e-8);
  const double ta = tol * std::max(1.0, ea.values.cwiseAbs().maxCoeff());
  const double tb = tol * std::max(1.0, eb.values.cwiseAbs().maxCoeff());
  if (ea.values(ea.values.size() - 1) < -ta || eb.values(eb.values.size() - 1) < -tb) return;
  for (Eigen::Index s = 0; s < ea.values.size(); ++s) {
    if (ea.values(s) <= ta) continue;
    const Vector u = ea.vectors.col(s).conjugate();
    for (Eigen::Index t = 0; t < eb.values.size(); ++t) {
      if (eb.values(t) > tb) continue;
      Vector w(u.size() * eb.vectors.rows());
      for (Eigen::Index p = 0; p < u.size(); ++p)
        w.segment(p * eb.vectors.rows(), eb.vectors.rows()) = u(p) * eb.vectors.col(t);
      out.push_back(std::move(w));
    }
  }
}

}  // namespace

Matrix choi_face(const FeasibilityProblem& p, double tol) {
  const Eigen::Index n = p.in_dim();
  const Eigen::Index m = p.out_dim();
  std::vector<Vector> vecs;
  for (std::size_t i = 0; i < p.size(); ++i) add_face_vectors(p.inputs[i], p.targets[i], tol, vecs);
  if (p.identity_image) add_face_vectors(Matrix::Identity(n, n), *p.identity_image, tol, vecs);
  if (vecs.empty()) return Matrix::Identity(n * m, n * m);
  Matrix s(n * m, static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t c = 0; c < vecs.size(); ++c) s.col(static_cast<Eigen::Index>(c)) = vecs[c];
  const auto dec = svd(s);
  Eigen::Index rank = 0;
  const double cut = 1e-10 * std::max(1.0, dec.singular(0));
  while (rank < dec.singular.size() && dec.singular(rank) > cut) ++rank;
  if (rank == 0) return Matrix::Identity(n * m, n * m);
  if (rank == n * m) return Matrix(n * m, 0);
  return orthonormal_complement(dec.u.leftCols(rank));
}

Certificate decide_general(const FeasibilityProblem& p, const OracleOptions& options) {
  p.validate();
  const Eigen::Index n = p.in_dim();
  const Eigen::Index m = p.out_dim();
  const Matrix w = choi_face(p, options.face_tol);
  const Eigen::Index d = w.cols();

  Certificate cert;
  cert.route = "choi-oracle";
  cert.metrics["face_dim"] = static_cast<double>(d);

  auto constraints = [&](const Matrix& j) {
    std::vector<Matrix> parts;
    for (const auto& a : p.inputs) parts.push_back(choi_contract(j, a, n, m));
    if (requires_tp(p.map_class)) parts.push_back(partial_trace(j, n, m, Subsystem::Second));
    if (requires_unital(p.map_class)) parts.push_back(partial_trace(j, n, m, Subsystem::First));
    if (p.identity_image) parts.push_back(choi_contract(j, Matrix::Identity(n, n), n, m));
    return parts;
  };
  std::vector<Matrix> rhs_parts(p.targets.begin(), p.targets.end());
  if (requires_tp(p.map_class)) rhs_parts.push_back(Matrix::Identity(n, n));
  if (requires_unital(p.map_class)) rhs_parts.push_back(Matrix::Identity(m, m));
  if (p.identity_image) rhs_parts.push_back(*p.identity_image);

  auto pack_all = [](const std::vector<Matrix>& parts) {
    Eigen::Index total = 0;
    for (const auto& h : parts) total += HermitianCoordinates::size(h.rows());
    RealVector out(total);
    Eigen::Index off = 0;
    for (const auto& h : parts) {
      const Eigen::Index len = HermitianCoordinates::size(h.rows());
      out.segment(off, len) = HermitianCoordinates::pack(h);
      off += len;
    }
    return out;
  };
  const RealVector rhs = pack_all(rhs_parts);

  if (d == 0) {
    if (rhs.norm() <= options.dykstra.feasible_tol) {
      attach_channel(cert, KrausChannel::from_operators({}, n, m), p);
      return cert;
    }
    cert.verdict = Verdict::Infeasible;
    cert.evidence = "the targets force a zero Choi matrix, which does not meet the constraints";
    return cert;
  }

  const RealMatrix op = assemble_operator(HermitianCoordinates::size(d), [&](const RealVector& z) {
    const Matrix j = w * HermitianCoordinates::unpack(z, d) * w.adjoint();
    return pack_all(constraints(j));
  });
  const AffineSet affine(op, rhs);
  cert.metrics["linear_inconsistency"] = affine.inconsistency();
  if (affine.inconsistency() > options.dykstra.feasible_tol) {
    cert.verdict = Verdict::Infeasible;
    std::ostringstream os;
    os << "linear constraints are inconsistent on the admissible face (least-squares residual "
       << affine.inconsistency() << ")";
    cert.evidence = os.str();
    return cert;
  }

  double scale = 1.0 / static_cast<double>(m);
  if (!requires_tp(p.map_class)) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      num += std::abs(p.targets[i].trace().real());
      den += std::abs(p.inputs[i].trace().real()) * static_cast<double>(m);
    }
    if (den > 0.0 && num > 0.0) scale = num / den;
  }
  const RealVector start = HermitianCoordinates::pack(scale * Matrix::Identity(d, d));
  const std::vector<Projector> sets = {
      [&](const RealVector& x) { return affine.project(x); },
      [&](const RealVector& x) { return project_psd_block(x, d); },
  };
  const auto residual_fn = [&](const RealVector& x) { return affine.residual(x); };
  DykstraOptions first = options.dykstra;
  first.max_iter = std::min(options.dykstra.max_iter, options.warm_iter);
  DykstraResult run = cyclic_dykstra(start, sets, residual_fn, first);
  int polish_iters = 0;
  auto polish = [&]() {
    const FactorPolishResult pol = polish_psd_factors(
        op, rhs, run.point, {PsdBlock{d, 0}},
        options.dykstra.feasible_tol * options.dykstra.polish, options.polish_iter);
    polish_iters += pol.iterations;
    if (pol.residual < run.residual) {
      run.point = pol.point;
      run.residual = pol.residual;
    }
  };
  if (run.stop != DykstraStop::Converged) polish();
  if (run.stop == DykstraStop::IterationCap && run.residual >= options.dykstra.feasible_tol &&
      first.max_iter < options.dykstra.max_iter) {
    DykstraOptions rest = options.dykstra;
    rest.max_iter = options.dykstra.max_iter - first.max_iter;
    const int done = run.iterations;
    run = cyclic_dykstra(run.point, sets, residual_fn, rest);
    run.iterations += done;
    if (run.stop != DykstraStop::Converged) polish();
  }
  cert.iterations = run.iterations;
  cert.metrics["gap"] = run.gap;
  cert.metrics["constraint_residual"] = run.residual;
  cert.metrics["polish_iterations"] = polish_iters;

  if (run.residual < options.dykstra.feasible_tol) {
    const Matrix z = HermitianCoordinates::unpack(run.point, d);
    const ChoiMatrix choi{n, m, hermitian_part(w * z * w.adjoint())};
    attach_channel(cert, kraus_from_choi(choi), p);
    return cert;
  }
  if (run.stop == DykstraStop::Stalled) {
    cert.verdict = Verdict::Infeasible;
    std::ostringstream os;
    os << "projections stalled with inter-set gap " << run.gap << " after " << run.iterations
       << " sweeps";
    cert.evidence = os.str();
    return cert;
  }
  cert.verdict = Verdict::Indeterminate;
  std::ostringstream os;
  os << "iteration cap reached with constraint residual " << run.residual << " and gap "
     << run.gap;
  cert.evidence = os.str();
  return cert;
}

std::vector<ScreenResult> screen(const FeasibilityProblem& p, double boundary_tol) {
  std::vector<ScreenResult> out;
  if (!requires_tp(p.map_class)) return out;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      ScreenResult r = check_trace_norm_condition(p.inputs[i], p.inputs[j], p.targets[i],
                                                  p.targets[j], {}, boundary_tol);
      r.i = i;
      r.j = j;
      out.push_back(std::move(r));
    }
  out.push_back(fidelity_screen(p.inputs, p.targets, boundary_tol));
  return out;
}

}  // namespace qinterp
