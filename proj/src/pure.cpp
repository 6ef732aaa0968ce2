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

#include "qinterp/pure.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

#include "qinterp/channel.hpp"

namespace qinterp {

GramPair GramPair::from_columns(const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw Error(ErrorCode::ShapeMismatch, "GramPair needs equally many nonempty columns");
  }
  GramPair g;
  const auto k = static_cast<Eigen::Index>(xs.size());
  g.x.resize(xs.front().size(), k);
  g.y.resize(ys.front().size(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (xs[u].size() != g.x.rows() || ys[u].size() != g.y.rows()) {
      throw Error(ErrorCode::ShapeMismatch, "GramPair columns have inconsistent lengths");
    }
    g.x.col(i) = xs[u];
    g.y.col(i) = ys[u];
  }
  return g;
}

FeasibilityProblem GramPair::as_problem(MapClass c, const std::optional<Matrix>& identity_image) const {
  FeasibilityProblem p;
  p.map_class = c;
  p.identity_image = identity_image;
  for (Eigen::Index i = 0; i < k(); ++i) {
    p.inputs.push_back(x.col(i) * x.col(i).adjoint());
    p.targets.push_back(y.col(i) * y.col(i).adjoint());
  }
  return p;
}

Matrix kernel_face(const Matrix& gx, const Matrix& y, double kernel_tol) {
  const Eigen::Index k = gx.rows();
  const auto eig = herm_eig(gx, 1e-8);
  const double cut = kernel_tol * std::max(eig.values(0), 0.0);
  std::vector<Vector> kernel;
  for (Eigen::Index s = 0; s < k; ++s)
    if (eig.values(s) <= cut) kernel.push_back(eig.vectors.col(s));
  if (kernel.empty()) return Matrix::Identity(k, k);
  const Eigen::Index m = y.rows();
  Matrix stack(m * static_cast<Eigen::Index>(kernel.size()), k);
  for (std::size_t t = 0; t < kernel.size(); ++t)
    stack.middleRows(static_cast<Eigen::Index>(t) * m, m) = y * kernel[t].asDiagonal();
  return null_space(stack, 1e-10).conjugate();
}

Matrix correlation_factor(const Matrix& m) {
  const auto eig = herm_eig(hermitian_part(m), 1e-8);
  const double cut = 1e-12 * std::max(1.0, eig.values(0));
  Eigen::Index r = 0;
  while (r < eig.values.size() && eig.values(r) > cut) ++r;
  Matrix c(r, m.cols());
  for (Eigen::Index l = 0; l < r; ++l)
    c.row(l) = std::sqrt(eig.values(l)) * eig.vectors.col(l).adjoint();
  return c;
}

Matrix tensor_frame(const Matrix& c, const Matrix& y) {
  Matrix out(c.rows() * y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.cols(); ++i)
    for (Eigen::Index l = 0; l < c.rows(); ++l)
      out.col(i).segment(l * y.rows(), y.rows()) = c(l, i) * y.col(i);
  return out;
}

namespace {

struct CorrelationSpec {
  Matrix face;
  std::vector<std::tuple<Eigen::Index, Eigen::Index, Complex>> fixed;
  std::optional<Matrix> b;
  Matrix y;
  Matrix h;
  bool slack_equality = false;
};

CorrelationOutcome solve_correlation(const CorrelationSpec& spec, const PureOptions& opt) {
  CorrelationOutcome out;
  const Eigen::Index k = spec.face.rows();
  const Eigen::Index d = spec.face.cols();
  if (d == 0) {
    out.verdict = Verdict::Infeasible;
    out.evidence = "kernel condition forces M = 0, which has no unit diagonal";
    return out;
  }
  const bool slack = spec.b.has_value();
  const bool slack_var = slack && !spec.slack_equality;
  const Eigen::Index mz = d * d;
  const Eigen::Index mdim = slack ? spec.b->rows() : 0;
  const Eigen::Index ms = slack_var ? mdim * mdim : 0;
  const Eigen::Index rows =
      k + 2 * static_cast<Eigen::Index>(spec.fixed.size()) + (slack ? mdim * mdim : 0);

  auto m_of = [&](const RealVector& v) {
    return Matrix(spec.face * HermitianCoordinates::unpack(v, d, 0) * spec.face.adjoint());
  };
  auto image = [&](const Matrix& m) {
    return Matrix(spec.y * hadamard(m.conjugate(), spec.h) * spec.y.adjoint());
  };
  auto linear = [&](const RealVector& v) {
    const Matrix m = m_of(v);
    RealVector r(rows);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < k; ++i) r(idx++) = m(i, i).real();
    for (const auto& [i, j, val] : spec.fixed) {
      r(idx++) = m(i, j).real();
      r(idx++) = m(i, j).imag();
    }
    if (slack) {
      Matrix t = image(m);
      if (slack_var) t += HermitianCoordinates::unpack(v, mdim, mz);
      r.segment(idx, mdim * mdim) = HermitianCoordinates::pack(hermitian_part(t));
    }
    return r;
  };
  RealVector rhs(rows);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < k; ++i) rhs(idx++) = 1.0;
  for (const auto& [i, j, val] : spec.fixed) {
    rhs(idx++) = val.real();
    rhs(idx++) = val.imag();
  }
  if (slack) rhs.segment(idx, mdim * mdim) = HermitianCoordinates::pack(hermitian_part(*spec.b));

  const RealMatrix op = assemble_operator(mz + ms, linear);
  const AffineSet affine(op, rhs);
  if (affine.inconsistency() > opt.dykstra.feasible_tol) {
    out.verdict = Verdict::Infeasible;
    std::ostringstream os;
    os << "linear conditions on M are inconsistent (least-squares residual "
       << affine.inconsistency() << ")";
    out.evidence = os.str();
    out.residual = affine.inconsistency();
    return out;
  }

  RealVector start(mz + ms);
  start.head(mz) = HermitianCoordinates::pack(Matrix::Identity(d, d));
  if (slack_var) {
    const Matrix m0 = spec.face * spec.face.adjoint();
    start.tail(ms) = HermitianCoordinates::pack(project_psd(hermitian_part(*spec.b - image(m0))));
  }
  std::vector<Projector> sets = {
      [&](const RealVector& v) { return affine.project(v); },
      [&](const RealVector& v) { return project_psd_block(v, d, 0); },
  };
  if (slack_var) sets.push_back([&](const RealVector& v) { return project_psd_block(v, mdim, mz); });
  DykstraResult run = cyclic_dykstra(
      start, sets, [&](const RealVector& v) { return affine.residual(v); }, opt.dykstra);
  if (run.stop != DykstraStop::Converged) {
    std::vector<PsdBlock> blocks = {{d, 0}};
    if (slack_var) blocks.push_back({mdim, mz});
    const FactorPolishResult pol = polish_psd_factors(
        op, rhs, run.point, blocks, opt.dykstra.feasible_tol * opt.dykstra.polish);
    if (pol.residual < run.residual) {
      run.point = pol.point;
      run.residual = pol.residual;
    }
  }
  out.iterations = run.iterations;
  out.residual = run.residual;
  out.gap = run.gap;

  if (run.residual < opt.dykstra.feasible_tol) {
    Matrix m = hermitian_part(m_of(run.point));
    RealVector scale(k);
    for (Eigen::Index i = 0; i < k; ++i) scale(i) = 1.0 / std::sqrt(std::max(m(i, i).real(), 1e-300));
    m = scale.cast<Complex>().asDiagonal() * m * scale.cast<Complex>().asDiagonal();
    out.m = m;
    if (slack) out.slack = hermitian_part(*spec.b - image(m));
    out.verdict = Verdict::Feasible;
    return out;
  }
  std::ostringstream os;
  if (run.stop == DykstraStop::Stalled) {
    out.verdict = Verdict::Infeasible;
    os << "projections stalled with inter-set gap " << run.gap << " after " << run.iterations
       << " sweeps";
  } else {
    out.verdict = Verdict::Indeterminate;
    os << "iteration cap reached with residual " << run.residual;
  }
  out.evidence = os.str();
  return out;
}

// Forced entries of M from gx = M ∘ gy; fails when gy vanishes where gx does not.
bool forced_entries(const Matrix& gx, const Matrix& gy, const PureOptions& opt,
                    CorrelationSpec& spec, CorrelationOutcome& out) {
  const Eigen::Index k = gx.rows();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(gx(i, i) - gy(i, i)) > opt.boundary_tol) {
      std::ostringstream os;
      os << "state " << i << " changes norm: (X*X)_ii = " << gx(i, i).real()
         << ", (Y*Y)_ii = " << gy(i, i).real();
      out.verdict = Verdict::Infeasible;
      out.evidence = os.str();
      return false;
    }
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double mag = std::abs(gy(i, j));
      if (mag <= opt.zero_tol) {
        if (std::abs(gx(i, j)) > opt.boundary_tol) {
          std::ostringstream os;
          os << "(Y*Y)_" << i << j << " = 0 but (X*X)_" << i << j << " = " << std::abs(gx(i, j));
          out.verdict = Verdict::Infeasible;
          out.evidence = os.str();
          return false;
        }
        continue;
      }
      if (mag < opt.warn_tol) {
        std::ostringstream os;
        os << "ill-conditioned quotient at (" << i << "," << j << "): |(Y*Y)_ij| = " << mag;
        out.warnings.push_back(os.str());
      }
      spec.fixed.emplace_back(i, j, gx(i, j) / gy(i, j));
    }
  }
  return true;
}

}  // namespace

CorrelationOutcome find_hadamard_correlation(const Matrix& gx, const Matrix& y,
                                             const PureOptions& options) {
  const Matrix gy = y.adjoint() * y;
  const Eigen::Index k = gx.rows();
  CorrelationOutcome out;
  CorrelationSpec spec;
  if (!forced_entries(gx, gy, options, spec, out)) return out;

  if (static_cast<Eigen::Index>(spec.fixed.size()) == k * (k - 1) / 2) {
    Matrix m = Matrix::Identity(k, k);
    for (const auto& [i, j, val] : spec.fixed) {
      m(i, j) = val;
      m(j, i) = std::conj(val);
    }
    out.fast_path = true;
    out.min_eigenvalue = herm_eig(m).values(k - 1);
    if (out.min_eigenvalue < -options.boundary_tol) {
      std::ostringstream os;
      os << "forced correlation matrix has negative eigenvalue " << out.min_eigenvalue;
      out.verdict = Verdict::Infeasible;
      out.evidence = os.str();
      return out;
    }
    if (out.min_eigenvalue < 0.0) {
      m = project_psd(m);
      RealVector scale(k);
      for (Eigen::Index i = 0; i < k; ++i) scale(i) = 1.0 / std::sqrt(m(i, i).real());
      m = scale.cast<Complex>().asDiagonal() * m * scale.cast<Complex>().asDiagonal();
    }
    out.m = m;
    out.verdict = Verdict::Feasible;
    return out;
  }

  spec.face = kernel_face(gx, y, options.kernel_tol);
  spec.y = y;
  auto warnings = std::move(out.warnings);
  out = solve_correlation(spec, options);
  out.warnings = std::move(warnings);
  return out;
}

namespace {

void require_unit_columns(const Matrix& a, const char* what, double tol) {
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double norm = a.col(i).norm();
    if (std::abs(norm - 1.0) > tol) {
      std::ostringstream os;
      os << what << " " << i << " has norm " << norm << ", expected 1";
      throw Error(ErrorCode::NotNormalized, os.str());
    }
  }
}

void copy_outcome(const CorrelationOutcome& o, Certificate& cert) {
  cert.iterations = o.iterations;
  cert.warnings = o.warnings;
  if (o.fast_path) {
    cert.metrics["forced_min_eigenvalue"] = o.min_eigenvalue;
  } else {
    cert.metrics["constraint_residual"] = o.residual;
    cert.metrics["gap"] = o.gap;
  }
  if (o.verdict != Verdict::Feasible) {
    cert.verdict = o.verdict;
    cert.evidence = o.evidence;
  }
}

// F_j = Y Γ_j X⁺ with (Γ_j)_ii = C_ji.
std::vector<Matrix> diagonal_family(const GramPair& g, const Matrix& m, double rcond) {
  const Matrix c = correlation_factor(m);
  const Matrix xp = pinv(g.x, rcond);
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    const Vector row = c.row(j).transpose();
    ops.push_back(g.y * row.asDiagonal() * xp);
  }
  return ops;
}

Eigen::Index numerical_rank(const Matrix& a, double rel) {
  if (a.size() == 0) return 0;
  const auto dec = svd(a);
  Eigen::Index r = 0;
  while (r < dec.singular.size() && dec.singular(r) > rel * std::max(dec.singular(0), 1e-300)) ++r;
  return r;
}

// Shared body of the prescribed-T(I) deciders: M from the correlation
// search, then {Y Γ_j X⁺} together with √(μ_l/p)·w_l u_a* covering the slack.
Certificate decide_with_slack(const GramPair& g, const Matrix& b, bool trace_preserving,
                              MapClass cls, bool prescribed, const char* route,
                              const PureOptions& opt) {
  Certificate cert;
  cert.route = route;
  const Matrix gx = g.gx();
  const Eigen::Index n = g.x.rows();
  const Eigen::Index rank_x = numerical_rank(g.x, std::sqrt(opt.kernel_tol));

  CorrelationSpec spec;
  CorrelationOutcome pre;
  if (trace_preserving && !forced_entries(gx, g.gy(), opt, spec, pre)) {
    copy_outcome(pre, cert);
    return cert;
  }
  spec.face = kernel_face(gx, g.y, opt.kernel_tol);
  spec.b = b;
  spec.y = g.y;
  spec.h = pinv(gx, opt.kernel_tol);
  spec.slack_equality = rank_x == n;
  CorrelationOutcome o = solve_correlation(spec, opt);
  o.warnings.insert(o.warnings.begin(), pre.warnings.begin(), pre.warnings.end());
  copy_outcome(o, cert);
  cert.metrics["equality_branch"] = spec.slack_equality ? 1.0 : 0.0;
  if (o.verdict != Verdict::Feasible) return cert;
  cert.correlation = o.m;

  std::vector<Matrix> ops = diagonal_family(g, o.m, std::sqrt(opt.kernel_tol));
  const Eigen::Index p = n - rank_x;
  if (p > 0) {
    const auto dec = svd(g.x);
    const Matrix perp = dec.u.rightCols(p);
    const auto eig = herm_eig(o.slack, 1e-8);
    const double cut = psd_tolerance(eig.values);
    for (Eigen::Index l = 0; l < eig.values.size(); ++l) {
      if (eig.values(l) <= cut) continue;
      const Vector w = std::sqrt(eig.values(l) / static_cast<double>(p)) * eig.vectors.col(l);
      for (Eigen::Index a = 0; a < p; ++a) ops.push_back(w * perp.col(a).adjoint());
    }
  }
  const FeasibilityProblem prob =
      g.as_problem(cls, prescribed ? std::optional<Matrix>(b) : std::nullopt);
  attach_channel(cert, KrausChannel::from_operators(std::move(ops), n, g.y.rows()), prob);
  return cert;
}

}  // namespace

Certificate decide_pure_tpcp(const GramPair& g, const PureOptions& options) {
  require_unit_columns(g.x, "input", options.norm_tol);
  require_unit_columns(g.y, "target", options.norm_tol);
  Certificate cert;
  cert.route = "pure-tpcp";
  const CorrelationOutcome o = find_hadamard_correlation(g.gx(), g.y, options);
  copy_outcome(o, cert);
  if (o.verdict != Verdict::Feasible) return cert;
  cert.correlation = o.m;
  const Matrix frame = tensor_frame(correlation_factor(o.m), g.y);
  attach_channel(cert, channel_from_frames(g.x, frame, g.y.rows()), g.as_problem(MapClass::TPCP));
  return cert;
}

Certificate decide_pure_cp(const GramPair& g, const PureOptions& options) {
  Certificate cert;
  cert.route = "pure-cp";
  CorrelationSpec spec;
  spec.face = kernel_face(g.gx(), g.y, options.kernel_tol);
  const CorrelationOutcome o = solve_correlation(spec, options);
  copy_outcome(o, cert);
  if (o.verdict != Verdict::Feasible) return cert;
  cert.correlation = o.m;
  attach_channel(cert,
                 KrausChannel::from_operators(diagonal_family(g, o.m, std::sqrt(options.kernel_tol)),
                                              g.x.rows(), g.y.rows()),
                 g.as_problem(MapClass::CP));
  return cert;
}

Certificate decide_pure_cp_with_target(const GramPair& g, const Matrix& b,
                                       const PureOptions& options) {
  if (b.rows() != g.y.rows() || b.cols() != g.y.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "prescribed identity image has wrong shape");
  }
  require_hermitian(b, kHermitianTol, "prescribed identity image");
  return decide_with_slack(g, b, false, MapClass::CP, true, "pure-cp-target", options);
}

Certificate decide_pure_unital_cp(const GramPair& g, const PureOptions& options) {
  const Eigen::Index m = g.y.rows();
  return decide_with_slack(g, Matrix::Identity(m, m), false, MapClass::UCP, false, "pure-ucp",
                           options);
}

Certificate decide_pure_unital_tpcp(const GramPair& g, const PureOptions& options) {
  require_unit_columns(g.x, "input", options.norm_tol);
  require_unit_columns(g.y, "target", options.norm_tol);
  if (g.x.rows() != g.y.rows()) {
    std::ostringstream os;
    os << "unital trace-preserving maps need equal dimensions (n = " << g.x.rows()
       << ", m = " << g.y.rows() << ")";
    return infeasible("pure-utpcp", os.str());
  }
  const Eigen::Index m = g.y.rows();
  return decide_with_slack(g, Matrix::Identity(m, m), true, MapClass::UTPCP, false, "pure-utpcp",
                           options);
}

}  // namespace qinterp
