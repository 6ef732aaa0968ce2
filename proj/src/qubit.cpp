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

#include "qinterp/qubit.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qinterp/channel.hpp"
#include "qinterp/dykstra.hpp"

namespace qinterp {

QubitProblem QubitProblem::from(const FeasibilityProblem& p) {
  if (p.inputs.size() != p.targets.size()) {
    throw Error(ErrorCode::ShapeMismatch, "number of inputs and targets differ");
  }
  QubitProblem q;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.inputs[i].rows() != 2 || p.targets[i].rows() != 2) {
      throw Error(ErrorCode::ShapeMismatch, "qubit problems need 2x2 states");
    }
    q.inputs.push_back(DensityMatrix::validate(p.inputs[i]));
    q.targets.push_back(DensityMatrix::validate(p.targets[i]));
  }
  return q;
}

FeasibilityProblem QubitProblem::as_problem() const {
  FeasibilityProblem p;
  for (const auto& a : inputs) p.inputs.push_back(a.matrix());
  for (const auto& b : targets) p.targets.push_back(b.matrix());
  p.map_class = MapClass::TPCP;
  return p;
}

namespace {

// Positive t with P − tQ singular.
std::vector<double> pencil_roots(const Matrix& p, const Matrix& q) {
  std::vector<double> out;
  const Matrix m = pinv(q) * p;
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex z = es.eigenvalues()(i);
    if (std::abs(z.imag()) < 1e-8 && z.real() > 0.0 && std::isfinite(z.real())) out.push_back(z.real());
  }
  return out;
}

}  // namespace

ScreenResult check_trace_norm_condition(const Matrix& a1, const Matrix& a2, const Matrix& b1,
                                        const Matrix& b2, const std::vector<double>& t_grid,
                                        double boundary_tol) {
  std::vector<double> ts = t_grid;
  if (ts.empty()) {
    const int points = 200;
    for (int i = 0; i < points; ++i) ts.push_back(std::pow(10.0, -3.0 + 6.0 * i / (points - 1)));
    for (double t : pencil_roots(b1, b2)) ts.push_back(t);
    for (double t : pencil_roots(a1, a2)) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
  }
  auto margin_at = [&](double t) { return trace_norm(a1 - t * a2) - trace_norm(b1 - t * b2); };

  ScreenResult r;
  r.name = "trace-norm";
  double worst = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const double margin = margin_at(t);
    const double scaled = margin / std::max(1.0, t);
    if (scaled < worst) {
      worst = scaled;
      r.t = t;
      r.margin = margin;
    }
  }
  r.passed = worst >= -boundary_tol;
  std::ostringstream os;
  os << "min over t of ||A_i - t A_j||_1 - ||B_i - t B_j||_1 is " << r.margin << " at t = " << r.t;
  r.detail = os.str();
  return r;
}

Certificate decide_qubit_k1(const DensityMatrix& b1) {
  Certificate cert;
  cert.route = "qubit-k1";
  FeasibilityProblem basis;
  basis.map_class = MapClass::TPCP;
  Matrix e11 = Matrix::Zero(2, 2), e22 = Matrix::Zero(2, 2), e12 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  e12(0, 1) = 1.0;
  basis.inputs = {e11, e22, e12};
  basis.targets = {b1.matrix(), b1.matrix(), Matrix::Zero(b1.dim(), b1.dim())};
  attach_channel(cert, replacement_channel(2, b1.matrix()), basis);
  return cert;
}

Certificate decide_qubit_k2(const DensityMatrix& a1, const DensityMatrix& a2,
                            const DensityMatrix& b1, const DensityMatrix& b2,
                            const QubitOptions& options) {
  FeasibilityProblem prob;
  prob.inputs = {a1.matrix(), a2.matrix()};
  prob.targets = {b1.matrix(), b2.matrix()};
  prob.map_class = MapClass::TPCP;

  std::optional<QubitPairReduction> red;
  try {
    red = reduce_qubit_pair(a1, a2);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LinearlyDependent) throw;
    if ((b1.matrix() - b2.matrix()).norm() <= options.boundary_tol) {
      Certificate cert = decide_qubit_k1(b1);
      attach_channel(cert, *cert.channel, prob);
      return cert;
    }
    return infeasible("qubit-k2", "inputs coincide but targets differ");
  }

  Certificate cert;
  cert.route = "qubit-k2";
  auto [r1, r2] = red->apply(b1.matrix(), b2.matrix());
  for (int i = 0; i < 2; ++i) {
    const double low = herm_eig(i == 0 ? r1 : r2).values(1);
    if (low < -options.boundary_tol) {
      std::ostringstream os;
      os << "reduced target " << i + 1 << " has negative eigenvalue " << low;
      cert.verdict = Verdict::Infeasible;
      cert.evidence = os.str();
      cert.metrics["reduced_min_eigenvalue"] = low;
      return cert;
    }
  }
  r1 = project_psd(r1);
  r2 = project_psd(r2);

  const Vector& x1 = red->x1.vector();
  const Vector& x2 = red->x2.vector();
  const Complex overlap = x1.dot(x2);
  const double fid = fidelity(r1, r2);
  const double margin = fid - std::abs(overlap);
  cert.metrics["overlap"] = std::abs(overlap);
  cert.metrics["fidelity"] = fid;
  cert.metrics["fidelity_margin"] = margin;
  if (margin < -options.boundary_tol) {
    std::ostringstream os;
    os << "|x1* x2| = " << std::abs(overlap) << " exceeds F(B1, B2) = " << fid
       << " after reduction to pure inputs";
    cert.verdict = Verdict::Infeasible;
    cert.evidence = os.str();
    return cert;
  }

  const Matrix s1 = sqrt_psd(r1);
  const Matrix s2 = sqrt_psd(r2);
  const auto dec = svd(s1 * s2);
  const Matrix z_mat = s2 * dec.v * dec.u.adjoint();
  Vector y(4), z(4);
  y << s1.col(0), s1.col(1);
  z << z_mat.col(0), z_mat.col(1);
  const Complex yz = y.dot(z);
  Complex delta = std::abs(yz) > 1e-14 ? overlap / yz : Complex(1.0);
  if (std::abs(delta) > 1.0) delta /= std::abs(delta);

  Matrix in(2, 2);
  in << x1, x2;
  Matrix out = Matrix::Zero(8, 2);
  out.col(0).head(4) = y;
  out.col(1).head(4) = delta * z;
  out.col(1).tail(4) = std::sqrt(std::max(0.0, 1.0 - std::norm(delta))) * z;
  attach_channel(cert, channel_from_frames(in, out, 2), prob);
  return cert;
}

namespace {

Matrix to_matrix2(const RealVector& c) {
  Matrix m(2, 2);
  for (Eigen::Index q = 0; q < 4; ++q) m(q % 2, q / 2) = Complex(c(2 * q), c(2 * q + 1));
  return m;
}

RealVector from_matrix2(const Matrix& m) {
  RealVector c(8);
  for (Eigen::Index q = 0; q < 4; ++q) {
    c(2 * q) = m(q % 2, q / 2).real();
    c(2 * q + 1) = m(q % 2, q / 2).imag();
  }
  return c;
}

Matrix clip_to_ball(const Matrix& c) {
  const auto dec = svd(c);
  RealVector s = dec.singular.cwiseMin(1.0);
  return dec.u * s.cast<Complex>().asDiagonal() * dec.v.adjoint();
}

double principal_arg(Complex z) {
  double t = std::arg(z);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return t;
}

}  // namespace

ContractionSearch find_contraction(const PureState& x1, const PureState& x2, const PureState& x3,
                                   const Matrix& b1, const Matrix& b2, const Matrix& b3,
                                   const QubitOptions& options) {
  ContractionSearch out;
  Matrix basis(2, 2);
  basis << x1.vector(), x2.vector();
  const Vector a = basis.fullPivLu().solve(x3.vector());
  out.alpha1 = std::abs(a(0));
  out.alpha2 = std::abs(a(1));
  if (out.alpha1 < 1e-12 || out.alpha2 < 1e-12) {
    throw Error(ErrorCode::DecompositionDegenerate,
                "x3 is proportional to one of x1, x2; inputs are not independent");
  }
  out.t1 = principal_arg(a(0));
  out.t2 = principal_arg(a(1));
  const Matrix b3t = (b3 - out.alpha1 * out.alpha1 * b1 - out.alpha2 * out.alpha2 * b2) /
                     (2.0 * out.alpha1 * out.alpha2);
  const Complex phase = std::polar(1.0, out.t2 - out.t1) * x1.vector().dot(x2.vector());

  const Matrix s1 = sqrt_psd(b1);
  const Matrix s2 = sqrt_psd(b2);
  auto linear = [&](const RealVector& c) {
    const Matrix k = s2 * to_matrix2(c) * s1;
    RealVector v(6);
    v(0) = k.trace().real();
    v(1) = k.trace().imag();
    v.tail(4) = HermitianCoordinates::pack(hermitian_part(k));
    return v;
  };
  const RealMatrix op = assemble_operator(8, linear);
  RealVector rhs(6);
  rhs(0) = phase.real();
  rhs(1) = phase.imag();
  rhs.tail(4) = HermitianCoordinates::pack(hermitian_part(b3t));

  Eigen::JacobiSVD<RealMatrix> dec(op, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = dec.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * std::max(1.0, sv(0))) ++rank;
  RealVector c0 = RealVector::Zero(8);
  for (Eigen::Index i = 0; i < rank; ++i)
    c0 += dec.matrixV().col(i) * (dec.matrixU().col(i).dot(rhs) / sv(i));
  const RealMatrix null = dec.matrixV().rightCols(8 - rank);
  out.inconsistency = (op * c0 - rhs).norm();
  out.witness.c0 = to_matrix2(c0);
  for (Eigen::Index i = 0; i < null.cols(); ++i) out.witness.directions.push_back(to_matrix2(null.col(i)));

  if (out.inconsistency > options.boundary_tol) {
    out.verdict = Verdict::Infeasible;
    out.witness.c = out.witness.c0;
    out.witness.params = RealVector::Zero(null.cols());
    out.excess = operator_norm(out.witness.c0) - 1.0;
    return out;
  }

  RealVector c = c0;
  bool converged = false;
  for (int it = 1; it <= options.max_iter; ++it) {
    const RealVector clipped = from_matrix2(clip_to_ball(to_matrix2(c)));
    const RealVector next = c0 + null * (null.transpose() * (clipped - c0));
    const double step = (next - c).norm();
    c = next;
    out.iterations = it;
    if (operator_norm(to_matrix2(c)) <= 1.0 + 1e-12 || step < options.step_tol) {
      converged = true;
      break;
    }
  }
  if (!converged || operator_norm(to_matrix2(c)) > 1.0 + options.boundary_tol) {
    // ‖C‖ ≤ 1 iff [[I, C], [C*, I]] ⪰ 0; polish a factor of that block.
    auto lifted = [&](const RealVector& z) {
      const Matrix m = HermitianCoordinates::unpack(z, 4);
      RealVector v(14);
      v.head(4) = HermitianCoordinates::pack(m.topLeftCorner(2, 2));
      v.segment(4, 4) = HermitianCoordinates::pack(m.bottomRightCorner(2, 2));
      v.tail(6) = linear(from_matrix2(m.topRightCorner(2, 2)));
      return v;
    };
    RealVector target(14);
    target.head(4) = HermitianCoordinates::pack(Matrix::Identity(2, 2));
    target.segment(4, 4) = target.head(4);
    target.tail(6) = rhs;
    Matrix z = Matrix::Identity(4, 4);
    z.topRightCorner(2, 2) = clip_to_ball(to_matrix2(c));
    z.bottomLeftCorner(2, 2) = z.topRightCorner(2, 2).adjoint();
    const FactorPolishResult pol =
        polish_psd_factors(assemble_operator(16, lifted), target, HermitianCoordinates::pack(z),
                           {PsdBlock{4, 0}}, 1e-13, 200);
    out.iterations += pol.iterations;
    if (pol.converged) {
      const RealVector lifted_c =
          from_matrix2(HermitianCoordinates::unpack(pol.point, 4).topRightCorner(2, 2));
      c = c0 + null * (null.transpose() * (lifted_c - c0));
      converged = true;
    }
  }
  const Matrix cm = to_matrix2(c);
  out.excess = operator_norm(cm) - 1.0;
  out.witness.params = null.transpose() * (c - c0);
  if (out.excess <= options.boundary_tol) {
    out.verdict = Verdict::Feasible;
    out.witness.c = out.excess > 0.0 ? clip_to_ball(cm) : cm;
  } else {
    out.verdict = converged ? Verdict::Infeasible : Verdict::Indeterminate;
    out.witness.c = cm;
  }
  return out;
}

namespace {

Eigen::Vector3d bloch(const Matrix& a) {
  return {2.0 * a(0, 1).real(), -2.0 * a(0, 1).imag(), (a(0, 0) - a(1, 1)).real()};
}

Matrix from_bloch(const Eigen::Vector3d& r) {
  Matrix a(2, 2);
  a(0, 0) = 0.5 * (1.0 + r(2));
  a(1, 1) = 0.5 * (1.0 - r(2));
  a(0, 1) = Complex(0.5 * r(0), -0.5 * r(1));
  a(1, 0) = std::conj(a(0, 1));
  return a;
}

}  // namespace

Certificate decide_qubit_k3(const QubitProblem& p, const QubitOptions& options) {
  if (p.inputs.size() != 3 || p.targets.size() != 3) {
    throw Error(ErrorCode::ShapeMismatch, "decide_qubit_k3 expects three input/target pairs");
  }
  const FeasibilityProblem prob = p.as_problem();
  Certificate cert;
  cert.route = "qubit-k3";

  std::array<Eigen::Vector3d, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = bloch(p.inputs[i].matrix());
  const Eigen::Vector3d normal = (r[1] - r[0]).cross(r[2] - r[0]);
  if (normal.norm() < 1e-9) {
    throw Error(ErrorCode::LinearlyDependent, "decide_qubit_k3: inputs are linearly dependent");
  }
  const Eigen::Vector3d nh = normal.normalized();
  const double h = nh.dot(r[0]);
  const Eigen::Vector3d p0 = h * nh;
  const double rho = std::sqrt(std::max(0.0, 1.0 - h * h));
  const Eigen::Vector3d e1 = (r[1] - r[0]).normalized();
  const Eigen::Vector3d e2 = nh.cross(e1);

  Eigen::Matrix3d circle;
  std::array<Matrix, 3> pure;
  for (int j = 0; j < 3; ++j) {
    const double th = 2.0 * std::numbers::pi * j / 3.0;
    circle.col(j) << 1.0, rho * std::cos(th), rho * std::sin(th);
    pure[j] = from_bloch(p0 + rho * (std::cos(th) * e1 + std::sin(th) * e2));
  }
  Eigen::Matrix3d coef;  // A_i = Σ_j coef(i, j) Π_j
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d a(1.0, (r[i] - p0).dot(e1), (r[i] - p0).dot(e2));
    coef.row(i) = circle.fullPivLu().solve(a).transpose();
  }
  const Eigen::Matrix3d inv = coef.inverse();
  std::array<Matrix, 3> reduced;
  for (int j = 0; j < 3; ++j) {
    reduced[j] = Matrix::Zero(2, 2);
    for (int i = 0; i < 3; ++i) reduced[j] += inv(j, i) * p.targets[i].matrix();
    reduced[j] = hermitian_part(reduced[j]);
    const double low = herm_eig(reduced[j]).values(1);
    if (low < -options.boundary_tol) {
      std::ostringstream os;
      os << "reduced target " << j + 1 << " has negative eigenvalue " << low;
      cert.verdict = Verdict::Infeasible;
      cert.evidence = os.str();
      cert.metrics["reduced_min_eigenvalue"] = low;
      return cert;
    }
    reduced[j] = project_psd(reduced[j]);
  }
  const PureState x1 = PureState::normalized(rank_one_factor(pure[0]));
  const PureState x2 = PureState::normalized(rank_one_factor(pure[1]));
  const PureState x3 = PureState::normalized(rank_one_factor(pure[2]));

  const ContractionSearch s =
      find_contraction(x1, x2, x3, reduced[0], reduced[1], reduced[2], options);
  cert.iterations = s.iterations;
  cert.metrics["contraction_excess"] = s.excess;
  cert.metrics["linear_inconsistency"] = s.inconsistency;
  if (s.verdict != Verdict::Feasible) {
    cert.verdict = s.verdict;
    std::ostringstream os;
    if (s.inconsistency > options.boundary_tol) {
      os << "linear conditions on C are inconsistent (residual " << s.inconsistency << ")";
    } else {
      os << "no contraction in the affine family; closest has norm 1 + " << s.excess;
    }
    cert.evidence = os.str();
    return cert;
  }

  const Matrix s1 = sqrt_psd(reduced[0]);
  const Matrix s2 = sqrt_psd(reduced[1]);
  const Matrix& c = s.witness.c;
  const Matrix defect = sqrt_psd(hermitian_part(Matrix::Identity(2, 2) - c * c.adjoint()));
  const Matrix s2c = s2 * c;
  const Matrix s2d = s2 * defect;
  Matrix in(2, 2);
  in << std::polar(1.0, s.t1) * x1.vector(), std::polar(1.0, s.t2) * x2.vector();
  Matrix out = Matrix::Zero(8, 2);
  out.col(0).head(4) << s1.col(0), s1.col(1);
  out.col(1) << s2c.col(0), s2c.col(1), s2d.col(0), s2d.col(1);
  attach_channel(cert, channel_from_frames(in, out, 2), prob);
  return cert;
}

Certificate decide_qubit_k4(const QubitProblem& p, const QubitOptions& options) {
  if (p.inputs.size() != 4 || p.targets.size() != 4) {
    throw Error(ErrorCode::ShapeMismatch, "decide_qubit_k4 expects four input/target pairs");
  }
  const FeasibilityProblem prob = p.as_problem();
  Certificate cert;
  cert.route = "qubit-k4";

  Matrix basis(4, 4);
  for (int i = 0; i < 4; ++i) basis.col(i) = Eigen::Map<const Vector>(p.inputs[i].matrix().data(), 4);
  const auto dec = svd(basis);
  if (dec.singular(3) < 1e-10 * dec.singular(0)) {
    throw Error(ErrorCode::LinearlyDependent, "decide_qubit_k4: inputs do not form a basis");
  }
  const Matrix coords = basis.inverse();  // vec(E_q) = Σ_i coords(i, q) vec(A_i)
  Matrix j = Matrix::Zero(4, 4);
  double trace_defect = 0.0;
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b) {
      const Eigen::Index q = a + 2 * b;
      Matrix img = Matrix::Zero(2, 2);
      for (int i = 0; i < 4; ++i) img += coords(i, q) * p.targets[i].matrix();
      j.block(2 * a, 2 * b, 2, 2) = img;
      const Complex expected = a == b ? Complex(1.0) : Complex(0.0);
      trace_defect = std::max(trace_defect, std::abs(img.trace() - expected));
    }
  cert.metrics["trace_defect"] = trace_defect;
  if (trace_defect > 1e-8) {
    std::ostringstream os;
    os << "the unique linear interpolant is not trace preserving (defect " << trace_defect << ")";
    cert.verdict = Verdict::Infeasible;
    cert.evidence = os.str();
    return cert;
  }
  j = hermitian_part(j);
  const double low = herm_eig(j).values(3);
  cert.metrics["choi_min_eigenvalue"] = low;
  if (low < -options.boundary_tol) {
    std::ostringstream os;
    os << "Choi matrix of the unique linear interpolant has negative eigenvalue " << low;
    cert.verdict = Verdict::Infeasible;
    cert.evidence = os.str();
    return cert;
  }
  attach_channel(cert, kraus_from_choi(ChoiMatrix{2, 2, project_psd(j)}), prob);
  return cert;
}

}  // namespace qinterp
