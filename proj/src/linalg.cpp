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

#include "qinterp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qinterp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LinearlyDependent: return "LinearlyDependent";
    case ErrorCode::InvalidIsometry: return "InvalidIsometry";
    case ErrorCode::AncillaTooSmall: return "AncillaTooSmall";
    case ErrorCode::DecompositionDegenerate: return "DecompositionDegenerate";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::InconsistentSystem: return "InconsistentSystem";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_hermitian(const Matrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  if (h.size() == 0) return true;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const Matrix& h, double tol, const std::string& what) {
  if (h.rows() != h.cols()) {
    std::ostringstream os;
    os << what << " is not square (" << h.rows() << "x" << h.cols() << ")";
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
  if (!h.allFinite()) {
    throw Error(ErrorCode::InvalidInput, what + " has non-finite entries");
  }
  if (!is_hermitian(h, tol)) {
    std::ostringstream os;
    os << what << " is not Hermitian (max deviation "
       << (h - h.adjoint()).cwiseAbs().maxCoeff() << ")";
    throw Error(ErrorCode::NotHermitian, os.str());
  }
}

Matrix hermitian_part(const Matrix& h) { return (h + h.adjoint()) / 2.0; }

Vector fix_phase(const Vector& v) {
  if (v.size() == 0) return v;
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-9 * scale) {
      return v * (std::conj(v(i)) / mag);
    }
  }
  return v;
}

EigenDecomposition herm_eig(const Matrix& h, double tol) {
  require_hermitian(h, tol);
  const Eigen::Index n = h.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidInput, "Hermitian eigensolver failed");
  }
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = fix_phase(solver.eigenvectors().col(n - 1 - k));
  }
  return out;
}

SvdResult svd(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double psd_tolerance(const RealVector& eigenvalues) {
  double largest = 1.0;
  if (eigenvalues.size() > 0) {
    largest = std::max(largest, eigenvalues.cwiseAbs().maxCoeff());
  }
  return 1e-9 * largest;
}

bool is_psd(const Matrix& h, double tol_scale) {
  if (!is_hermitian(h)) return false;
  const auto eig = herm_eig(h);
  if (eig.values.size() == 0) return true;
  return eig.values(eig.values.size() - 1) >= -tol_scale * psd_tolerance(eig.values);
}

double trace_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> solver(x);
  return solver.singularValues().sum();
}

double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> solver(x);
  return solver.singularValues()(0);
}

namespace {

Matrix spectral_function(const EigenDecomposition& eig, const RealVector& mapped) {
  return eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

RealVector clipped_eigenvalues(const EigenDecomposition& eig, bool strict) {
  const double tol = psd_tolerance(eig.values);
  RealVector out = eig.values;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    if (out(k) < 0.0) {
      if (strict && out(k) < -tol) {
        std::ostringstream os;
        os << "matrix is not positive semidefinite (eigenvalue " << out(k) << ")";
        throw Error(ErrorCode::NotPSD, os.str());
      }
      out(k) = 0.0;
    }
  }
  return out;
}

}  // namespace

Matrix sqrt_psd(const Matrix& a) {
  const auto eig = herm_eig(a);
  RealVector vals = clipped_eigenvalues(eig, true).cwiseSqrt();
  return hermitian_part(spectral_function(eig, vals));
}

Matrix project_psd(const Matrix& h) {
  const auto eig = herm_eig(hermitian_part(h), 1e300);
  RealVector vals = clipped_eigenvalues(eig, false);
  return hermitian_part(spectral_function(eig, vals));
}

double fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "fidelity: shape mismatch");
  }
  return trace_norm(sqrt_psd(a) * sqrt_psd(b));
}

Matrix pinv(const Matrix& a, double rcond) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = solver.singularValues();
  const double cutoff = rcond * s(0);
  RealVector inv = RealVector::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cutoff && s(k) > 0.0) inv(k) = 1.0 / s(k);
  }
  return solver.matrixV() * inv.cast<Complex>().asDiagonal() * solver.matrixU().adjoint();
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "hadamard: shape mismatch");
  }
  return a.cwiseProduct(b);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, std::size_t p, std::size_t q, Subsystem which) {
  const auto pi = static_cast<Eigen::Index>(p);
  const auto qi = static_cast<Eigen::Index>(q);
  if (m.rows() != pi * qi || m.cols() != pi * qi) {
    std::ostringstream os;
    os << "partial_trace: " << m.rows() << "x" << m.cols()
       << " matrix does not factor as " << p << "*" << q;
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
  if (which == Subsystem::Second) {
    Matrix out = Matrix::Zero(pi, pi);
    for (Eigen::Index i = 0; i < pi; ++i)
      for (Eigen::Index k = 0; k < pi; ++k)
        for (Eigen::Index j = 0; j < qi; ++j) out(i, k) += m(i * qi + j, k * qi + j);
    return out;
  }
  Matrix out = Matrix::Zero(qi, qi);
  for (Eigen::Index i = 0; i < pi; ++i) out += m.block(i * qi, i * qi, qi, qi);
  return out;
}

Matrix null_space(const Matrix& a, double rel_tol) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  const auto dec = svd(a);
  const double smax = dec.singular.size() > 0 ? dec.singular(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < dec.singular.size(); ++k) {
    if (dec.singular(k) > rel_tol * smax && dec.singular(k) > 0.0) ++rank;
  }
  return dec.v.rightCols(cols - rank);
}

Matrix orthonormal_complement(const Matrix& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index r = q.cols();
  if (r == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - r);
}

namespace {

// Polar factor: nearest matrix with orthonormal columns.
Matrix orthonormalize(const Matrix& a) {
  if (a.cols() == 0) return a;
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return solver.matrixU() * solver.matrixV().adjoint();
}

}  // namespace

Matrix unitary_from_frames(const Matrix& from, const Matrix& to) {
  if (from.rows() != to.rows() || from.cols() != to.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "unitary_from_frames: shape mismatch");
  }
  const Eigen::Index n = from.rows();
  const Matrix gram = hermitian_part(from.adjoint() * from);
  const auto eig = herm_eig(gram, 1e300);
  const double lmax = eig.values.size() > 0 ? std::max(eig.values(0), 0.0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 1e-12 * std::max(lmax, 1.0)) ++rank;
  }
  if (rank > n) rank = n;
  const Matrix w = eig.vectors.leftCols(rank);
  RealVector inv_sqrt(rank);
  for (Eigen::Index k = 0; k < rank; ++k) inv_sqrt(k) = 1.0 / std::sqrt(eig.values(k));
  const auto scale = inv_sqrt.cast<Complex>().asDiagonal();
  const Matrix qf = orthonormalize(from * w * scale);
  const Matrix qt = orthonormalize(to * w * scale);
  Matrix basis_from(n, n), basis_to(n, n);
  basis_from << qf, orthonormal_complement(qf);
  basis_to << qt, orthonormal_complement(qt);
  return basis_to * basis_from.adjoint();
}

Vector rank_one_factor(const Matrix& a) {
  const auto eig = herm_eig(a);
  const double top = std::max(eig.values(0), 0.0);
  return fix_phase(eig.vectors.col(0)) * std::sqrt(top);
}

}  // namespace qinterp
