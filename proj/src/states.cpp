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

#include "qinterp/states.hpp"

#include <cmath>
#include <sstream>

namespace qinterp {

DensityMatrix DensityMatrix::validate(const Matrix& m) {
  require_hermitian(m, kHermitianTol, "density matrix");
  const auto eig = herm_eig(m);
  const double tol = psd_tolerance(eig.values);
  const double smallest = eig.values(eig.values.size() - 1);
  if (smallest < -tol) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (eigenvalue " << smallest << ")";
    throw Error(ErrorCode::NotPSD, os.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw Error(ErrorCode::TraceNotOne, os.str());
  }
  return DensityMatrix(hermitian_part(m));
}

PureState PureState::from_vector(const Vector& v) {
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "pure state vector has norm " << norm;
    throw Error(ErrorCode::NotNormalized, os.str());
  }
  return PureState(fix_phase(v));
}

PureState PureState::normalized(const Vector& v) {
  const double norm = v.norm();
  if (norm == 0.0) throw Error(ErrorCode::NotNormalized, "zero vector");
  return PureState(fix_phase(v / norm));
}

Matrix SpectralFactor::weighted() const {
  return isometry * diag.cast<Complex>().asDiagonal();
}

Matrix SpectralFactor::reconstruct() const {
  const Matrix w = weighted();
  return w * w.adjoint();
}

SpectralFactor spectral_factor_psd(const Matrix& a) {
  const auto eig = herm_eig(a);
  const double tol = psd_tolerance(eig.values);
  if (eig.values(eig.values.size() - 1) < -tol) {
    throw Error(ErrorCode::NotPSD, "spectral_factor: matrix is not positive semidefinite");
  }
  Eigen::Index rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > tol) ++rank;
  return {eig.vectors.leftCols(rank), eig.values.head(rank).cwiseSqrt()};
}

SpectralFactor spectral_factor(const DensityMatrix& a) { return spectral_factor_psd(a.matrix()); }

Matrix Purification::blocks() const {
  Matrix out(system_dim, ancilla_dim);
  for (Eigen::Index j = 0; j < ancilla_dim; ++j) out.col(j) = block(j);
  return out;
}

Matrix Purification::reduced() const {
  const Matrix y = blocks();
  return y * y.adjoint();
}

Purification purify(const DensityMatrix& a, Eigen::Index ancilla_dim,
                    const std::optional<Matrix>& partial_isometry) {
  const Eigen::Index m = a.dim();
  const auto factor = spectral_factor(a);
  const Eigen::Index rank = factor.rank();
  if (ancilla_dim < rank) {
    std::ostringstream os;
    os << "ancilla dimension " << ancilla_dim << " is below rank " << rank;
    throw Error(ErrorCode::AncillaTooSmall, os.str());
  }
  Matrix w;
  if (partial_isometry) {
    w = *partial_isometry;
    if (w.rows() != ancilla_dim || w.cols() != m) {
      throw Error(ErrorCode::ShapeMismatch, "purify: partial isometry must be r x m");
    }
    const Matrix image = w * factor.isometry;
    const double err =
        (image.adjoint() * image - Matrix::Identity(rank, rank)).cwiseAbs().maxCoeff();
    if (err > 1e-9) {
      std::ostringstream os;
      os << "partial isometry is not isometric on the support (deviation " << err << ")";
      throw Error(ErrorCode::InvalidIsometry, os.str());
    }
  } else if (ancilla_dim >= m) {
    w = Matrix::Identity(ancilla_dim, m);
  } else {
    w = Matrix::Identity(ancilla_dim, rank) * factor.isometry.adjoint();
  }

  Purification out;
  out.system_dim = m;
  out.ancilla_dim = ancilla_dim;
  out.vector = Vector::Zero(m * ancilla_dim);
  for (Eigen::Index k = 0; k < rank; ++k) {
    out.vector += factor.diag(k) * kron(w * factor.isometry.col(k), factor.isometry.col(k));
  }
  return out;
}

namespace {

double det2(const Matrix& p) { return (p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0)).real(); }

// Smallest c ≥ 0 with det(P − cQ) = 0. For 2×2 Hermitian P, Q:
//   det(P − cQ) = det P − c (tr P tr Q − tr PQ) + c² det Q.
double first_singular_shift(const Matrix& p, const Matrix& q) {
  const double dp = det2(p);
  if (dp <= 1e-12) return 0.0;
  const double dq = det2(q);
  const double mix = (p.trace() * q.trace() - (p * q).trace()).real();
  const double disc = std::max(mix * mix - 4.0 * dp * dq, 0.0);
  // Stable form of the smaller root of dq c² − mix c + dp.
  const double half = 0.5 * (mix + std::sqrt(disc));
  return dp / half;
}

PureState pure_part(const Matrix& rank_one) {
  return PureState::normalized(rank_one_factor(hermitian_part(rank_one)));
}

}  // namespace

QubitPairReduction reduce_qubit_pair(const DensityMatrix& a1, const DensityMatrix& a2) {
  if (a1.dim() != 2 || a2.dim() != 2) {
    throw Error(ErrorCode::ShapeMismatch, "reduce_qubit_pair expects 2x2 density matrices");
  }
  const Matrix& p = a1.matrix();
  const Matrix& q = a2.matrix();
  const double g11 = p.squaredNorm();
  const double g22 = q.squaredNorm();
  const double g12 = (p.adjoint() * q).trace().real();
  if (g11 * g22 - g12 * g12 < 1e-10) {
    throw Error(ErrorCode::LinearlyDependent, "reduce_qubit_pair: inputs are linearly dependent");
  }

  const double c = first_singular_shift(p, q);
  const double scale1 = 1.0 / (1.0 - c);
  const Matrix first = scale1 * (p - c * q);
  const PureState x1 = pure_part(first);

  const Matrix first_clean = x1.projector();
  const double c_tilde = first_singular_shift(q, first_clean);
  const double scale2 = 1.0 / (1.0 - c_tilde);
  const Matrix second = scale2 * (q - c_tilde * first_clean);
  const PureState x2 = pure_part(second);

  return {x1, x2, c, c_tilde, scale1, scale2};
}

std::pair<Matrix, Matrix> QubitPairReduction::apply(const Matrix& b1, const Matrix& b2) const {
  Matrix r1 = scale1 * (b1 - c * b2);
  Matrix r2 = scale2 * (b2 - c_tilde * r1);
  return {hermitian_part(r1), hermitian_part(r2)};
}

}  // namespace qinterp
