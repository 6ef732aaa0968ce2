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

#include "qinterp/channel.hpp"

#include <cmath>
#include <sstream>

namespace qinterp {

KrausChannel KrausChannel::from_operators(std::vector<Matrix> ops, Eigen::Index in_dim,
                                          Eigen::Index out_dim) {
  for (const auto& f : ops) {
    if (f.rows() != out_dim || f.cols() != in_dim) {
      std::ostringstream os;
      os << "Kraus operator is " << f.rows() << "x" << f.cols() << ", expected " << out_dim
         << "x" << in_dim;
      throw Error(ErrorCode::ShapeMismatch, os.str());
    }
  }
  KrausChannel ch;
  ch.in_dim = in_dim;
  ch.out_dim = out_dim;
  ch.operators = std::move(ops);
  ch.tp = ch.tp_residual() <= kChannelFlagTol;
  ch.unital = ch.unital_residual() <= kChannelFlagTol;
  return ch;
}

Matrix KrausChannel::apply(const Matrix& x) const {
  if (x.rows() != in_dim || x.cols() != in_dim) {
    throw Error(ErrorCode::ShapeMismatch, "apply_channel: input dimension mismatch");
  }
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (const auto& f : operators) out.noalias() += f * x * f.adjoint();
  return out;
}

Matrix KrausChannel::identity_image() const {
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (const auto& f : operators) out.noalias() += f * f.adjoint();
  return out;
}

Matrix KrausChannel::dual_identity() const {
  Matrix out = Matrix::Zero(in_dim, in_dim);
  for (const auto& f : operators) out.noalias() += f.adjoint() * f;
  return out;
}

double KrausChannel::tp_residual() const {
  return (dual_identity() - Matrix::Identity(in_dim, in_dim)).norm();
}

double KrausChannel::unital_residual() const {
  return (identity_image() - Matrix::Identity(out_dim, out_dim)).norm();
}

Matrix apply_channel(const KrausChannel& ch, const Matrix& x) { return ch.apply(x); }

Matrix ChoiMatrix::apply(const Matrix& x) const {
  if (x.rows() != in_dim || x.cols() != in_dim) {
    throw Error(ErrorCode::ShapeMismatch, "ChoiMatrix::apply: input dimension mismatch");
  }
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (Eigen::Index a = 0; a < in_dim; ++a)
    for (Eigen::Index b = 0; b < in_dim; ++b)
      if (x(a, b) != Complex(0.0)) out += x(a, b) * block(a, b);
  return out;
}

ChoiMatrix choi_from_kraus(const KrausChannel& ch) {
  const Eigen::Index n = ch.in_dim;
  const Eigen::Index m = ch.out_dim;
  ChoiMatrix out{n, m, Matrix::Zero(n * m, n * m)};
  for (const auto& f : ch.operators) {
    // vec with w(a·m + p) = F(p, a): column-major flattening of F.
    const Vector w = Eigen::Map<const Vector>(f.data(), n * m);
    out.j.noalias() += w * w.adjoint();
  }
  return out;
}

KrausChannel kraus_from_choi(const ChoiMatrix& choi) {
  const Eigen::Index n = choi.in_dim;
  const Eigen::Index m = choi.out_dim;
  if (choi.j.rows() != n * m || choi.j.cols() != n * m) {
    throw Error(ErrorCode::ShapeMismatch, "kraus_from_choi: Choi matrix size mismatch");
  }
  const auto eig = herm_eig(choi.j, 1e-8);
  const double tol = psd_tolerance(eig.values);
  if (eig.values(eig.values.size() - 1) < -tol) {
    std::ostringstream os;
    os << "Choi matrix is not positive semidefinite (eigenvalue "
       << eig.values(eig.values.size() - 1) << ")";
    throw Error(ErrorCode::NotPSD, os.str());
  }
  const double cutoff = 1e-12 * std::max(1.0, eig.values(0));
  std::vector<Matrix> ops;
  for (Eigen::Index l = 0; l < eig.values.size(); ++l) {
    if (eig.values(l) <= cutoff) break;
    const Vector w = std::sqrt(eig.values(l)) * eig.vectors.col(l);
    ops.emplace_back(Eigen::Map<const Matrix>(w.data(), m, n));
  }
  return KrausChannel::from_operators(std::move(ops), n, m);
}

KrausChannel channel_from_frames(const Matrix& inputs, const Matrix& outputs,
                                 Eigen::Index out_dim) {
  const Eigen::Index n = inputs.rows();
  const Eigen::Index k = inputs.cols();
  if (outputs.cols() != k || outputs.rows() % out_dim != 0) {
    throw Error(ErrorCode::ShapeMismatch, "channel_from_frames: frame shapes do not match");
  }
  Eigen::Index blocks = outputs.rows() / out_dim;
  while (blocks * out_dim < n) ++blocks;
  const Eigen::Index big = blocks * out_dim;
  Matrix from = Matrix::Zero(big, k);
  Matrix to = Matrix::Zero(big, k);
  from.topRows(n) = inputs;
  to.topRows(outputs.rows()) = outputs;
  const Matrix u = unitary_from_frames(from, to);
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < blocks; ++j) {
    Matrix f = u.block(j * out_dim, 0, out_dim, n);
    if (f.norm() > 1e-14) ops.push_back(std::move(f));
  }
  return KrausChannel::from_operators(std::move(ops), n, out_dim);
}

KrausChannel replacement_channel(Eigen::Index in_dim, const Matrix& b) {
  const auto eig = herm_eig(b);
  const Eigen::Index m = b.rows();
  std::vector<Matrix> ops;
  for (Eigen::Index l = 0; l < m; ++l) {
    if (eig.values(l) <= psd_tolerance(eig.values)) continue;
    const Vector w = std::sqrt(eig.values(l)) * eig.vectors.col(l);
    for (Eigen::Index j = 0; j < in_dim; ++j) {
      Matrix f = Matrix::Zero(m, in_dim);
      f.col(j) = w;
      ops.push_back(std::move(f));
    }
  }
  return KrausChannel::from_operators(std::move(ops), in_dim, m);
}

}  // namespace qinterp
