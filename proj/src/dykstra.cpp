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

#include "qinterp/dykstra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace qinterp {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

RealVector HermitianCoordinates::pack(const Matrix& h) {
  const Eigen::Index d = h.rows();
  RealVector x(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) x(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      x(k++) = kSqrt2 * v.real();
      x(k++) = kSqrt2 * v.imag();
    }
  }
  return x;
}

Matrix HermitianCoordinates::unpack(const RealVector& x, Eigen::Index d, Eigen::Index offset) {
  Matrix h(d, d);
  Eigen::Index k = offset;
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = x(k++);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Complex v(x(k) / kSqrt2, x(k + 1) / kSqrt2);
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

Matrix HermitianCoordinates::basis(Eigen::Index dim, Eigen::Index index) {
  RealVector e = RealVector::Zero(dim * dim);
  e(index) = 1.0;
  return unpack(e, dim);
}

AffineSet::AffineSet(const RealMatrix& op, const RealVector& rhs, double rank_tol)
    : op_(op), rhs_(rhs) {
  const Eigen::Index d = op.cols();
  if (op.rows() == 0) {
    row_basis_ = RealMatrix::Zero(d, 0);
    particular_ = RealVector::Zero(d);
    return;
  }
  Eigen::JacobiSVD<RealMatrix> solver(op, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = solver.singularValues();
  const double cutoff = rank_tol * (s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff && s(rank) > 0.0) ++rank;
  row_basis_ = solver.matrixV().leftCols(rank);
  const RealMatrix u = solver.matrixU().leftCols(rank);
  const RealVector coeffs = u.transpose() * rhs;
  particular_ = row_basis_ * coeffs.cwiseQuotient(s.head(rank));
  inconsistency_ = (rhs - u * coeffs).norm();
}

RealVector AffineSet::project(const RealVector& x) const {
  return x - row_basis_ * (row_basis_.transpose() * x) + particular_;
}

double AffineSet::residual(const RealVector& x) const { return (op_ * x - rhs_).norm(); }

RealMatrix assemble_operator(Eigen::Index domain_dim,
                             const std::function<RealVector(const RealVector&)>& map) {
  RealMatrix out;
  for (Eigen::Index k = 0; k < domain_dim; ++k) {
    RealVector e = RealVector::Zero(domain_dim);
    e(k) = 1.0;
    const RealVector col = map(e);
    if (k == 0) out.resize(col.size(), domain_dim);
    out.col(k) = col;
  }
  return out;
}

RealVector project_psd_block(const RealVector& x, Eigen::Index dim, Eigen::Index offset) {
  RealVector out = x;
  if (dim == 0) return out;
  const Matrix h = HermitianCoordinates::unpack(x, dim, offset);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const RealVector vals = solver.eigenvalues().cwiseMax(0.0);
  const Matrix& v = solver.eigenvectors();
  const Matrix p = v * vals.cast<Complex>().asDiagonal() * v.adjoint();
  out.segment(offset, dim * dim) = HermitianCoordinates::pack(p);
  return out;
}

DykstraResult cyclic_dykstra(const RealVector& start, const std::vector<Projector>& sets,
                             const std::function<double(const RealVector&)>& residual,
                             const DykstraOptions& options) {
  const std::size_t count = sets.size();
  std::vector<RealVector> corrections(count, RealVector::Zero(start.size()));
  std::vector<RealVector> outputs(count);
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(options.max_iter));

  DykstraResult result;
  RealVector x = start;
  for (int it = 1; it <= options.max_iter; ++it) {
    for (std::size_t s = 0; s < count; ++s) {
      if (options.corrections) {
        const RealVector shifted = x + corrections[s];
        outputs[s] = sets[s](shifted);
        corrections[s] = shifted - outputs[s];
      } else {
        outputs[s] = sets[s](x);
      }
      x = outputs[s];
    }
    double gap = 0.0;
    for (std::size_t s = 0; s + 1 < count; ++s) gap = std::max(gap, (outputs[s] - x).norm());
    history.push_back(gap);

    result.iterations = it;
    result.gap = gap;
    result.point = x;
    result.residual = residual(x);
    if (result.residual < options.feasible_tol * options.polish) {
      result.stop = DykstraStop::Converged;
      return result;
    }
    if (it > options.window && gap > options.infeasible_gap) {
      const double earlier = history[static_cast<std::size_t>(it - 1 - options.window)];
      if (earlier - gap <= 1e-3 * gap) {
        result.stop = DykstraStop::Stalled;
        return result;
      }
    }
  }
  result.stop = DykstraStop::IterationCap;
  return result;
}

namespace {

struct Factors {
  std::vector<Matrix> r;

  RealVector point(const std::vector<PsdBlock>& blocks, Eigen::Index size) const {
    RealVector x(size);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      x.segment(blocks[b].offset, blocks[b].dim * blocks[b].dim) =
          HermitianCoordinates::pack(r[b] * r[b].adjoint());
    return x;
  }
};

}  // namespace

namespace {

FactorPolishResult run_polish(const RealMatrix& op, const RealVector& rhs,
                              const std::vector<PsdBlock>& blocks, Factors f, Eigen::Index size,
                              double tol, int max_iter) {
  Eigen::Index params = 0;
  for (const auto& r : f.r) params += 2 * r.size();
  FactorPolishResult out;
  out.point = f.point(blocks, size);
  RealVector res = op * out.point - rhs;
  out.residual = res.norm();
  double damping = 1e-3;
  RealMatrix jac(op.rows(), params);
  std::vector<double> history{out.residual};
  for (int it = 1; it <= max_iter && out.residual >= tol; ++it) {
    if (it > 8 && out.residual > 0.5 * history[history.size() - 5]) break;
    out.iterations = it;
    Eigen::Index col = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Eigen::Index d = blocks[b].dim;
      const auto opb = op.middleCols(blocks[b].offset, d * d);
      const Matrix& r = f.r[b];
      for (int part = 0; part < 2; ++part) {
        const Complex unit = part == 0 ? Complex(1.0) : Complex(0.0, 1.0);
        for (Eigen::Index q = 0; q < r.cols(); ++q)
          for (Eigen::Index p = 0; p < d; ++p) {
            Matrix h = Matrix::Zero(d, d);
            h.row(p) += unit * r.col(q).adjoint();
            h.col(p) += std::conj(unit) * r.col(q);
            jac.col(col++) = opb * HermitianCoordinates::pack(h);
          }
      }
    }
    const RealMatrix normal = jac * jac.transpose();
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      RealMatrix lhs = normal;
      lhs.diagonal().array() += damping * out.residual;
      const RealVector step = -jac.transpose() * lhs.ldlt().solve(res);
      Factors trial = f;
      Eigen::Index k = 0;
      for (auto& r : trial.r)
        for (int part = 0; part < 2; ++part) {
          const Complex unit = part == 0 ? Complex(1.0) : Complex(0.0, 1.0);
          for (Eigen::Index q = 0; q < r.cols(); ++q)
            for (Eigen::Index p = 0; p < r.rows(); ++p) r(p, q) += unit * step(k++);
        }
      const RealVector x = trial.point(blocks, size);
      const RealVector trial_res = op * x - rhs;
      const double norm = trial_res.norm();
      if (std::isfinite(norm) && norm < out.residual) {
        f = std::move(trial);
        out.point = x;
        res = trial_res;
        out.residual = norm;
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
      } else {
        damping *= 4.0;
      }
    }
    if (!accepted) break;
    history.push_back(out.residual);
  }
  out.converged = out.residual < tol;
  return out;
}

}  // namespace

FactorPolishResult polish_psd_factors(const RealMatrix& op, const RealVector& rhs,
                                      const RealVector& start,
                                      const std::vector<PsdBlock>& blocks, double tol,
                                      int max_iter) {
  struct Spectrum {
    RealVector values;  // ascending, clipped at zero
    Matrix vectors;
  };
  std::vector<Spectrum> spectra;
  for (const auto& blk : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(
        HermitianCoordinates::unpack(start, blk.dim, blk.offset));
    spectra.push_back({solver.eigenvalues().cwiseMax(0.0), solver.eigenvectors()});
  }
  // Rank guesses per block: each block keeps its top `rank` eigenpairs.
  auto factors_for = [&](const std::vector<Eigen::Index>& ranks) {
    Factors f;
    for (std::size_t b = 0; b < spectra.size(); ++b) {
      const auto& sp = spectra[b];
      const Eigen::Index r = ranks[b];
      f.r.push_back(sp.vectors.rightCols(r) *
                    sp.values.tail(r).cwiseSqrt().cast<Complex>().asDiagonal());
    }
    return f;
  };
  std::vector<Eigen::Index> support;
  std::vector<std::pair<double, std::vector<Eigen::Index>>> guesses;
  for (const auto& sp : spectra) {
    const Eigen::Index d = sp.values.size();
    const double top = std::max(d > 0 ? sp.values(d - 1) : 0.0, 1e-12);
    Eigen::Index rank = 0;
    while (rank < d && sp.values(d - 1 - rank) > 1e-9 * top) ++rank;
    support.push_back(std::max<Eigen::Index>(rank, std::min<Eigen::Index>(1, d)));
  }
  for (std::size_t b = 0; b < spectra.size(); ++b) {
    const RealVector& v = spectra[b].values;
    const Eigen::Index d = v.size();
    for (Eigen::Index r = 1; r < support[b]; ++r) {
      const double ratio = v(d - r) / v(d - r - 1);
      if (ratio < 2.0) continue;
      std::vector<Eigen::Index> ranks = support;
      ranks[b] = r;
      guesses.emplace_back(ratio, std::move(ranks));
    }
  }
  std::sort(guesses.begin(), guesses.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  if (guesses.size() > 4) guesses.resize(4);

  std::vector<Factors> attempts;
  for (const auto& g : guesses) attempts.push_back(factors_for(g.second));
  attempts.push_back(factors_for(support));
  Factors full;
  for (const auto& sp : spectra) {
    const double top = std::max(sp.values.size() > 0 ? sp.values.maxCoeff() : 0.0, 1e-12);
    const RealVector lifted = (sp.values.array() + 1e-6 * top).sqrt().matrix();
    full.r.push_back(sp.vectors * lifted.cast<Complex>().asDiagonal());
  }
  attempts.push_back(std::move(full));

  FactorPolishResult best;
  best.point = start;
  best.residual = std::numeric_limits<double>::infinity();
  int total = 0;
  for (auto& f : attempts) {
    FactorPolishResult r = run_polish(op, rhs, blocks, std::move(f), start.size(), tol, max_iter);
    total += r.iterations;
    if (r.residual < best.residual) best = std::move(r);
    if (best.converged) break;
  }
  best.iterations = total;
  return best;
}

}  // namespace qinterp
