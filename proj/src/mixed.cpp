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

#include "qinterp/mixed.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qinterp/channel.hpp"

namespace qinterp {

ScreenResult fidelity_screen(const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets,
                             double boundary_tol) {
  ScreenResult r;
  r.name = "fidelity";
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      const double margin = fidelity(targets[i], targets[j]) - fidelity(inputs[i], inputs[j]);
      if (margin < worst) {
        worst = margin;
        r.i = i;
        r.j = j;
        r.margin = margin;
      }
    }
  r.passed = !(worst < -boundary_tol);
  std::ostringstream os;
  if (inputs.size() < 2) {
    os << "fewer than two states";
  } else {
    os << "min over pairs of F(B_i, B_j) - F(A_i, A_j) is " << r.margin << " at (" << r.i << ", "
       << r.j << ")";
  }
  r.detail = os.str();
  return r;
}

namespace {

Matrix purification_columns(const std::vector<Purification>& ps) {
  Matrix y(ps.front().vector.size(), static_cast<Eigen::Index>(ps.size()));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].vector.size() != y.rows()) {
      throw Error(ErrorCode::ShapeMismatch, "purifications have different sizes");
    }
    y.col(static_cast<Eigen::Index>(i)) = ps[i].vector;
  }
  return y;
}

}  // namespace

PurificationCheck verify_purification_certificate(const Matrix& x, const std::vector<Matrix>& targets,
                                                  const PurificationCertificate& cert,
                                                  double reduction_tol, double gram_tol) {
  const auto k = static_cast<std::size_t>(x.cols());
  if (cert.purifications.size() != k || targets.size() != k || k == 0) {
    throw Error(ErrorCode::ShapeMismatch, "purification certificate has wrong length");
  }
  PurificationCheck out;
  for (std::size_t i = 0; i < k; ++i) {
    const Purification& p = cert.purifications[i];
    if (p.system_dim != targets[i].rows() || p.vector.size() != p.system_dim * p.ancilla_dim) {
      throw Error(ErrorCode::ShapeMismatch, "purification does not match its target");
    }
    out.reduction_residual = std::max(out.reduction_residual, (p.reduced() - targets[i]).norm());
  }
  const Matrix y = purification_columns(cert.purifications);
  out.gram_diff = x.adjoint() * x - y.adjoint() * y;
  out.gram_residual = out.gram_diff.cwiseAbs().maxCoeff();
  out.valid = out.reduction_residual <= reduction_tol && out.gram_residual <= gram_tol;
  if (out.valid) out.channel = channel_from_frames(x, y, targets.front().rows());
  return out;
}

PurificationCertificate extract_purification_certificate(const KrausChannel& ch, const Matrix& x) {
  if (ch.tp_residual() > kChannelFlagTol) {
    std::ostringstream os;
    os << "channel is not trace preserving (residual " << ch.tp_residual() << ")";
    throw Error(ErrorCode::NotTracePreserving, os.str());
  }
  if (x.rows() != ch.in_dim) throw Error(ErrorCode::ShapeMismatch, "input columns have wrong length");
  const KrausChannel minimal = kraus_from_choi(choi_from_kraus(ch));
  const Eigen::Index m = ch.out_dim;
  const auto r = static_cast<Eigen::Index>(minimal.operators.size());
  Matrix stacked(r * m, ch.in_dim);
  for (Eigen::Index l = 0; l < r; ++l) stacked.middleRows(l * m, m) = minimal.operators[static_cast<std::size_t>(l)];
  PurificationCertificate cert;
  const Matrix y = stacked * x;
  for (Eigen::Index i = 0; i < x.cols(); ++i) cert.purifications.push_back({m, r, y.col(i)});
  cert.gram_check = x.adjoint() * x - y.adjoint() * y;
  return cert;
}

IsometryCertificate isometry_certificate_from_purifications(const std::vector<Matrix>& targets,
                                                            const PurificationCertificate& cert) {
  IsometryCertificate out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out.v.push_back(pinv(sqrt_psd(targets[i]), 1e-12) * cert.purifications[i].blocks());
  }
  return out;
}

IsometryCheck verify_isometry_certificate(const Matrix& x, const std::vector<Matrix>& targets,
                                          const IsometryCertificate& cert, double tol) {
  const auto k = static_cast<std::size_t>(x.cols());
  if (cert.v.size() != k || targets.size() != k) {
    throw Error(ErrorCode::ShapeMismatch, "isometry certificate has wrong length");
  }
  IsometryCheck out;
  std::vector<Matrix> roots;
  for (std::size_t i = 0; i < k; ++i) {
    roots.push_back(sqrt_psd(targets[i]));
    const Matrix& v = cert.v[i];
    out.reduction_residual = std::max(
        out.reduction_residual, (roots[i] * v * v.adjoint() * roots[i] - targets[i]).norm());
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Complex lhs = x.col(static_cast<Eigen::Index>(i)).dot(x.col(static_cast<Eigen::Index>(j)));
      const Complex rhs = (roots[i] * roots[j] * cert.v[j] * cert.v[i].adjoint()).trace();
      out.gram_residual = std::max(out.gram_residual, std::abs(lhs - rhs));
    }
  out.valid = out.reduction_residual <= tol && out.gram_residual <= tol;
  return out;
}

GeneralCheck verify_general_certificate(const std::vector<SpectralFactor>& in,
                                        const std::vector<SpectralFactor>& out_f,
                                        const std::vector<std::vector<Matrix>>& v, double tol) {
  const std::size_t k = in.size();
  if (out_f.size() != k || v.size() != k) {
    throw Error(ErrorCode::ShapeMismatch, "general certificate has wrong length");
  }
  Eigen::Index s = -1;
  for (std::size_t i = 0; i < k; ++i) {
    if (static_cast<Eigen::Index>(v[i].size()) != in[i].rank()) {
      throw Error(ErrorCode::ShapeMismatch, "general certificate block count differs from input rank");
    }
    for (const auto& blk : v[i]) {
      if (blk.rows() != out_f[i].rank() || (s >= 0 && blk.cols() != s)) {
        throw Error(ErrorCode::ShapeMismatch, "general certificate block has wrong shape");
      }
      s = blk.cols();
    }
  }
  GeneralCheck res;
  for (std::size_t i = 0; i < k; ++i) {
    Matrix sum = Matrix::Zero(out_f[i].rank(), out_f[i].rank());
    for (const auto& blk : v[i]) sum += blk * blk.adjoint();
    res.partition_residual = std::max(
        res.partition_residual, (sum - Matrix::Identity(sum.rows(), sum.cols())).norm());
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Matrix lhs = in[i].weighted().adjoint() * in[j].weighted();
      const Matrix mid = out_f[i].weighted().adjoint() * out_f[j].weighted();
      for (Eigen::Index p = 0; p < in[i].rank(); ++p)
        for (Eigen::Index q = 0; q < in[j].rank(); ++q) {
          const auto up = static_cast<std::size_t>(p);
          const auto uq = static_cast<std::size_t>(q);
          const Complex rhs = (v[i][up].adjoint() * mid * v[j][uq]).trace();
          res.gram_residual = std::max(res.gram_residual, std::abs(lhs(p, q) - rhs));
        }
    }
  res.valid = res.partition_residual <= tol && res.gram_residual <= tol;
  return res;
}

GeneralCheck verify_general_certificate(const std::vector<Matrix>& inputs,
                                        const std::vector<Matrix>& targets,
                                        const GeneralCertificate& cert, double tol) {
  std::vector<SpectralFactor> in, out;
  for (const auto& a : inputs) in.push_back(spectral_factor_psd(a));
  for (const auto& b : targets) out.push_back(spectral_factor_psd(b));
  return verify_general_certificate(in, out, cert.v, tol);
}

GeneralCertificate extract_general_certificate(const KrausChannel& ch,
                                               const std::vector<Matrix>& inputs,
                                               const std::vector<Matrix>& targets, double tol) {
  if (inputs.size() != targets.size()) {
    throw Error(ErrorCode::ShapeMismatch, "number of inputs and targets differ");
  }
  GeneralCertificate cert;
  const auto s = static_cast<Eigen::Index>(ch.operators.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const SpectralFactor fa = spectral_factor_psd(inputs[i]);
    const SpectralFactor fb = spectral_factor_psd(targets[i]);
    const Matrix yd = fb.weighted();
    const Matrix left = fb.diag.cwiseInverse().cast<Complex>().asDiagonal() * fb.isometry.adjoint();
    std::vector<Matrix> blocks;
    for (Eigen::Index j = 0; j < fa.rank(); ++j) {
      Matrix vij(fb.rank(), s);
      const Vector col = fa.isometry.col(j) * fa.diag(j);
      for (Eigen::Index l = 0; l < s; ++l) {
        const Vector image = ch.operators[static_cast<std::size_t>(l)] * col;
        const Vector c = left * image;
        const double defect = (yd * c - image).norm();
        if (defect > tol * std::max(1.0, image.norm())) {
          std::ostringstream os;
          os << "Kraus image of input " << i << " leaves the support of target " << i
             << " (defect " << defect << ")";
          throw Error(ErrorCode::InconsistentSystem, os.str());
        }
        vij.col(l) = c;
      }
      blocks.push_back(std::move(vij));
    }
    cert.input_factors.push_back(fa);
    cert.target_factors.push_back(fb);
    cert.v.push_back(std::move(blocks));
  }
  return cert;
}

CorrelationFormResult correlation_form_check(const Matrix& x, const std::vector<Matrix>& targets,
                                             const PureOptions& options) {
  CorrelationFormResult out;
  const Eigen::Index m = targets.front().rows();
  // Pure targets purify to themselves; ȳ ⊗ y would square the overlaps.
  bool all_pure = true;
  for (const auto& b : targets) all_pure = all_pure && spectral_factor(DensityMatrix::validate(b)).rank() == 1;
  for (const auto& b : targets)
    out.purifications.push_back(purify(DensityMatrix::validate(b), all_pure ? 1 : m));
  const Matrix y = purification_columns(out.purifications);
  Certificate& cert = out.certificate;
  cert.route = "correlation-form";
  const CorrelationOutcome o = find_hadamard_correlation(x.adjoint() * x, y, options);
  cert.iterations = o.iterations;
  cert.warnings = o.warnings;
  if (o.verdict != Verdict::Feasible) {
    cert.verdict = Verdict::Indeterminate;
    cert.evidence = "SUFFICIENT_CONDITION_FAILED: " + o.evidence;
    return out;
  }
  FeasibilityProblem prob;
  prob.map_class = MapClass::TPCP;
  for (Eigen::Index i = 0; i < x.cols(); ++i) prob.inputs.push_back(x.col(i) * x.col(i).adjoint());
  prob.targets = targets;
  cert.correlation = o.m;
  const Matrix frame = tensor_frame(correlation_factor(o.m), y);
  attach_channel(cert, channel_from_frames(x, frame, m), prob);
  out.sufficient_condition_met = cert.verdict == Verdict::Feasible;
  return out;
}

}  // namespace qinterp
