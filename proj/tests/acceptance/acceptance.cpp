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

// Acceptance gate: one PASS/FAIL line per criterion. Tolerances and sample
// sizes are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <tuple>
#include <utility>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qinterp/commands.hpp"
#include "qinterp/io.hpp"
#include "qinterp/mixed.hpp"
#include "qinterp/oracle.hpp"
#include "qinterp/pure.hpp"
#include "qinterp/qubit.hpp"
#include "qinterp/route.hpp"
#include "random.hpp"

#ifndef QINTERP_TEST_DATA
#define QINTERP_TEST_DATA "."
#endif

namespace {

using namespace qinterp;
using qtest::Rng;

constexpr double kExampleTol = 5e-4;
constexpr double kResidualTol = 1e-7;
constexpr double kGramTol = 1e-8;
constexpr double kClosedFormTol = 1e-9;
constexpr double kBoundaryBand = 1e-7;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

struct QubitExample {
  Matrix a1 = mat2(0.8, 0, 0, 0.2);
  Matrix a2 = mat2(1.0 / 3, 0, 0, 2.0 / 3);
  Matrix b1 = mat2(0.25, std::sqrt(3.0) / 4, std::sqrt(3.0) / 4, 0.75);
  Matrix b2 = mat2(0.5, 0.5, 0.5, 0.5);
};

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const QubitExample ex;
  const double fa = fidelity(ex.a1, ex.a2);
  const double fb = fidelity(ex.b1, ex.b2);
  const double ta = trace_norm(ex.a1 - 5.0 * ex.a2);
  const double tb = trace_norm(ex.b1 - 5.0 * ex.b2);
  o.pass = std::abs(fa - 0.8815) <= kExampleTol && std::abs(fb - 0.9659) <= kExampleTol &&
           std::abs(ta - 4.0) <= kExampleTol && std::abs(tb - 4.1641) <= kExampleTol;

  std::ostringstream out, err;
  const int code =
      cmd_decide({std::string(QINTERP_TEST_DATA) + "/qubit_example.json"}, {}, out, err);
  const Json cert = Json::parse(out.str());
  const bool via_trace_norm = cert.value("route", "") == "screen:trace-norm";
  o.pass = o.pass && code == 1 && cert.value("verdict", "") == "INFEASIBLE" && via_trace_norm;

  FeasibilityProblem p;
  p.inputs = {ex.a1, ex.a2};
  p.targets = {ex.b1, ex.b2};
  p.map_class = MapClass::TPCP;
  const Certificate oracle = decide_general(p);
  o.pass = o.pass && oracle.verdict == Verdict::Infeasible;
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 1.0;
  std::ostringstream d;
  d << "F(A)=" << fa << " F(B)=" << fb << " |A1-5A2|=" << ta << " |B1-5B2|=" << tb
    << "; cli exit " << code << " route " << cert.value("route", "") << "; oracle "
    << to_string(oracle.verdict) << "; " << secs << " s";
  o.detail = d.str();
  return o;
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const Vector mix = (e1 + e2) / std::sqrt(2.0);
  const GramPair g = GramPair::from_columns({e1, mix}, {e1, e2});
  const Certificate cp = decide_pure_cp(g);
  const Certificate tpcp = decide_pure_tpcp(g);
  const GramPair h = GramPair::from_columns({e1, e1}, {e1, Vector(2.0 * e1)});
  const Certificate cp2 = decide_pure_cp(h);
  bool verified = false;
  if (cp.channel) verified = residuals_pass(compute_residuals(*cp.channel, g.as_problem(MapClass::CP)), g.as_problem(MapClass::CP));
  const double secs = seconds_since(t0);
  o.pass = cp.verdict == Verdict::Feasible && verified && tpcp.verdict == Verdict::Infeasible &&
           cp2.verdict == Verdict::Infeasible && secs < 1.0;
  std::ostringstream d;
  d << "CP " << to_string(cp.verdict) << (verified ? " (verified)" : " (unverified)") << ", TPCP "
    << to_string(tpcp.verdict) << ", e1,e1 -> e1,2e1 CP " << to_string(cp2.verdict) << "; "
    << secs << " s";
  o.detail = d.str();
  return o;
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20261016);
  constexpr int kPerClass = 500;
  int feasible = 0, total = 0, verified = 0;
  double worst = 0.0;
  std::ostringstream failures;
  std::map<std::string, int> routes;
  for (MapClass cls : {MapClass::CP, MapClass::TPCP, MapClass::UCP, MapClass::UTPCP}) {
    for (int it = 0; it < kPerClass; ++it) {
      std::uniform_int_distribution<int> dim(2, 4), kk(1, 4);
      const Eigen::Index n = dim(rng);
      const Eigen::Index m = cls == MapClass::UTPCP ? n : dim(rng);
      const int k = kk(rng);
      std::uniform_int_distribution<int> rk(1, static_cast<int>(n)), kr(1, static_cast<int>(n * m));
      const KrausChannel ch = qtest::random_channel(cls, n, m, kr(rng), rng);
      std::vector<Matrix> inputs;
      for (int i = 0; i < k; ++i) inputs.push_back(qtest::random_density(n, rk(rng), rng));
      const FeasibilityProblem p = qtest::images(ch, inputs, cls);
      const Certificate c = decide(p);
      ++total;
      routes[c.route]++;
      if (c.verdict == Verdict::Feasible) {
        ++feasible;
        const Residuals r = compute_residuals(*c.channel, p);
        worst = std::max({worst, r.interpolation, requires_tp(cls) ? r.tp : 0.0,
                          requires_unital(cls) ? r.unital : 0.0});
        if (residuals_pass(r, p, kResidualTol)) ++verified;
      }
      if (c.verdict != Verdict::Feasible && failures.tellp() < 400) {
        failures << " [" << to_string(cls) << " n=" << n << " m=" << m << " k=" << k << " "
                 << to_string(c.verdict) << " via " << c.route << ": " << c.evidence << "]";
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = feasible == total && verified == total && secs < 120.0;
  std::ostringstream d;
  d << feasible << "/" << total << " FEASIBLE, " << verified << " verified, worst residual "
    << worst << ", " << secs << " s; routes:";
  for (const auto& [r, cnt] : routes) d << " " << r << "=" << cnt;
  d << failures.str();
  o.detail = d.str();
  return o;
}


double metric(const Certificate& c, const char* key, double fallback) {
  const auto it = c.metrics.find(key);
  return it == c.metrics.end() ? fallback : it->second;
}

bool near_boundary(const Certificate& c) {
  for (const char* key : {"fidelity_margin", "reduced_min_eigenvalue", "forced_min_eigenvalue"})
    if (std::abs(metric(c, key, 1.0)) < kBoundaryBand) return true;
  return false;
}

// Unit columns x_i (n×k) with X*X = (C*C) ∘ (Y*Y) for random unit c_i, y_i;
// needs k ≤ n.
std::pair<Matrix, Matrix> correlated_pure_pair(Eigen::Index n, Eigen::Index m, Eigen::Index k,
                                               Rng& rng) {
  Matrix c(3, k), y(m, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    c.col(i) = qtest::random_unit(3, rng);
    y.col(i) = qtest::random_unit(m, rng);
  }
  const Matrix g = hadamard(c.adjoint() * c, y.adjoint() * y);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const RealVector vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix factor = vals.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  const Matrix x = qtest::random_isometry(n, k, rng) * factor;
  return {x, y};
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(4242);
  int compared = 0, agreed = 0, excluded = 0;
  std::map<std::string, int> tally;
  std::ostringstream failures;
  auto record = [&](const std::string& label, const Certificate& fast, const FeasibilityProblem& p) {
    if (near_boundary(fast)) {
      ++excluded;
      return;
    }
    const Certificate oracle = decide_general(p);
    ++compared;
    tally[label + ":" + to_string(fast.verdict)]++;
    if (oracle.verdict == fast.verdict) {
      ++agreed;
    } else if (failures.tellp() < 400) {
      failures << " [" << label << " fast " << to_string(fast.verdict) << " (" << fast.evidence
               << ") oracle " << to_string(oracle.verdict) << " (" << oracle.evidence << ")]";
    }
  };

  for (int it = 0; it < 200; ++it) {
    std::uniform_int_distribution<int> rk(1, 2);
    const Matrix a1 = qtest::random_density(2, rk(rng), rng);
    const Matrix a2 = qtest::random_density(2, rk(rng), rng);
    Matrix b1, b2;
    if (it % 2 == 0) {
      std::uniform_int_distribution<int> kr(1, 4);
      const KrausChannel ch = qtest::random_channel(MapClass::TPCP, 2, 2, kr(rng), rng);
      b1 = ch.apply(a1);
      b2 = ch.apply(a2);
    } else {
      b1 = qtest::random_density(2, rk(rng), rng);
      b2 = qtest::random_density(2, rk(rng), rng);
    }
    FeasibilityProblem p;
    p.inputs = {a1, a2};
    p.targets = {b1, b2};
    p.map_class = MapClass::TPCP;
    const Certificate fast = decide_qubit_k2(validate_density(a1), validate_density(a2),
                                             validate_density(b1), validate_density(b2));
    record("qubit-k2", fast, p);
  }

  for (int it = 0; it < 200; ++it) {
    std::uniform_int_distribution<int> dim(2, 3), kk(1, 3);
    const Eigen::Index n = dim(rng), m = dim(rng), k = kk(rng);
    const MapClass cls = it % 2 == 0 ? MapClass::TPCP : MapClass::CP;
    Matrix x(n, k), y(m, k);
    const bool structured = (it / 2) % 2 == 0;
    if (cls == MapClass::TPCP && structured && k <= n) {
      std::tie(x, y) = correlated_pure_pair(n, m, k, rng);
    } else {
      for (Eigen::Index i = 0; i < k; ++i) {
        x.col(i) = qtest::random_unit(n, rng);
        y.col(i) = qtest::random_unit(m, rng);
      }
      if (cls == MapClass::CP && structured) y = qtest::ginibre(m, n, rng) * x;
    }
    std::vector<Vector> xs, ys;
    for (Eigen::Index i = 0; i < k; ++i) {
      xs.push_back(x.col(i));
      ys.push_back(y.col(i));
    }
    const GramPair g = GramPair::from_columns(xs, ys);
    const Certificate fast = cls == MapClass::TPCP ? decide_pure_tpcp(g) : decide_pure_cp(g);
    record(cls == MapClass::TPCP ? "pure-tpcp" : "pure-cp", fast, g.as_problem(cls));
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = compared > 0 && agreed == compared && secs < 300.0;
  std::ostringstream d;
  d << agreed << "/" << compared << " agree, " << excluded << " excluded near the boundary, "
    << secs << " s;";
  for (const auto& [key, cnt] : tally) d << " " << key << "=" << cnt;
  d << failures.str();
  o.detail = d.str();
  return o;
}

Outcome criterion5() {
  Rng rng(5);
  double worst = 0.0;
  int checked = 0;
  std::vector<double> grid;
  for (int j = 0; j < 20; ++j) grid.push_back(std::pow(10.0, -2.0 + 4.0 * j / 19.0));
  for (int it = 0; it < 1000; ++it) {
    std::uniform_int_distribution<int> dim(2, 5);
    const Eigen::Index n = dim(rng);
    const Vector x1 = qtest::random_unit(n, rng);
    const Vector x2 = qtest::random_unit(n, rng);
    const double overlap = std::norm(x1.dot(x2));
    for (double t : grid) {
      const double lhs = trace_norm(x1 * x1.adjoint() - t * x2 * x2.adjoint());
      const double rhs = std::sqrt((1 + t) * (1 + t) - 4 * t * overlap);
      worst = std::max(worst, std::abs(lhs - rhs));
      ++checked;
    }
  }
  Outcome o;
  o.pass = worst <= kClosedFormTol;
  std::ostringstream d;
  d << checked << " evaluations, worst deviation " << worst;
  o.detail = d.str();
  return o;
}

Outcome criterion6() {
  Rng rng(6);
  int tpcp_certs = 0, tpcp_ok = 0, target_certs = 0, target_ok = 0, equality_ok = 0;
  double worst_gram = 0.0, worst_b = 0.0;
  for (int it = 0; it < 100; ++it) {
    std::uniform_int_distribution<int> dim(2, 4);
    const Eigen::Index n = dim(rng), m = dim(rng);
    std::uniform_int_distribution<int> kk(1, static_cast<int>(n));
    const Eigen::Index k = kk(rng);
    const auto [x, y] = correlated_pure_pair(n, m, k, rng);
    std::vector<Vector> xs, ys;
    for (Eigen::Index i = 0; i < k; ++i) {
      xs.push_back(x.col(i));
      ys.push_back(y.col(i));
    }
    const GramPair g = GramPair::from_columns(xs, ys);
    const Certificate c = decide_pure_tpcp(g);
    if (c.verdict != Verdict::Feasible || !c.correlation) continue;
    ++tpcp_certs;
    const Matrix& mc = *c.correlation;
    const double gram = (g.gx() - hadamard(mc, g.gy())).cwiseAbs().maxCoeff();
    const double diag = (mc.diagonal().array() - 1.0).abs().maxCoeff();
    worst_gram = std::max({worst_gram, gram, diag});
    if (gram <= kGramTol && diag <= kGramTol && qtest::min_eigenvalue(mc) >= -kGramTol) ++tpcp_ok;
  }

  // Prescribed T(I): F_j = Y diag(C_j,:) X⁺ plus maps that annihilate range(X).
  for (int it = 0; it < 100; ++it) {
    std::uniform_int_distribution<int> dim(2, 4);
    const Eigen::Index n = dim(rng), m = dim(rng);
    const bool full = it % 4 == 0;
    std::uniform_int_distribution<int> kk(1, static_cast<int>(n));
    const Eigen::Index k = full ? n : kk(rng);
    const Matrix x = qtest::random_isometry(n, n, rng).leftCols(k) *
                     (Matrix::Identity(k, k) + 0.3 * qtest::ginibre(k, k, rng));
    Matrix xn = x;
    for (Eigen::Index i = 0; i < k; ++i) xn.col(i).normalize();
    Matrix y(m, k), c(2, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      y.col(i) = qtest::random_unit(m, rng);
      c.col(i) = qtest::random_unit(2, rng);
    }
    const Matrix xp = pinv(xn);
    Matrix b = Matrix::Zero(m, m);
    for (Eigen::Index j = 0; j < 2; ++j) {
      const Vector row = c.row(j).transpose();
      const Matrix f = y * row.asDiagonal() * xp;
      b += f * f.adjoint();
    }
    if (k < n) {
      const Matrix perp = orthonormal_complement(xn.householderQr().householderQ() *
                                                 Matrix::Identity(n, k));
      const Matrix f = qtest::ginibre(m, perp.cols(), rng) * perp.adjoint();
      b += f * f.adjoint();
    }
    std::vector<Vector> xs, ys;
    for (Eigen::Index i = 0; i < k; ++i) {
      xs.push_back(xn.col(i));
      ys.push_back(y.col(i));
    }
    const GramPair g = GramPair::from_columns(xs, ys);
    const Certificate cert = decide_pure_cp_with_target(g, b);
    if (cert.verdict != Verdict::Feasible || !cert.channel) continue;
    ++target_certs;
    const double dev = (cert.channel->identity_image() - b).norm();
    worst_b = std::max(worst_b, dev);
    if (dev <= kResidualTol) {
      ++target_ok;
      if (full && metric(cert, "equality_branch", 0.0) == 1.0) ++equality_ok;
    }
  }
  Outcome o;
  o.pass = tpcp_certs > 0 && tpcp_ok == tpcp_certs && target_certs > 0 &&
           target_ok == target_certs && equality_ok > 0;
  std::ostringstream d;
  d << "pure TPCP " << tpcp_ok << "/" << tpcp_certs << " (worst " << worst_gram
    << "); prescribed T(I) " << target_ok << "/" << target_certs << " (worst " << worst_b
    << "), equality branch " << equality_ok;
  o.detail = d.str();
  return o;
}

Outcome criterion7() {
  Rng rng(7);
  int pur_ok = 0, iso_ok = 0, gen_ok = 0;
  double worst_gram = 0.0;
  constexpr int kChannels = 100;
  for (int it = 0; it < kChannels; ++it) {
    std::uniform_int_distribution<int> dim(2, 4), kk(1, 4);
    const Eigen::Index n = dim(rng), m = dim(rng);
    std::uniform_int_distribution<int> kr(1, static_cast<int>(n * m));
    const KrausChannel ch = qtest::random_channel(MapClass::TPCP, n, m, kr(rng), rng);
    const int k = kk(rng);

    Matrix x(n, k);
    std::vector<Matrix> pure_targets;
    for (int i = 0; i < k; ++i) {
      x.col(i) = qtest::random_unit(n, rng);
      pure_targets.push_back(ch.apply(x.col(i) * x.col(i).adjoint()));
    }
    const PurificationCertificate pc = extract_purification_certificate(ch, x);
    const PurificationCheck check = verify_purification_certificate(x, pure_targets, pc);
    worst_gram = std::max(worst_gram, check.gram_residual);
    if (check.valid && check.gram_residual <= kResidualTol) ++pur_ok;
    const IsometryCertificate ic = isometry_certificate_from_purifications(pure_targets, pc);
    if (verify_isometry_certificate(x, pure_targets, ic).valid) ++iso_ok;

    std::vector<Matrix> inputs, targets;
    std::uniform_int_distribution<int> rk(1, static_cast<int>(n));
    for (int i = 0; i < k; ++i) {
      inputs.push_back(qtest::random_density(n, rk(rng), rng));
      targets.push_back(ch.apply(inputs.back()));
    }
    const GeneralCertificate gc = extract_general_certificate(ch, inputs, targets);
    if (verify_general_certificate(inputs, targets, gc).valid) ++gen_ok;
  }
  Outcome o;
  o.pass = pur_ok == kChannels && iso_ok == kChannels && gen_ok == kChannels;
  std::ostringstream d;
  d << "purification " << pur_ok << "/" << kChannels << " (worst Gram residual " << worst_gram
    << "), partial isometry " << iso_ok << "/" << kChannels << ", spectral-block " << gen_ok
    << "/" << kChannels;
  o.detail = d.str();
  return o;
}

Outcome criterion8() {
  const Complex i(0.0, 1.0);
  const double h = 0.5;
  const std::vector<Matrix> inputs = {mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), mat2(h, h, h, h),
                                      mat2(h, -h * i, h * i, h)};
  QubitProblem p;
  for (const auto& a : inputs) {
    p.inputs.push_back(validate_density(a));
    p.targets.push_back(validate_density(a.transpose()));
  }
  const Certificate c = decide_qubit_k4(p);
  const double low = metric(c, "choi_min_eigenvalue", 0.0);
  Outcome o;
  o.pass = c.verdict == Verdict::Infeasible && low < -kBoundaryBand;
  std::ostringstream d;
  d << to_string(c.verdict) << ", minimum Choi eigenvalue " << low << " (" << c.evidence << ")";
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "qubit example reproduction", criterion1},
      {2, "pure-state counterexamples", criterion2},
      {3, "round-trip soundness", criterion3},
      {4, "fast-path and oracle agreement", criterion4},
      {5, "closed-form trace norm", criterion5},
      {6, "certificate equalities", criterion6},
      {7, "mixed-state certificates", criterion7},
      {8, "transpose-map control", criterion8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
