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


#include <cmath>
#include <complex>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "qinterp/channel.hpp"
#include "qinterp/oracle.hpp"
#include "qinterp/pure.hpp"
#include "random.hpp"

namespace {

using namespace qinterp;
using qtest::max_abs;
using qtest::unit;

GramPair pair_of(const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
  return GramPair::from_columns(xs, ys);
}

void expect_kraus_maps(const Certificate& c, const GramPair& g, double tol) {
  ASSERT_TRUE(c.channel);
  for (Eigen::Index i = 0; i < g.k(); ++i) {
    const Matrix a = g.x.col(i) * g.x.col(i).adjoint();
    const Matrix b = g.y.col(i) * g.y.col(i).adjoint();
    EXPECT_LE((c.channel->apply(a) - b).norm(), tol) << i;
  }
}

// Unit columns x_i with X*X = (C*C) ∘ (Y*Y), so a TPCP map x_i ↦ y_i exists.
GramPair correlated(Eigen::Index k, Eigen::Index m, qtest::Rng& rng) {
  Matrix y(m, k), c(3, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    y.col(i) = qtest::random_unit(m, rng);
    c.col(i) = qtest::random_unit(3, rng);
  }
  const Matrix gx = hadamard(c.adjoint() * c, y.adjoint() * y);
  const Matrix x = sqrt_psd(gx);
  std::vector<Vector> xs, ys;
  for (Eigen::Index i = 0; i < k; ++i) {
    xs.push_back(x.col(i));
    ys.push_back(y.col(i));
  }
  return pair_of(xs, ys);
}

TEST(pure, QuotientFastPath) {
  // (X*X)_12 = 1/2, (Y*Y)_12 = 1/√2: the forced M has off-diagonal 1/√2.
  const Vector x2 = 0.5 * unit(2, 0) + std::sqrt(0.75) * unit(2, 1);
  const Vector y2 = (unit(2, 0) + unit(2, 1)) / std::sqrt(2.0);
  const GramPair g = pair_of({unit(2, 0), x2}, {unit(2, 0), y2});
  const CorrelationOutcome o = find_hadamard_correlation(g.gx(), g.y);
  EXPECT_TRUE(o.fast_path);
  EXPECT_EQ(o.verdict, Verdict::Feasible);
  EXPECT_NEAR(std::abs(o.m(0, 1) - 1.0 / std::sqrt(2.0)), 0.0, 1e-12);
}

TEST(pure, IdenticalStatesGiveAllOnes) {
  qtest::Rng rng(70);
  std::vector<Vector> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(qtest::random_unit(3, rng));
  const GramPair g = pair_of(xs, xs);
  const Certificate c = decide_pure_tpcp(g);
  ASSERT_EQ(c.verdict, Verdict::Feasible);
  ASSERT_TRUE(c.correlation);
  EXPECT_LE(max_abs(*c.correlation - Matrix::Ones(3, 3)), 1e-10);
  expect_kraus_maps(c, g, 1e-9);
}

TEST(pure, OrthogonalTargetsNeedCpNotTpcp) {
  const GramPair g = pair_of({unit(2, 0), (unit(2, 0) + unit(2, 1)) / std::sqrt(2.0)},
                             {unit(2, 0), unit(2, 1)});
  EXPECT_EQ(decide_pure_tpcp(g).verdict, Verdict::Infeasible);
  const Certificate c = decide_pure_cp(g);
  ASSERT_EQ(c.verdict, Verdict::Feasible) << c.evidence;
  expect_kraus_maps(c, g, 1e-8);
  // Each Kraus operator acts diagonally on the frame: F_j X = Y Γ_j.
  for (const Matrix& f : c.channel->operators) {
    const Matrix gamma = g.y.completeOrthogonalDecomposition().pseudoInverse() * f * g.x;
    EXPECT_LE(max_abs(f * g.x - g.y * Matrix(gamma.diagonal().asDiagonal())), 1e-8);
  }
}

TEST(pure, RepeatedInputWithRescaledTargetIsInfeasible) {
  const GramPair g = pair_of({unit(2, 0), unit(2, 0)}, {unit(2, 0), 2.0 * unit(2, 0)});
  EXPECT_EQ(decide_pure_cp(g).verdict, Verdict::Infeasible);
  FeasibilityProblem p = g.as_problem(MapClass::CP);
  EXPECT_EQ(decide_general(p).verdict, Verdict::Infeasible);
}

TEST(pure, RelaxedDiagonalCriterionIsNeitherNecessaryNorSufficient) {
  // Criterion: X*X = M ∘ Y*Y for some PSD M with no constraint on diag M.
  // Orthogonal targets: M ∘ I is diagonal while X*X is not, so no M exists,
  // yet a CP map does.
  const GramPair first = pair_of({unit(2, 0), (unit(2, 0) + unit(2, 1)) / std::sqrt(2.0)},
                                 {unit(2, 0), unit(2, 1)});
  EXPECT_GT(std::abs(first.gx()(0, 1)), 0.5);
  EXPECT_NEAR(std::abs(first.gy()(0, 1)), 0.0, 1e-15);
  EXPECT_EQ(decide_pure_cp(first).verdict, Verdict::Feasible);

  // Repeated input: M = vv* with v = e1 + e2/2 satisfies the criterion, yet
  // no CP map exists.
  const GramPair second = pair_of({unit(2, 0), unit(2, 0)}, {unit(2, 0), 2.0 * unit(2, 0)});
  const Vector v = unit(2, 0) + 0.5 * unit(2, 1);
  const Matrix m = v * v.adjoint();
  EXPECT_GE(qtest::min_eigenvalue(m), -1e-15);
  EXPECT_LE(max_abs(hadamard(m, second.gy()) - second.gx()), 1e-15);
  EXPECT_EQ(decide_pure_cp(second).verdict, Verdict::Infeasible);
}

TEST(pure, TpcpRoundTripAndOracleAgreement) {
  qtest::Rng rng(71);
  for (int it = 0; it < 10; ++it) {
    const GramPair g = correlated(3, 2, rng);
    const Certificate c = decide_pure_tpcp(g);
    ASSERT_EQ(c.verdict, Verdict::Feasible) << c.evidence;
    expect_kraus_maps(c, g, 1e-8);
    EXPECT_TRUE(c.channel->tp);
    EXPECT_EQ(decide_general(g.as_problem(MapClass::TPCP)).verdict, Verdict::Feasible);
  }
  int infeasible = 0;
  for (int it = 0; it < 10; ++it) {
    std::vector<Vector> xs, ys;
    for (int i = 0; i < 3; ++i) {
      xs.push_back(qtest::random_unit(3, rng));
      ys.push_back(qtest::random_unit(2, rng));
    }
    const GramPair g = pair_of(xs, ys);
    const Certificate fast = decide_pure_tpcp(g);
    const Certificate slow = decide_general(g.as_problem(MapClass::TPCP));
    if (slow.verdict == Verdict::Indeterminate) continue;
    EXPECT_EQ(fast.verdict, slow.verdict) << it;
    if (fast.verdict == Verdict::Infeasible) ++infeasible;
  }
  EXPECT_GT(infeasible, 0);
}

TEST(pure, NonUnitColumnsRejectedForTpcp) {
  const GramPair g = pair_of({unit(2, 0)}, {2.0 * unit(2, 0)});
  try {
    decide_pure_tpcp(g);
    FAIL() << "expected NotNormalized";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
  }
}

TEST(pure, DecisionsIgnoreColumnPhases) {
  qtest::Rng rng(72);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int it = 0; it < 6; ++it) {
    const GramPair g = it % 2 == 0 ? correlated(3, 2, rng)
                                   : pair_of({qtest::random_unit(2, rng), qtest::random_unit(2, rng),
                                              qtest::random_unit(2, rng)},
                                             {qtest::random_unit(2, rng), qtest::random_unit(2, rng),
                                              qtest::random_unit(2, rng)});
    GramPair h = g;
    for (Eigen::Index i = 0; i < g.k(); ++i) {
      h.x.col(i) *= std::polar(1.0, angle(rng));
      h.y.col(i) *= std::polar(1.0, angle(rng));
    }
    EXPECT_EQ(decide_pure_tpcp(g).verdict, decide_pure_tpcp(h).verdict);
    EXPECT_EQ(decide_pure_cp(g).verdict, decide_pure_cp(h).verdict);
  }
}

TEST(pure, SmallOverlapsAreFlagged) {
  const Vector y2 = (1e-8 * unit(2, 0) + unit(2, 1)).normalized();
  const Vector x2 = (1e-8 * unit(2, 0) + unit(2, 1)).normalized();
  const Certificate c = decide_pure_tpcp(pair_of({unit(2, 0), x2}, {unit(2, 0), y2}));
  EXPECT_EQ(c.verdict, Verdict::Feasible);
  ASSERT_FALSE(c.warnings.empty());
  EXPECT_NE(c.warnings.front().find("ill-conditioned"), std::string::npos);
}

TEST(pure, PrescribedIdentityImageEqualityBranch) {
  // Orthonormal inputs spanning C^n force T(I) = Σ y_i y_i*.
  qtest::Rng rng(73);
  const Matrix u = qtest::random_unitary(3, rng);
  std::vector<Vector> xs, ys;
  for (int i = 0; i < 3; ++i) {
    xs.push_back(u.col(i));
    ys.push_back(qtest::ginibre(2, 1, rng).col(0));
  }
  const GramPair g = pair_of(xs, ys);
  const Matrix b = g.y * g.y.adjoint();
  const Certificate c = decide_pure_cp_with_target(g, b);
  ASSERT_EQ(c.verdict, Verdict::Feasible) << c.evidence;
  EXPECT_EQ(c.metrics.at("equality_branch"), 1.0);
  EXPECT_LE((c.channel->identity_image() - b).norm(), 1e-7);
  expect_kraus_maps(c, g, 1e-8);
  EXPECT_NE(decide_pure_cp_with_target(g, 1.5 * b).verdict, Verdict::Feasible);
}

TEST(pure, PrescribedIdentityImageRoundTrip) {
  // F_j = Y diag(C_j,:) X⁺ + G_j P with P the projector onto ran(X)⊥.
  qtest::Rng rng(74);
  for (int it = 0; it < 5; ++it) {
    const Eigen::Index n = 4, m = 3, k = 2;
    const Matrix x = qtest::ginibre(n, k, rng);
    const Matrix y = qtest::ginibre(m, k, rng);
    Matrix cm(3, k);
    for (Eigen::Index i = 0; i < k; ++i) cm.col(i) = qtest::random_unit(3, rng);
    const Matrix xp = x.completeOrthogonalDecomposition().pseudoInverse();
    const Matrix perp = Matrix::Identity(n, n) - x * xp;
    Matrix b = Matrix::Zero(m, m);
    for (int j = 0; j < 3; ++j) {
      const Matrix f = y * Matrix(cm.row(j).transpose().asDiagonal()) * xp +
                       qtest::ginibre(m, n, rng) * perp;
      b += f * f.adjoint();
    }
    std::vector<Vector> xs, ys;
    for (Eigen::Index i = 0; i < k; ++i) {
      xs.push_back(x.col(i));
      ys.push_back(y.col(i));
    }
    const GramPair g = pair_of(xs, ys);
    const Certificate c = decide_pure_cp_with_target(g, b);
    ASSERT_EQ(c.verdict, Verdict::Feasible) << c.evidence;
    EXPECT_EQ(c.metrics.at("equality_branch"), 0.0);
    EXPECT_LE((c.channel->identity_image() - b).norm(), 1e-7);
    expect_kraus_maps(c, g, 1e-8);
  }
}

TEST(pure, UnitalCp) {
  qtest::Rng rng(75);
  std::vector<Vector> xs;
  for (int i = 0; i < 2; ++i) xs.push_back(qtest::random_unit(3, rng));
  const Certificate same = decide_pure_unital_cp(pair_of(xs, xs));
  ASSERT_EQ(same.verdict, Verdict::Feasible) << same.evidence;
  EXPECT_TRUE(same.channel->unital);
  for (int it = 0; it < 6; ++it) {
    std::vector<Vector> ys;
    for (int i = 0; i < 2; ++i) ys.push_back(0.8 * qtest::random_unit(2, rng));
    const GramPair g = pair_of(xs, ys);
    const Certificate fast = decide_pure_unital_cp(g);
    const Certificate slow = decide_general(g.as_problem(MapClass::UCP));
    if (slow.verdict == Verdict::Indeterminate || fast.verdict == Verdict::Indeterminate) continue;
    EXPECT_EQ(fast.verdict, slow.verdict) << it;
  }
}

TEST(pure, UnitalTpcp) {
  qtest::Rng rng(76);
  std::vector<Vector> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(qtest::random_unit(3, rng));
  std::vector<Vector> ys2;
  for (int i = 0; i < 3; ++i) ys2.push_back(qtest::random_unit(2, rng));
  EXPECT_EQ(decide_pure_unital_tpcp(pair_of(xs, ys2)).verdict, Verdict::Infeasible);

  const Matrix u = qtest::random_unitary(3, rng);
  std::vector<Vector> ys;
  for (const auto& x : xs) ys.push_back(u * x);
  const Certificate c = decide_pure_unital_tpcp(pair_of(xs, ys));
  ASSERT_EQ(c.verdict, Verdict::Feasible) << c.evidence;
  EXPECT_TRUE(c.channel->tp && c.channel->unital);
  ASSERT_TRUE(c.correlation);
  EXPECT_LE(max_abs(*c.correlation - Matrix::Ones(3, 3)), 1e-8);
}

TEST(pure, KernelFaceAndFactors) {
  qtest::Rng rng(77);
  // Two copies of the same input: ker X*X is spanned by e1 − e2.
  const Vector x = qtest::random_unit(2, rng);
  const GramPair g = pair_of({x, x}, {unit(2, 0), unit(2, 0)});
  const Matrix q = kernel_face(g.gx(), g.y, 1e-9);
  EXPECT_EQ(q.cols(), 1);
  EXPECT_LE(max_abs(q.adjoint() * q - Matrix::Identity(1, 1)), 1e-12);

  const Matrix c = qtest::ginibre(2, 3, rng);
  const Matrix m = c.adjoint() * c;
  const Matrix f = correlation_factor(m);
  EXPECT_EQ(f.rows(), 2);
  EXPECT_LE(max_abs(f.adjoint() * f - m), 1e-10);
  const Matrix y = qtest::ginibre(2, 3, rng);
  const Matrix frame = tensor_frame(f, y);
  EXPECT_LE(max_abs(frame.adjoint() * frame - hadamard(m, y.adjoint() * y)), 1e-10);
}

}  // namespace
