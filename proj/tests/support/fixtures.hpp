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


#pragma once

// Small fixed matrices shared by the unit tests.

#include <cmath>

#include "qinterp/linalg.hpp"

namespace qtest {

using qinterp::Complex;
using qinterp::Matrix;
using qinterp::Vector;

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Vector unit(Eigen::Index n, Eigen::Index i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// The qubit pair with equal-looking fidelities but a trace-norm violation at t = 5.
struct QubitCounterexample {
  Matrix a1 = mat2(0.8, 0, 0, 0.2);
  Matrix a2 = mat2(1.0 / 3, 0, 0, 2.0 / 3);
  Matrix b1 = mat2(0.25, std::sqrt(3.0) / 4, std::sqrt(3.0) / 4, 0.75);
  Matrix b2 = mat2(0.5, 0.5, 0.5, 0.5);
};

}  // namespace qtest
