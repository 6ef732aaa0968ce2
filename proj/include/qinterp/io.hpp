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

// JSON wire format. Matrices are {"rows", "cols", "data"} with data a
// row-major list of [re, im] pairs.

#include "json.hpp"

#include "qinterp/route.hpp"

namespace qinterp {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
/// Throws InvalidInput on malformed or non-finite data.
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");

struct ProblemFile {
  FeasibilityProblem problem;
  DecideOptions options;
};

ProblemFile problem_from_json(const Json& j);
Json problem_to_json(const FeasibilityProblem& p, const DecideOptions& options = {});

Json channel_to_json(const KrausChannel& ch);
/// Accepts a bare channel object or a certificate holding "channel".
KrausChannel channel_from_json(const Json& j);

Json screen_to_json(const ScreenResult& s);
Json certificate_to_json(const Certificate& c);

}  // namespace qinterp
