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

#include "qinterp/io.hpp"

#include <cmath>

namespace qinterp {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidInput, msg); }

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) bad(what + ": missing field '" + key + "'");
  return j.at(key);
}

Eigen::Index positive_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) bad(what + " must be a positive integer");
  return static_cast<Eigen::Index>(j.get<long long>());
}

double finite_number(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what + " is not finite");
  return v;
}

std::vector<Matrix> matrix_list(const Json& j, const char* key) {
  const Json& arr = field(j, key, "problem");
  if (!arr.is_array()) bad(std::string("'") + key + "' must be an array");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(matrix_from_json(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  const Eigen::Index rows = positive_int(field(j, "rows", what), what + ".rows");
  const Eigen::Index cols = positive_int(field(j, "cols", what), what + ".cols");
  const Json& data = field(j, "data", what);
  if (!data.is_array()) bad(what + ".data must be an array");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    bad(what + ": data has " + std::to_string(data.size()) + " entries, expected rows*cols = " +
        std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  for (Eigen::Index idx = 0; idx < rows * cols; ++idx) {
    const Json& e = data[static_cast<std::size_t>(idx)];
    const std::string where = what + ".data[" + std::to_string(idx) + "]";
    if (e.is_number()) {
      m(idx / cols, idx % cols) = Complex(finite_number(e, where), 0.0);
      continue;
    }
    if (!e.is_array() || e.size() != 2) bad(where + " must be a [re, im] pair");
    m(idx / cols, idx % cols) = Complex(finite_number(e[0], where), finite_number(e[1], where));
  }
  return m;
}

ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object()) bad("problem must be a JSON object");
  ProblemFile f;
  FeasibilityProblem& p = f.problem;
  const Json& cls = field(j, "map_class", "problem");
  if (!cls.is_string()) bad("map_class must be a string");
  p.map_class = map_class_from_string(cls.get<std::string>());
  p.inputs = matrix_list(j, "inputs");
  p.targets = matrix_list(j, "targets");
  if (j.contains("prescribed_identity_image") && !j.at("prescribed_identity_image").is_null()) {
    p.identity_image = matrix_from_json(j.at("prescribed_identity_image"), "prescribed_identity_image");
  }
  if (j.contains("options")) {
    const Json& o = j.at("options");
    if (!o.is_object()) bad("options must be an object");
    if (o.contains("tol")) f.options.tol = finite_number(o.at("tol"), "options.tol");
    if (o.contains("boundary_tol")) {
      f.options.boundary_tol = finite_number(o.at("boundary_tol"), "options.boundary_tol");
    }
    if (o.contains("max_iter")) {
      f.options.max_iter = static_cast<int>(positive_int(o.at("max_iter"), "options.max_iter"));
    }
    if (o.contains("force_oracle")) {
      if (!o.at("force_oracle").is_boolean()) bad("options.force_oracle must be a boolean");
      f.options.force_oracle = o.at("force_oracle").get<bool>();
    }
  }
  p.validate();
  return f;
}

Json problem_to_json(const FeasibilityProblem& p, const DecideOptions& options) {
  Json j;
  j["version"] = 1;
  j["map_class"] = to_string(p.map_class);
  j["inputs"] = Json::array();
  for (const auto& a : p.inputs) j["inputs"].push_back(matrix_to_json(a));
  j["targets"] = Json::array();
  for (const auto& b : p.targets) j["targets"].push_back(matrix_to_json(b));
  if (p.identity_image) j["prescribed_identity_image"] = matrix_to_json(*p.identity_image);
  j["options"] = {{"tol", options.tol},
                  {"max_iter", options.max_iter},
                  {"boundary_tol", options.boundary_tol},
                  {"force_oracle", options.force_oracle}};
  return j;
}

Json channel_to_json(const KrausChannel& ch) {
  Json kraus = Json::array();
  for (const auto& f : ch.operators) kraus.push_back(matrix_to_json(f));
  return {{"in_dim", ch.in_dim}, {"out_dim", ch.out_dim}, {"kraus", kraus},
          {"tp", ch.tp},         {"unital", ch.unital}};
}

KrausChannel channel_from_json(const Json& j) {
  if (!j.is_object()) bad("channel must be a JSON object");
  if (j.contains("channel")) {
    if (j.at("channel").is_null()) bad("certificate carries no channel");
    return channel_from_json(j.at("channel"));
  }
  const Eigen::Index n = positive_int(field(j, "in_dim", "channel"), "channel.in_dim");
  const Eigen::Index m = positive_int(field(j, "out_dim", "channel"), "channel.out_dim");
  const Json& kraus = field(j, "kraus", "channel");
  if (!kraus.is_array()) bad("channel.kraus must be an array");
  std::vector<Matrix> ops;
  for (std::size_t i = 0; i < kraus.size(); ++i)
    ops.push_back(matrix_from_json(kraus[i], "kraus[" + std::to_string(i) + "]"));
  return KrausChannel::from_operators(std::move(ops), n, m);
}

Json screen_to_json(const ScreenResult& s) {
  Json j = {{"name", s.name},     {"passed", s.passed}, {"margin", s.margin},
            {"pair", {s.i, s.j}}, {"detail", s.detail}};
  if (s.name == "trace-norm") j["t"] = s.t;
  return j;
}

Json certificate_to_json(const Certificate& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["route"] = c.route;
  j["channel"] = c.channel ? channel_to_json(*c.channel) : Json(nullptr);
  j["residuals"] = {{"interpolation", c.residuals.interpolation},
                    {"tp", c.residuals.tp},
                    {"unital", c.residuals.unital},
                    {"identity_image", c.residuals.identity_image}};
  j["screeners"] = Json::array();
  for (const auto& s : c.screeners) j["screeners"].push_back(screen_to_json(s));
  j["evidence"] = c.evidence;
  j["metrics"] = Json::object();
  for (const auto& [k, v] : c.metrics) j["metrics"][k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  j["iterations"] = c.iterations;
  j["warnings"] = c.warnings;
  if (c.correlation) j["correlation"] = matrix_to_json(*c.correlation);
  return j;
}

}  // namespace qinterp
