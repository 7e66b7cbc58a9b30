// Copyright 2026 The attrisbm Authors.
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

#include "attrisbm/json_io.hpp"

#include <fstream>
#include <sstream>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

Eigen::MatrixXd MatrixFromJson(const nlohmann::json& rows, const char* name) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(name) + " must be a non-empty array of rows");
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != c) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string(name) + " rows have unequal length");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

nlohmann::ordered_json MatrixToJson(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SymmetricSpec SymmetricFromJson(const nlohmann::json& s) {
  SymmetricSpec spec;
  spec.K = s.value("K", 2);
  spec.R = s.value("R", 2);
  spec.a = s.at("a").get<double>();
  spec.b = s.at("b").get<double>();
  spec.c = s.at("c").get<double>();
  spec.n = s.value("n", 0);
  return spec;
}

}  // namespace

ParsedParams ParamsFromJson(const nlohmann::json& doc) {
  try {
    if (doc.contains("symmetric")) {
      SymmetricSpec spec = SymmetricFromJson(doc.at("symmetric"));
      if (spec.n <= 0) {
        throw Error(ErrorCode::kInvalidInput, "symmetric params need n");
      }
      return {ExpandSymmetric(spec), spec};
    }
    const int n = doc.at("n").get<int>();
    const int K = doc.at("K").get<int>();
    const int R = doc.at("R").get<int>();
    std::vector<int> sizes;
    if (doc.contains("group_sizes")) {
      sizes = doc.at("group_sizes").get<std::vector<int>>();
    } else {
      if (R <= 0 || n % R != 0) {
        throw Error(ErrorCode::kInvalidInput,
                    "group_sizes omitted but R does not divide n");
      }
      sizes.assign(R, n / R);
    }
    Eigen::MatrixXd prior;
    if (doc.contains("prior")) {
      prior = MatrixFromJson(doc.at("prior"), "prior");
    } else {
      prior = Eigen::MatrixXd::Constant(K, R, 1.0 / K);
    }
    return {ModelParams(n, K, R, std::move(sizes), std::move(prior),
                        MatrixFromJson(doc.at("affinity"), "affinity")),
            std::nullopt};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed params JSON: ") + e.what());
  }
}

ParsedParams ReadParamsFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                path.string() + ": invalid JSON: " + e.what());
  }
  return ParamsFromJson(doc);
}

nlohmann::ordered_json ParamsToJson(const ModelParams& params) {
  nlohmann::ordered_json j;
  j["n"] = params.n();
  j["K"] = params.K();
  j["R"] = params.R();
  j["group_sizes"] = params.group_sizes();
  j["prior"] = MatrixToJson(params.prior());
  j["affinity"] = MatrixToJson(params.affinity());
  return j;
}

SymmetricSpec ParseSymmetricTokens(const std::vector<std::string>& tokens) {
  SymmetricSpec spec;
  bool has_a = false;
  bool has_b = false;
  bool has_c = false;
  for (const std::string& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidInput,
                  "expected key=value, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    std::istringstream in(value);
    double x = 0.0;
    std::string rest;
    if (!(in >> x) || (in >> rest)) {
      throw Error(ErrorCode::kInvalidInput, "bad number in '" + token + "'");
    }
    if (key == "K") {
      spec.K = static_cast<int>(x);
    } else if (key == "R") {
      spec.R = static_cast<int>(x);
    } else if (key == "n") {
      spec.n = static_cast<int>(x);
    } else if (key == "a") {
      spec.a = x;
      has_a = true;
    } else if (key == "b") {
      spec.b = x;
      has_b = true;
    } else if (key == "c") {
      spec.c = x;
      has_c = true;
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown key '" + key + "'");
    }
  }
  if (!has_a || !has_c) {
    throw Error(ErrorCode::kInvalidInput, "symmetric spec needs a and c");
  }
  // b only matters when R > 1.
  if (!has_b) {
    if (spec.R > 1) {
      throw Error(ErrorCode::kInvalidInput, "symmetric spec needs b when R > 1");
    }
    spec.b = spec.c;
  }
  return spec;
}

}  // namespace attrisbm
