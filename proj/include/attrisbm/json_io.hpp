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

// JSON documents for model parameters.
//
// Either the symmetric form
//   {"symmetric": {"K": 2, "R": 2, "a": 10, "b": 6, "c": 2, "n": 4000}}
// or the full form
//   {"n": 4, "K": 2, "R": 1, "group_sizes": [4],
//    "prior": [[0.5], [0.5]],          // K rows of R entries
//    "affinity": [[9, 1], [1, 3]]}     // KR x KR, cell (k, r) at k * R + r
// "group_sizes" may be omitted when R divides n.

#ifndef ATTRISBM_JSON_IO_HPP_
#define ATTRISBM_JSON_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrisbm/model.hpp"

namespace attrisbm {

struct ParsedParams {
  ModelParams params;
  std::optional<SymmetricSpec> symmetric;
};

ParsedParams ParamsFromJson(const nlohmann::json& doc);
ParsedParams ReadParamsFile(const std::filesystem::path& path);
nlohmann::ordered_json ParamsToJson(const ModelParams& params);

// Parses "K=2 R=2 a=10 b=6 c=2 [n=4000]" style tokens.
SymmetricSpec ParseSymmetricTokens(const std::vector<std::string>& tokens);

}  // namespace attrisbm

#endif  // ATTRISBM_JSON_IO_HPP_
