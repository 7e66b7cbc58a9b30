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

// Overlap-versus-epsilon sweep over the symmetric model at fixed average
// degree. A cell is one (eta, epsilon, replicate) triple; every cell gets
// its own seed
//
//   seed = HashSeed(master_seed, {eta_index, epsilon_index, replicate})
//
// so any single row can be regenerated in isolation.

#ifndef ATTRISBM_SWEEP_HPP_
#define ATTRISBM_SWEEP_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrisbm/bp.hpp"

namespace attrisbm {

struct SweepConfig {
  int n = 4000;
  int K = 2;
  int R = 2;
  double avg_degree = 5.0;
  std::vector<double> eta_values{1.0, 1.5, 2.0};
  std::vector<double> epsilon_grid;  // defaults to 0, 0.05, ..., 1
  int seeds_per_cell = 10;
  std::uint64_t master_seed = 1;
  BPConfig bp;
  std::string output_path;

  SweepConfig();
  void Validate() const;
};

// Values start, start + step, ..., up to stop (inclusive within 1e-9 step).
std::vector<double> MakeGrid(double start, double stop, double step);

// Accepts every SweepConfig field; "epsilon_grid" is either a list or
// {"start": .., "stop": .., "step": ..}; "bp" holds max_sweeps, tol,
// damping, init, perturbation. Missing fields keep their defaults.
SweepConfig SweepConfigFromJson(const nlohmann::json& doc);
nlohmann::ordered_json SweepConfigToJson(const SweepConfig& config);

struct SweepRow {
  double eta = 0.0;
  double epsilon = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::uint64_t seed = 0;
  int n = 0;
  int K = 0;
  int R = 0;
  double avg_degree = 0.0;
  std::size_t edges = 0;
  int iterations = 0;
  bool converged = false;
  double overlap = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double rho_m1 = 0.0;
  bool detectable = false;
  std::string status = "ok";
};

std::uint64_t CellSeed(std::uint64_t master_seed, std::size_t eta_index,
                       std::size_t epsilon_index, int replicate);

// One cell. Errors are caught and recorded in `status`.
SweepRow RunCell(const SweepConfig& config, std::size_t eta_index,
                 std::size_t epsilon_index, int replicate);

// Rows ordered by (eta, epsilon, replicate) regardless of `jobs`.
std::vector<SweepRow> RunSweep(const SweepConfig& config, int jobs);

// '#'-prefixed config lines, then the header row, then one line per row.
void WriteSweepCsv(std::ostream& out, const SweepConfig& config,
                   const std::vector<SweepRow>& rows);

inline constexpr const char* kSweepCsvHeader =
    "eta,epsilon,a,b,c,seed,n,K,R,avg_degree,edges,iterations,converged,"
    "overlap,xi1,xi2,rho_m1,detectable,status";

}  // namespace attrisbm

#endif  // ATTRISBM_SWEEP_HPP_
