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

#include "attrisbm/sweep.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "attrisbm/error.hpp"
#include "attrisbm/generator.hpp"
#include "attrisbm/overlap.hpp"
#include "attrisbm/parallel.hpp"
#include "attrisbm/spectral.hpp"

namespace attrisbm {

SweepConfig::SweepConfig() : epsilon_grid(MakeGrid(0.0, 1.0, 0.05)) {}

void SweepConfig::Validate() const {
  if (n <= 0 || K <= 0 || R <= 0 || n % R != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "sweep needs positive n, K, R with R dividing n");
  }
  if (!(avg_degree > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "avg_degree must be positive");
  }
  if (eta_values.empty() || epsilon_grid.empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty eta or epsilon grid");
  }
  for (double eta : eta_values) {
    if (!(eta >= 1.0)) {
      throw Error(ErrorCode::kConstraintViolation, "eta values must be >= 1");
    }
  }
  for (double eps : epsilon_grid) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw Error(ErrorCode::kConstraintViolation,
                  "epsilon values must lie in [0, 1]");
    }
  }
  if (seeds_per_cell < 1) {
    throw Error(ErrorCode::kInvalidInput, "seeds_per_cell must be >= 1");
  }
  bp.Validate();
}

std::vector<double> MakeGrid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) {
    throw Error(ErrorCode::kInvalidInput, "grid needs step > 0, stop >= start");
  }
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double x = start + i * step;
    if (x > stop + 1e-9 * step) break;
    if (std::abs(x - stop) <= 1e-9 * step) x = stop;
    grid.push_back(x);
  }
  return grid;
}

SweepConfig SweepConfigFromJson(const nlohmann::json& doc) {
  SweepConfig config;
  try {
    config.n = doc.value("n", config.n);
    config.K = doc.value("K", config.K);
    config.R = doc.value("R", config.R);
    config.avg_degree = doc.value("avg_degree", config.avg_degree);
    if (doc.contains("eta_values")) {
      config.eta_values = doc.at("eta_values").get<std::vector<double>>();
    }
    if (doc.contains("epsilon_grid")) {
      const auto& grid = doc.at("epsilon_grid");
      if (grid.is_array()) {
        config.epsilon_grid = grid.get<std::vector<double>>();
      } else {
        config.epsilon_grid =
            MakeGrid(grid.at("start").get<double>(),
                     grid.at("stop").get<double>(), grid.at("step").get<double>());
      }
    }
    config.seeds_per_cell = doc.value("seeds_per_cell", config.seeds_per_cell);
    config.master_seed = doc.value("master_seed", config.master_seed);
    config.output_path = doc.value("output_path", config.output_path);
    if (doc.contains("bp")) {
      const auto& bp = doc.at("bp");
      config.bp.max_sweeps = bp.value("max_sweeps", config.bp.max_sweeps);
      config.bp.tol = bp.value("tol", config.bp.tol);
      config.bp.damping = bp.value("damping", config.bp.damping);
      config.bp.perturbation = bp.value("perturbation", config.bp.perturbation);
      if (bp.contains("init")) {
        config.bp.init = ParseBPInit(bp.at("init").get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed sweep config: ") + e.what());
  }
  config.Validate();
  return config;
}

nlohmann::ordered_json SweepConfigToJson(const SweepConfig& config) {
  nlohmann::ordered_json j;
  j["n"] = config.n;
  j["K"] = config.K;
  j["R"] = config.R;
  j["avg_degree"] = config.avg_degree;
  j["eta_values"] = config.eta_values;
  j["epsilon_grid"] = config.epsilon_grid;
  j["seeds_per_cell"] = config.seeds_per_cell;
  j["master_seed"] = config.master_seed;
  j["output_path"] = config.output_path;
  nlohmann::ordered_json bp;
  bp["max_sweeps"] = config.bp.max_sweeps;
  bp["tol"] = config.bp.tol;
  bp["damping"] = config.bp.damping;
  bp["init"] = BPInitName(config.bp.init);
  bp["perturbation"] = config.bp.perturbation;
  j["bp"] = bp;
  return j;
}

std::uint64_t CellSeed(std::uint64_t master_seed, std::size_t eta_index,
                       std::size_t epsilon_index, int replicate) {
  return HashSeed(master_seed, {eta_index, epsilon_index,
                                static_cast<std::uint64_t>(replicate)});
}

SweepRow RunCell(const SweepConfig& config, std::size_t eta_index,
                 std::size_t epsilon_index, int replicate) {
  SweepRow row;
  row.eta = config.eta_values.at(eta_index);
  row.epsilon = config.epsilon_grid.at(epsilon_index);
  row.seed = CellSeed(config.master_seed, eta_index, epsilon_index, replicate);
  row.n = config.n;
  row.K = config.K;
  row.R = config.R;
  row.avg_degree = config.avg_degree;
  try {
    const AbcTriple abc =
        ResolveAbc(row.eta, row.epsilon, config.avg_degree, config.K, config.R);
    row.a = abc.a;
    row.b = abc.b;
    row.c = abc.c;
    const SymmetricSpec spec{config.K, config.R, abc.a, abc.b, abc.c, config.n};
    const ModelParams params = ExpandSymmetric(spec);
    const ThresholdReport report = ComputeThresholdReport(spec);
    row.xi1 = *report.xi1;
    row.xi2 = *report.xi2;
    row.rho_m1 = report.rho_m1;
    row.detectable = report.detectable;

    const AttributedGraph graph = GenerateGraph(params, RngSeed{row.seed});
    row.edges = graph.num_edges();
    BPConfig bp = config.bp;
    bp.seed = RngSeed{row.seed};
    const BPResult result = RunBP(graph, params, bp);
    row.iterations = result.state.iterations;
    row.converged = result.converged;
    const std::vector<int> labels = HardAssign(result.state.marginals);
    row.overlap =
        ComputeOverlap(labels, *graph.truth(), params.prior(), graph.attrs())
            .overlap;
  } catch (const std::exception& e) {
    row.status = e.what();
  }
  return row;
}

std::vector<SweepRow> RunSweep(const SweepConfig& config, int jobs) {
  config.Validate();
  const std::size_t n_eps = config.epsilon_grid.size();
  const std::size_t reps = config.seeds_per_cell;
  std::vector<SweepRow> rows(config.eta_values.size() * n_eps * reps);
  ParallelFor(rows.size(), jobs, [&](std::size_t index) {
    const std::size_t rep = index % reps;
    const std::size_t ei = (index / reps) % n_eps;
    const std::size_t hi = index / (reps * n_eps);
    rows[index] = RunCell(config, hi, ei, static_cast<int>(rep));
  });
  return rows;
}

namespace {

// Keeps the CSV one record per line and free of delimiters.
std::string SanitizeStatus(const std::string& status) {
  std::string out = status;
  for (char& ch : out) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return out;
}

}  // namespace

void WriteSweepCsv(std::ostream& out, const SweepConfig& config,
                   const std::vector<SweepRow>& rows) {
  out << "# attrisbm sweep\n";
  const nlohmann::ordered_json header = SweepConfigToJson(config);
  for (const auto& [key, value] : header.items()) {
    out << "# " << key << " = " << value.dump() << '\n';
  }
  out << kSweepCsvHeader << '\n';
  std::ostringstream line;
  line.precision(15);
  for (const SweepRow& r : rows) {
    line.str("");
    line << r.eta << ',' << r.epsilon << ',' << r.a << ',' << r.b << ','
         << r.c << ',' << r.seed << ',' << r.n << ',' << r.K << ',' << r.R
         << ',' << r.avg_degree << ',' << r.edges << ',' << r.iterations << ','
         << (r.converged ? 1 : 0) << ',' << r.overlap << ',' << r.xi1 << ','
         << r.xi2 << ',' << r.rho_m1 << ',' << (r.detectable ? 1 : 0) << ','
         << SanitizeStatus(r.status) << '\n';
    out << line.str();
  }
}

}  // namespace attrisbm
