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

// attrisbm {generate|infer|threshold|sweep|oracle} [flags]
//
// Exit codes: 0 ok, 1 usage, 2 invalid input or constraint, 3 I/O,
// 4 numerical / budget / degenerate.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "attrisbm/bp.hpp"
#include "attrisbm/error.hpp"
#include "attrisbm/exact.hpp"
#include "attrisbm/generator.hpp"
#include "attrisbm/graph.hpp"
#include "attrisbm/json_io.hpp"
#include "attrisbm/overlap.hpp"
#include "attrisbm/spectral.hpp"
#include "attrisbm/sweep.hpp"

namespace {

using attrisbm::Error;
using attrisbm::ErrorCode;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
    case ErrorCode::kConstraintViolation:
    case ErrorCode::kPrecondition:
      return 2;
    case ErrorCode::kIo:
      return 3;
    case ErrorCode::kDegenerate:
    case ErrorCode::kBudget:
    case ErrorCode::kNumerical:
      return 4;
  }
  return 2;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void Emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out = OpenOut(path);
  fn(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
  int jobs = 1;
};

void AddCommon(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config, "JSON config / params file");
  cmd->add_option("--seed", common.seed, "master seed (u64)");
  cmd->add_option("--out", common.out, "output path");
  cmd->add_option("--jobs", common.jobs, "worker threads (<= 0: all cores)");
}

attrisbm::ParsedParams LoadParams(const std::string& config,
                                  const std::vector<std::string>& sym) {
  if (!sym.empty()) {
    attrisbm::SymmetricSpec spec = attrisbm::ParseSymmetricTokens(sym);
    if (spec.n <= 0) {
      throw Error(ErrorCode::kInvalidInput, "--sym needs n=<nodes> here");
    }
    return {attrisbm::ExpandSymmetric(spec), spec};
  }
  if (config.empty()) {
    throw Error(ErrorCode::kInvalidInput, "need --config or --sym");
  }
  return attrisbm::ReadParamsFile(config);
}

int CmdThreshold(const std::string& config,
                 const std::vector<std::string>& sym, const std::string& out) {
  attrisbm::ThresholdReport report;
  if (!sym.empty()) {
    report = attrisbm::ComputeThresholdReport(attrisbm::ParseSymmetricTokens(sym));
  } else {
    const attrisbm::ParsedParams parsed = LoadParams(config, sym);
    report = parsed.symmetric
                 ? attrisbm::ComputeThresholdReport(*parsed.symmetric)
                 : attrisbm::ComputeThresholdReport(parsed.params);
  }
  const std::string json = attrisbm::ThresholdReportJson(report);
  Emit(out, [&](std::ostream& os) { os << json << '\n'; });
  return 0;
}

int CmdGenerate(const Common& common, const std::vector<std::string>& sym) {
  if (common.out.empty()) {
    throw Error(ErrorCode::kInvalidInput, "generate needs --out <prefix>");
  }
  const attrisbm::ParsedParams parsed = LoadParams(common.config, sym);
  const attrisbm::AttributedGraph graph =
      attrisbm::GenerateGraph(parsed.params, attrisbm::RngSeed{common.seed});
  Emit(common.out + ".edges",
       [&](std::ostream& os) { attrisbm::WriteEdges(os, graph); });
  Emit(common.out + ".attrs",
       [&](std::ostream& os) { attrisbm::WriteLabels(os, graph.attrs()); });
  Emit(common.out + ".truth",
       [&](std::ostream& os) { attrisbm::WriteLabels(os, *graph.truth()); });
  std::cerr << "wrote " << graph.num_nodes() << " nodes, " << graph.num_edges()
            << " edges to " << common.out << ".{edges,attrs,truth}\n";
  return 0;
}

struct InferFlags {
  std::string edges;
  std::string attrs;
  std::string truth;
  std::string init = "uniform-perturbed";
  int max_sweeps = 500;
  double tol = 1e-6;
  double damping = 0.0;
  double perturbation = 0.1;
};

int CmdInfer(const Common& common, const InferFlags& flags) {
  const attrisbm::ParsedParams parsed = LoadParams(common.config, {});
  const std::size_t attr_lines = attrisbm::ReadLabels(flags.attrs).size();
  if (static_cast<int>(attr_lines) != parsed.params.n()) {
    throw Error(ErrorCode::kInvalidInput,
                flags.attrs + ": " + std::to_string(attr_lines) +
                    " lines, params expect n = " +
                    std::to_string(parsed.params.n()));
  }
  attrisbm::AttributedGraph graph = attrisbm::ReadGraph(flags.edges, flags.attrs);
  if (!flags.truth.empty()) {
    std::vector<int> truth = attrisbm::ReadLabels(flags.truth);
    if (static_cast<int>(truth.size()) != graph.num_nodes()) {
      throw Error(ErrorCode::kInvalidInput,
                  flags.truth + ": " + std::to_string(truth.size()) +
                      " lines, expected " + std::to_string(graph.num_nodes()));
    }
    graph = graph.WithTruth(std::move(truth));
  }
  attrisbm::BPConfig config;
  config.max_sweeps = flags.max_sweeps;
  config.tol = flags.tol;
  config.damping = flags.damping;
  config.perturbation = flags.perturbation;
  config.init = attrisbm::ParseBPInit(flags.init);
  config.seed = attrisbm::RngSeed{common.seed};
  const attrisbm::BPResult result =
      attrisbm::RunBP(graph, parsed.params, config);
  Emit(common.out, [&](std::ostream& os) {
    attrisbm::WriteMarginalsCsv(os, graph, result.state.marginals);
  });
  nlohmann::ordered_json summary;
  summary["iterations"] = result.state.iterations;
  summary["converged"] = result.converged;
  summary["last_delta"] = result.state.last_delta;
  if (graph.truth()) {
    const auto labels = attrisbm::HardAssign(result.state.marginals);
    summary["overlap"] = attrisbm::ComputeOverlap(labels, *graph.truth(),
                                                  parsed.params.prior(),
                                                  graph.attrs())
                             .overlap;
  }
  std::cerr << summary.dump() << '\n';
  return 0;
}

int CmdOracle(const Common& common, const InferFlags& flags,
              bool exclude_non_edges) {
  const attrisbm::ParsedParams parsed = LoadParams(common.config, {});
  const attrisbm::AttributedGraph graph =
      attrisbm::ReadGraph(flags.edges, flags.attrs);
  const Eigen::MatrixXd marginals = attrisbm::ExactMarginals(
      graph, parsed.params,
      exclude_non_edges ? attrisbm::NonEdgeFactors::kExclude
                        : attrisbm::NonEdgeFactors::kInclude);
  Emit(common.out, [&](std::ostream& os) {
    attrisbm::WriteMarginalsCsv(os, graph, marginals);
  });
  return 0;
}

int CmdSweep(const Common& common) {
  attrisbm::SweepConfig config;
  if (!common.config.empty()) {
    std::ifstream in(common.config);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + common.config);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidInput,
                  common.config + ": invalid JSON: " + e.what());
    }
    config = attrisbm::SweepConfigFromJson(doc);
    if (!doc.contains("master_seed")) config.master_seed = common.seed;
  } else {
    config.master_seed = common.seed;
  }
  if (!common.out.empty()) config.output_path = common.out;
  // Fail on an unwritable path before spending time on the cells.
  std::optional<std::ofstream> file;
  if (!config.output_path.empty() && config.output_path != "-") {
    file.emplace(OpenOut(config.output_path));
  }
  const auto rows = attrisbm::RunSweep(config, common.jobs);
  std::ostream& os = file ? *file : std::cout;
  attrisbm::WriteSweepCsv(os, config, rows);
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + config.output_path);
  std::size_t failed = 0;
  for (const auto& row : rows) failed += row.status != "ok";
  std::cerr << rows.size() << " rows, " << failed << " with errors\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attributed stochastic block model toolkit"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> sym;
  InferFlags flags;
  bool exclude_non_edges = false;

  CLI::App* generate = app.add_subcommand("generate", "sample a graph");
  AddCommon(generate, common);
  generate->add_option("--sym", sym, "symmetric spec tokens K= R= a= b= c= n=");

  CLI::App* threshold =
      app.add_subcommand("threshold", "print the threshold report as JSON");
  AddCommon(threshold, common);
  threshold->add_option("--sym", sym, "symmetric spec tokens K= R= a= b= c=");

  CLI::App* infer = app.add_subcommand("infer", "run belief propagation");
  AddCommon(infer, common);
  infer->add_option("--edges", flags.edges, "edge list file")->required();
  infer->add_option("--attrs", flags.attrs, "attribute file")->required();
  infer->add_option("--params", common.config, "params JSON (alias of --config)");
  infer->add_option("--truth", flags.truth, "ground-truth labels");
  infer->add_option("--init", flags.init,
                    "uniform-perturbed | random | truth-planted");
  infer->add_option("--max-sweeps", flags.max_sweeps, "sweep cap (default 500)");
  infer->add_option("--tol", flags.tol, "stop when the max message change is below this");
  infer->add_option("--damping", flags.damping, "weight on the previous message, in [0, 1)");
  infer->add_option("--perturbation", flags.perturbation, "noise added to the prior at init");

  CLI::App* oracle =
      app.add_subcommand("oracle", "exact marginals by enumeration");
  AddCommon(oracle, common);
  oracle->add_option("--edges", flags.edges, "edge list file")->required();
  oracle->add_option("--attrs", flags.attrs, "attribute file")->required();
  oracle->add_option("--params", common.config, "params JSON (alias of --config)");
  oracle->add_flag("--exclude-non-edges", exclude_non_edges,
                   "drop the (1 - c/n) factors of absent pairs");

  CLI::App* sweep = app.add_subcommand("sweep", "overlap vs epsilon sweep");
  AddCommon(sweep, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*threshold) return CmdThreshold(common.config, sym, common.out);
    if (*generate) return CmdGenerate(common, sym);
    if (*infer) return CmdInfer(common, flags);
    if (*oracle) return CmdOracle(common, flags, exclude_non_edges);
    if (*sweep) return CmdSweep(common);
  } catch (const Error& e) {
    std::cerr << "error [" << attrisbm::ErrorCodeName(e.code())
              << "]: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
