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

// Detectability thresholds from the multi-type branching process of edges.
//
// An edge is typed by the attribute categories of its near end (toward the
// root) and far end: type e = a * R + b for categories (a, b), 0-based.
// A type-(a, b) edge spawns type-(b, b') children, Poisson with mean
// c_{b b'}. Crossing a type-(a, b) edge moves the community label through
// the K x K stochastic matrix sigma_ab.
//
//   M1[i][j] = C[i][j] * lambda(i)^2   lambda = second eigenvalue of sigma
//   M2[i][j] = C[i][j] * upsilon(i)^2  upsilon = spectral radius of T
//
// with C[i][j] the expected number of type-i children of a type-j edge.
// rho(M1) > 1 is the reconstruction threshold; rho(M2) > 1 is where the
// trivial BP fixed point becomes unstable.

#ifndef ATTRISBM_SPECTRAL_HPP_
#define ATTRISBM_SPECTRAL_HPP_

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "attrisbm/model.hpp"
#include "attrisbm/rng.hpp"

namespace attrisbm {

struct EdgeTypeSystem {
  int K = 0;
  int R = 0;
  Eigen::MatrixXd cab;  // R x R aggregated degrees
  Eigen::MatrixXd C;    // R^2 x R^2 expected children, C(child, parent)
  std::vector<Eigen::MatrixXd> sigma;  // indexed by type, each K x K

  int type(int a, int b) const { return a * R + b; }
  int near_end(int e) const { return e / R; }
  int far_end(int e) const { return e % R; }
};

// Requires CheckEqualDegree(params). Throws kPrecondition otherwise, and
// kDegenerate if some c_ab is zero while an entry of its row is not.
EdgeTypeSystem BuildEdgeTypeSystem(const ModelParams& params);

// A type whose near/far decoding under the literal floor-division formulas
//   x = floor((i-1)/R) + 1,  y = i - floor((i-1)/R)   (1-based)
// disagrees with the (near, far) pair the type was built from.
struct DecodingMismatch {
  int type;           // 1-based
  int near_end;       // 1-based, from the construction
  int far_end;        // 1-based, from the construction
  int literal_x;
  int literal_y;
};

// Compares the literal index formulas with the construction for every type
// of an R-category system. Empty iff they agree (which happens for R = 1).
std::vector<DecodingMismatch> LiteralDecodingMismatches(int R);

// Eigenvalue of second-largest modulus of a stochastic matrix, after
// removing the Perron eigenvalue (the one closest to 1). Real part with
// sign for a real eigenvalue, modulus for a complex pair. 0 for K = 1.
double SecondEigenvalue(const Eigen::MatrixXd& stochastic);

struct PowerIterationOptions {
  int max_iterations = 1000;
  double tolerance = 1e-12;
};

// Spectral radius of a nonnegative square matrix by power iteration on
// M + s I from the all-ones vector (s > 0 breaks periodicity).
double SpectralRadiusPower(const Eigen::MatrixXd& nonnegative,
                           const PowerIterationOptions& options = {});

// Largest eigenvalue modulus from a dense eigensolver.
double SpectralRadiusDense(const Eigen::MatrixXd& matrix);

Eigen::MatrixXd BuildM1(const EdgeTypeSystem& sys);

// T_ab(k1, k2) = q(k1, a) * (K * sigma_ab(k1, k2) - 1).
Eigen::MatrixXd TransferMatrix(const EdgeTypeSystem& sys,
                               const Eigen::MatrixXd& prior, int a, int b);
// R x R matrix of spectral radii of T_ab.
Eigen::MatrixXd TransferRadii(const EdgeTypeSystem& sys,
                              const Eigen::MatrixXd& prior);
Eigen::MatrixXd BuildM2(const EdgeTypeSystem& sys,
                        const Eigen::MatrixXd& prior);

struct XiCriteria {
  double xi1 = 0.0;
  double xi2 = 0.0;
  bool detectable_with_attrs = false;
  bool detectable_without = false;
};

// Closed-form criteria of the symmetric model; both are compared with K R.
XiCriteria ComputeXi(const SymmetricSpec& spec);

struct ThresholdReport {
  double rho_m1 = 0.0;
  double rho_m2 = 0.0;
  std::optional<double> xi1;
  std::optional<double> xi2;
  bool detectable = false;  // rho_m1 > 1
  Eigen::MatrixXd lambda;   // R x R
  Eigen::MatrixXd upsilon;  // R x R
};

ThresholdReport ComputeThresholdReport(const ModelParams& params);
ThresholdReport ComputeThresholdReport(const SymmetricSpec& spec);

// Flat JSON object: rho_m1, rho_m2, xi1, xi2 (null when absent),
// detectable, lambda, upsilon (row-major nested arrays).
std::string ThresholdReportJson(const ThresholdReport& report);

enum class ThresholdKind {
  kBoundary,        // a crossing exists in [0, 1]
  kAlwaysDetectable,  // xi1 > K R on all of [0, 1]
  kNeverDetectable,   // xi1 <= K R on all of [0, 1]
};

struct CriticalEpsilon {
  ThresholdKind kind = ThresholdKind::kNeverDetectable;
  double epsilon = 0.0;  // meaningful for kBoundary only
};

// Largest epsilon = c / b in [0, 1] at which xi1 crosses K R, holding
// a = eta b and the average degree fixed. Bisection to 1e-10 after a
// bracketing scan, so it works for any K and R.
CriticalEpsilon FindCriticalEpsilon(double eta, int K, int R,
                                    double avg_degree);

struct GrowthOptions {
  int root_attribute = 0;
  // Cap on the expected number of tree nodes up to the requested depth.
  double node_budget = 1e6;
  int jobs = 1;
};

struct GrowthEstimate {
  double rate = 0.0;                // fitted per-level growth factor
  std::vector<double> level_means;  // mean Z_d for d = 0..depth
};

// Monte Carlo estimate of the growth of Z_d, the sum over root-to-level-d
// paths of prod upsilon_ab^(2 d_ab), in Poisson(c_ab) multi-type trees.
// Nodes are aggregated by (attribute, edge-type counts along the path);
// a Poisson split of identical classes keeps the law of every tree
// unchanged. The rate is exp(slope) of a least-squares fit of log mean Z_d
// on d over d = 1..depth.
GrowthEstimate SimulatePerturbationGrowth(const EdgeTypeSystem& sys,
                                          const Eigen::MatrixXd& prior,
                                          int depth, int trials, RngSeed seed,
                                          const GrowthOptions& options = {});

}  // namespace attrisbm

#endif  // ATTRISBM_SPECTRAL_HPP_
