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

#include "attrisbm/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "attrisbm/error.hpp"

namespace attrisbm {

EdgeTypeSystem BuildEdgeTypeSystem(const ModelParams& params) {
  if (!CheckEqualDegree(params)) {
    throw Error(ErrorCode::kPrecondition,
                "aggregated degrees are undefined: communities do not have "
                "equal average degree for every attribute pair");
  }
  const int K = params.K();
  const int R = params.R();
  EdgeTypeSystem sys;
  sys.K = K;
  sys.R = R;
  sys.cab = Eigen::MatrixXd::Zero(R, R);
  sys.sigma.assign(R * R, Eigen::MatrixXd::Zero(K, K));
  for (int a = 0; a < R; ++a) {
    for (int b = 0; b < R; ++b) {
      const double scale =
          static_cast<double>(params.group_sizes()[b]) / (params.n() * K);
      double row0 = 0.0;
      for (int k2 = 0; k2 < K; ++k2) row0 += params.c(0, a, k2, b);
      const double cab = scale * row0;
      sys.cab(a, b) = cab;
      Eigen::MatrixXd& sigma = sys.sigma[sys.type(a, b)];
      for (int k1 = 0; k1 < K; ++k1) {
        for (int k2 = 0; k2 < K; ++k2) {
          const double numerator = scale * params.c(k1, a, k2, b);
          if (cab == 0.0) {
            if (numerator != 0.0) {
              std::ostringstream os;
              os << "edge type (" << a + 1 << "," << b + 1
                 << ") has zero aggregated degree but nonzero affinity";
              throw Error(ErrorCode::kDegenerate, os.str());
            }
            // Type never occurs; any stochastic matrix will do.
            sigma(k1, k2) = 1.0 / K;
          } else {
            sigma(k1, k2) = numerator / cab;
          }
        }
      }
    }
  }
  const int types = R * R;
  sys.C = Eigen::MatrixXd::Zero(types, types);
  for (int child = 0; child < types; ++child) {
    for (int parent = 0; parent < types; ++parent) {
      if (sys.near_end(child) == sys.far_end(parent)) {
        sys.C(child, parent) = sys.cab(sys.near_end(child), sys.far_end(child));
      }
    }
  }
  return sys;
}

std::vector<DecodingMismatch> LiteralDecodingMismatches(int R) {
  std::vector<DecodingMismatch> out;
  for (int a = 1; a <= R; ++a) {
    for (int b = 1; b <= R; ++b) {
      const int i = (a - 1) * R + b;
      const int x = (i - 1) / R + 1;
      const int y = i - (i - 1) / R;
      if (x != a || y != b) out.push_back({i, a, b, x, y});
    }
  }
  return out;
}

double SecondEigenvalue(const Eigen::MatrixXd& stochastic) {
  const Eigen::Index K = stochastic.rows();
  if (K <= 1) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(stochastic, false);
  std::vector<std::complex<double>> values(solver.eigenvalues().begin(),
                                           solver.eigenvalues().end());
  const auto perron = std::min_element(
      values.begin(), values.end(), [](const auto& x, const auto& y) {
        return std::abs(x - 1.0) < std::abs(y - 1.0);
      });
  values.erase(perron);
  const auto second = std::max_element(
      values.begin(), values.end(),
      [](const auto& x, const auto& y) { return std::abs(x) < std::abs(y); });
  const double modulus = std::abs(*second);
  if (std::abs(second->imag()) > 1e-12 * std::max(1.0, modulus)) {
    return modulus;
  }
  return second->real();
}

double SpectralRadiusPower(const Eigen::MatrixXd& nonnegative,
                           const PowerIterationOptions& options) {
  const Eigen::Index size = nonnegative.rows();
  if (size == 0) return 0.0;
  const double max_row_sum = nonnegative.rowwise().sum().maxCoeff();
  if (max_row_sum <= 0.0) return 0.0;
  // The shift makes the matrix aperiodic without moving the Perron root
  // relative to the rest of the spectrum.
  const double shift = 0.5 * max_row_sum;
  Eigen::MatrixXd shifted = nonnegative;
  shifted.diagonal().array() += shift;

  // The shift keeps every iterate strictly positive, so the Collatz-Wielandt
  // ratios min_i y_i / x_i and max_i y_i / x_i bracket the Perron root.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(size, 1.0 / size);
  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd y = shifted * x;
    const Eigen::ArrayXd ratio = y.array() / x.array();
    const double lower = ratio.minCoeff();
    const double upper = ratio.maxCoeff();
    if (upper - lower <= options.tolerance * std::max(1.0, upper)) {
      return std::max(0.0, 0.5 * (lower + upper) - shift);
    }
    x = y / y.sum();
  }
  // Defective or badly separated spectra converge too slowly.
  return SpectralRadiusDense(nonnegative);
}

double SpectralRadiusDense(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd BuildM1(const EdgeTypeSystem& sys) {
  Eigen::MatrixXd m1 = sys.C;
  for (int i = 0; i < m1.rows(); ++i) {
    const double lambda = SecondEigenvalue(sys.sigma[i]);
    m1.row(i) *= lambda * lambda;
  }
  return m1;
}

Eigen::MatrixXd TransferMatrix(const EdgeTypeSystem& sys,
                               const Eigen::MatrixXd& prior, int a, int b) {
  const int K = sys.K;
  const Eigen::MatrixXd& sigma = sys.sigma[sys.type(a, b)];
  Eigen::MatrixXd t(K, K);
  for (int k1 = 0; k1 < K; ++k1) {
    for (int k2 = 0; k2 < K; ++k2) {
      t(k1, k2) = prior(k1, a) * (K * sigma(k1, k2) - 1.0);
    }
  }
  return t;
}

Eigen::MatrixXd TransferRadii(const EdgeTypeSystem& sys,
                              const Eigen::MatrixXd& prior) {
  Eigen::MatrixXd radii(sys.R, sys.R);
  for (int a = 0; a < sys.R; ++a) {
    for (int b = 0; b < sys.R; ++b) {
      radii(a, b) = SpectralRadiusDense(TransferMatrix(sys, prior, a, b));
    }
  }
  return radii;
}

Eigen::MatrixXd BuildM2(const EdgeTypeSystem& sys,
                        const Eigen::MatrixXd& prior) {
  const Eigen::MatrixXd radii = TransferRadii(sys, prior);
  Eigen::MatrixXd m2 = sys.C;
  for (int i = 0; i < m2.rows(); ++i) {
    const double upsilon = radii(sys.near_end(i), sys.far_end(i));
    m2.row(i) *= upsilon * upsilon;
  }
  return m2;
}

XiCriteria ComputeXi(const SymmetricSpec& spec) {
  const double K = spec.K;
  const double R = spec.R;
  const double a = spec.a;
  const double b = spec.b;
  const double c = spec.c;
  if (spec.K <= 0 || spec.R <= 0) {
    throw Error(ErrorCode::kInvalidInput, "K and R must be positive");
  }
  const bool ordered =
      spec.R == 1 ? a >= c : (a >= b && b >= c);
  if (!(c >= 0.0) || !ordered) {
    throw Error(ErrorCode::kConstraintViolation, "requires a >= b >= c >= 0");
  }
  const double same_attr_denom = a + (K - 1) * c;
  const double cross_attr_denom = b + (K - 1) * c;
  const double pooled_denom = a + (R - 1) * b + (K - 1) * R * c;
  if (same_attr_denom <= 0.0 || (spec.R > 1 && cross_attr_denom <= 0.0) ||
      pooled_denom <= 0.0) {
    throw Error(ErrorCode::kDegenerate,
                "xi criteria undefined: zero denominator");
  }
  XiCriteria out;
  out.xi1 = (a - c) * (a - c) / same_attr_denom;
  if (spec.R > 1) out.xi1 += (R - 1) * (b - c) * (b - c) / cross_attr_denom;
  const double pooled = a + (R - 1) * b - R * c;
  out.xi2 = pooled * pooled / pooled_denom;
  out.detectable_with_attrs = out.xi1 > K * R;
  out.detectable_without = out.xi2 > K * R;
  return out;
}

ThresholdReport ComputeThresholdReport(const ModelParams& params) {
  const EdgeTypeSystem sys = BuildEdgeTypeSystem(params);
  ThresholdReport report;
  report.lambda.resize(sys.R, sys.R);
  for (int a = 0; a < sys.R; ++a) {
    for (int b = 0; b < sys.R; ++b) {
      report.lambda(a, b) = SecondEigenvalue(sys.sigma[sys.type(a, b)]);
    }
  }
  report.upsilon = TransferRadii(sys, params.prior());
  report.rho_m1 = SpectralRadiusPower(BuildM1(sys));
  report.rho_m2 = SpectralRadiusPower(BuildM2(sys, params.prior()));
  report.detectable = report.rho_m1 > 1.0;
  return report;
}

ThresholdReport ComputeThresholdReport(const SymmetricSpec& spec) {
  SymmetricSpec sized = spec;
  if (sized.n <= 0) {
    // The thresholds do not depend on n; pick any n that keeps c / n <= 1.
    const int base = static_cast<int>(std::ceil(std::max(1.0, spec.a)));
    sized.n = spec.R * base;
  }
  ThresholdReport report = ComputeThresholdReport(ExpandSymmetric(sized));
  const XiCriteria xi = ComputeXi(sized);
  report.xi1 = xi.xi1;
  report.xi2 = xi.xi2;
  return report;
}

std::string ThresholdReportJson(const ThresholdReport& report) {
  auto matrix = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::ordered_json j;
  j["rho_m1"] = report.rho_m1;
  j["rho_m2"] = report.rho_m2;
  j["xi1"] = report.xi1 ? nlohmann::ordered_json(*report.xi1)
                        : nlohmann::ordered_json(nullptr);
  j["xi2"] = report.xi2 ? nlohmann::ordered_json(*report.xi2)
                        : nlohmann::ordered_json(nullptr);
  j["detectable"] = report.detectable;
  j["lambda"] = matrix(report.lambda);
  j["upsilon"] = matrix(report.upsilon);
  return j.dump();
}

CriticalEpsilon FindCriticalEpsilon(double eta, int K, int R,
                                    double avg_degree) {
  if (!(eta >= 1.0) || !(avg_degree > 0.0)) {
    throw Error(ErrorCode::kConstraintViolation,
                "critical epsilon needs eta >= 1 and avg_degree > 0");
  }
  const double target = static_cast<double>(K) * R;
  auto excess = [&](double epsilon) {
    const AbcTriple abc = ResolveAbc(eta, epsilon, avg_degree, K, R);
    return ComputeXi({K, R, abc.a, abc.b, abc.c, 0}).xi1 - target;
  };
  constexpr int kScan = 1000;
  double right = 1.0;
  double f_right = excess(right);
  bool any_positive = f_right > 0.0;
  bool any_nonpositive = !any_positive;
  // Scan from the right so the first bracket found is the largest root.
  for (int s = kScan - 1; s >= 0; --s) {
    const double left = static_cast<double>(s) / kScan;
    const double f_left = excess(left);
    if ((f_left > 0.0) != (f_right > 0.0)) {
      double lo = left;
      double hi = right;
      const bool lo_positive = f_left > 0.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if ((excess(mid) > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return {ThresholdKind::kBoundary, 0.5 * (lo + hi)};
    }
    any_positive |= f_left > 0.0;
    any_nonpositive |= f_left <= 0.0;
    right = left;
    f_right = f_left;
  }
  if (any_positive && !any_nonpositive) {
    return {ThresholdKind::kAlwaysDetectable, 0.0};
  }
  return {ThresholdKind::kNeverDetectable, 0.0};
}

}  // namespace attrisbm
