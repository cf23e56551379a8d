// Copyright (c) 2026, the kdnet authors.
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

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "kdn/kernels.hpp"

namespace kdn {

/// Class sizes plus the Gamma mass aggregates the bound formulas consume:
/// per-class sums of Gamma over same-class pairs (ordered, including i = j)
/// and per-class-pair sums of |Gamma| over cross pairs (one direction).
struct ClassProfile {
  std::vector<int> counts;        // n_1 .. n_tau
  Eigen::VectorXd gamma_within;   // per class g: sum over S^g of Gamma
  Eigen::MatrixXd gamma_between;  // (g1, g2), g1 != g2: sum of |Gamma|

  int tau() const { return static_cast<int>(counts.size()); }
  double h_star() const { return gamma_within.sum(); }
  double between_total() const { return gamma_between.sum(); }

  /// Gamma entries +1 same-class, -1 cross-class.
  static ClassProfile signed_mode(const std::vector<int>& counts);
  /// Gamma = H K_Y H built from the counts.
  static ClassProfile centered_mode(const std::vector<int>& counts);
};

/// Largest pairwise RKHS inner product among distinct samples:
/// exp(-min_sq_dist / (2 sigma0^2)).
double ub_of_sigma0(double min_sq_dist, double sigma0);

/// N_g = (1/2 zeta) [n_1^2 + ... + (n_g - 1)^2 + ... + n_tau^2].
double n_constant_within(const ClassProfile& profile, int g, double zeta);

/// N_{g1,g2}(ub) = (1/2 zeta) [sum_{k not in {g1,g2}} n_k^2 ub^2
///                              + (1 - n_{g1} ub)^2 + (1 + (n_{g2}-1) ub)^2].
double n_constant_between(const ClassProfile& profile, int g1, int g2,
                          double ub, double zeta);

/// L as a function of ub directly:
/// sum_g (sum_{S^g} Gamma) exp(-N_g ub^2 / sigma1^2)
/// - sum_{g1 != g2} (sum |Gamma|) exp(-N_{g1,g2}(ub) / sigma1^2).
double lower_bound_at_ub(const ClassProfile& profile, double ub, double sigma1,
                         double zeta);

/// L*(sigma1) = sum_S Gamma - sum_{S^c} |Gamma| exp(-1 / (zeta sigma1^2)).
double lower_bound_limit(const ClassProfile& profile, double sigma1,
                         double zeta);

struct BoundEval {
  double sigma0 = 0.0, sigma1 = 0.0;
  double ub = 0.0;
  double l = 0.0;
  double l_star = 0.0;
  double h_star = 0.0;
};

BoundEval lower_bound(const ClassProfile& profile, double sigma0, double sigma1,
                      double min_sq_dist, double zeta);

/// Three-class limit with W built from the first two class-mean directions:
/// L3* = sum_S Gamma - 2 sum_{(1,2)} |Gamma| e^{-2/(2 sigma1^2)}
///                   - 2 sum_{(1,3)} |Gamma| e^{-1/(2 sigma1^2)}
///                   - 2 sum_{(2,3)} |Gamma| e^{-1/(2 sigma1^2)}.
double lower_bound_3class(const ClassProfile& profile, double sigma1);

struct MonotonicityReport {
  bool non_increasing = true;
  int first_violation = -1;  // grid index of the first increase, or -1
  std::vector<double> values;
};

/// Evaluates L along an ascending ub grid and checks it never increases
/// (slack 1e-12).
MonotonicityReport monotonicity_scan(const ClassProfile& profile, double sigma1,
                                     const std::vector<double>& ub_grid,
                                     double zeta);

/// delta_l = (h_star - h0) / (l + 1) for l = 1..layers: strictly decreasing,
/// positive, -> 0.
std::vector<double> delta_schedule(double h0, double h_star, int layers);

struct ScheduleCheck {
  bool bound_ok = true;           // h_star - h_l <= delta_l for all l
  bool strictly_increasing = true;
  int first_violation = -1;
};

ScheduleCheck check_risk_sequence(const std::vector<double>& h_seq,
                                  double h_star,
                                  const std::vector<double>& deltas);

struct SurrogateCheck {
  double hsic_at_ws = 0.0;
  double bound = 0.0;
  double ub_actual = 0.0;
  double zeta = 0.0;
  bool holds = false;  // hsic_at_ws >= bound - 1e-9
};

/// Constructs explicit RKHS surrogate points via Cholesky of a valid Gram
/// (unit diagonal, off-diagonal uniform in [0, ub]), forms the class-sum
/// analysis weights W_s scaled by one shared 1/sqrt(zeta) with
/// zeta = max_g ||sum_{i in S^g} r_i||^2, and compares the brute-force HSIC
/// at W_s against the formula bound at the realized ub.
SurrogateCheck empirical_bound_check(const std::vector<int>& counts, double ub,
                                     double sigma1, std::uint64_t seed);

}  // namespace kdn
