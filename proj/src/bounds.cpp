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

#include "kdn/bounds.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "kdn/rng.hpp"

namespace kdn {

namespace {

void require_counts(const std::vector<int>& counts) {
  if (counts.size() < 2) throw WrongClassCount("need at least two classes");
  for (int c : counts)
    if (c < 1) throw WrongClassCount("class counts must be positive");
}

}  // namespace

ClassProfile ClassProfile::signed_mode(const std::vector<int>& counts) {
  require_counts(counts);
  ClassProfile p;
  p.counts = counts;
  const int tau = p.tau();
  p.gamma_within.resize(tau);
  p.gamma_between = Eigen::MatrixXd::Zero(tau, tau);
  for (int g = 0; g < tau; ++g) {
    p.gamma_within(g) = double(counts[g]) * counts[g];
    for (int h = 0; h < tau; ++h)
      if (h != g) p.gamma_between(g, h) = double(counts[g]) * counts[h];
  }
  return p;
}

ClassProfile ClassProfile::centered_mode(const std::vector<int>& counts) {
  require_counts(counts);
  ClassProfile p;
  p.counts = counts;
  const int tau = p.tau();
  double n = 0.0, eta = 0.0;
  for (int c : counts) {
    n += c;
    eta += double(c) * c;
  }
  p.gamma_within.resize(tau);
  p.gamma_between = Eigen::MatrixXd::Zero(tau, tau);
  for (int g = 0; g < tau; ++g) {
    // Same-class entry of H K_Y H: 1 - 2 n_g / n + eta / n^2.
    double v = 1.0 - 2.0 * counts[g] / n + eta / (n * n);
    p.gamma_within(g) = double(counts[g]) * counts[g] * v;
    for (int h = 0; h < tau; ++h) {
      if (h == g) continue;
      double x = (counts[g] + counts[h]) / n - eta / (n * n);
      p.gamma_between(g, h) = double(counts[g]) * counts[h] * std::abs(x);
    }
  }
  return p;
}

double ub_of_sigma0(double min_sq_dist, double sigma0) {
  if (min_sq_dist <= 0.0 || sigma0 <= 0.0)
    throw ConfigError("ub_of_sigma0: inputs must be positive");
  return std::exp(-min_sq_dist / (2.0 * sigma0 * sigma0));
}

double n_constant_within(const ClassProfile& profile, int g, double zeta) {
  if (g < 0 || g >= profile.tau()) throw IndexError("n_constant_within: bad class");
  double s = 0.0;
  for (int k = 0; k < profile.tau(); ++k) {
    double nk = profile.counts[k];
    s += (k == g) ? (nk - 1.0) * (nk - 1.0) : nk * nk;
  }
  return s / (2.0 * zeta);
}

double n_constant_between(const ClassProfile& profile, int g1, int g2,
                          double ub, double zeta) {
  if (g1 < 0 || g2 < 0 || g1 >= profile.tau() || g2 >= profile.tau() || g1 == g2)
    throw IndexError("n_constant_between: bad class pair");
  double s = 0.0;
  for (int k = 0; k < profile.tau(); ++k) {
    double nk = profile.counts[k];
    if (k == g1) {
      s += (1.0 - nk * ub) * (1.0 - nk * ub);
    } else if (k == g2) {
      s += (1.0 + (nk - 1.0) * ub) * (1.0 + (nk - 1.0) * ub);
    } else {
      s += nk * nk * ub * ub;
    }
  }
  return s / (2.0 * zeta);
}

double lower_bound_at_ub(const ClassProfile& profile, double ub, double sigma1,
                         double zeta) {
  const double s2 = sigma1 * sigma1;
  double l = 0.0;
  for (int g = 0; g < profile.tau(); ++g)
    l += profile.gamma_within(g) *
         std::exp(-n_constant_within(profile, g, zeta) * ub * ub / s2);
  for (int g1 = 0; g1 < profile.tau(); ++g1)
    for (int g2 = 0; g2 < profile.tau(); ++g2)
      if (g1 != g2)
        l -= profile.gamma_between(g1, g2) *
             std::exp(-n_constant_between(profile, g1, g2, ub, zeta) / s2);
  return l;
}

double lower_bound_limit(const ClassProfile& profile, double sigma1, double zeta) {
  return profile.h_star() -
         profile.between_total() *
             std::exp(-1.0 / (zeta * sigma1 * sigma1));
}

BoundEval lower_bound(const ClassProfile& profile, double sigma0, double sigma1,
                      double min_sq_dist, double zeta) {
  BoundEval e;
  e.sigma0 = sigma0;
  e.sigma1 = sigma1;
  e.ub = ub_of_sigma0(min_sq_dist, sigma0);
  e.l = lower_bound_at_ub(profile, e.ub, sigma1, zeta);
  e.l_star = lower_bound_limit(profile, sigma1, zeta);
  e.h_star = profile.h_star();
  return e;
}

double lower_bound_3class(const ClassProfile& profile, double sigma1) {
  if (profile.tau() != 3)
    throw WrongClassCount("lower_bound_3class: exactly three classes required");
  const double s2 = 2.0 * sigma1 * sigma1;
  double l = profile.h_star();
  l -= 2.0 * profile.gamma_between(0, 1) * std::exp(-2.0 / s2);
  l -= 2.0 * profile.gamma_between(0, 2) * std::exp(-1.0 / s2);
  l -= 2.0 * profile.gamma_between(1, 2) * std::exp(-1.0 / s2);
  return l;
}

MonotonicityReport monotonicity_scan(const ClassProfile& profile, double sigma1,
                                     const std::vector<double>& ub_grid,
                                     double zeta) {
  MonotonicityReport report;
  report.values.reserve(ub_grid.size());
  for (double ub : ub_grid)
    report.values.push_back(lower_bound_at_ub(profile, ub, sigma1, zeta));
  for (std::size_t i = 1; i < report.values.size(); ++i) {
    if (report.values[i] > report.values[i - 1] + 1e-12) {
      report.non_increasing = false;
      report.first_violation = static_cast<int>(i);
      break;
    }
  }
  return report;
}

std::vector<double> delta_schedule(double h0, double h_star, int layers) {
  if (h0 >= h_star) throw ConfigError("delta_schedule: need h0 < h_star");
  std::vector<double> deltas;
  deltas.reserve(layers);
  for (int l = 1; l <= layers; ++l)
    deltas.push_back((h_star - h0) / (l + 1));
  return deltas;
}

ScheduleCheck check_risk_sequence(const std::vector<double>& h_seq,
                                  double h_star,
                                  const std::vector<double>& deltas) {
  if (h_seq.size() > deltas.size())
    throw SizeMismatch("check_risk_sequence: more risks than deltas");
  ScheduleCheck check;
  for (std::size_t l = 0; l < h_seq.size(); ++l) {
    if (h_star - h_seq[l] > deltas[l] + 1e-12) {
      check.bound_ok = false;
      if (check.first_violation < 0) check.first_violation = static_cast<int>(l);
    }
    if (l > 0 && h_seq[l] <= h_seq[l - 1]) {
      check.strictly_increasing = false;
      if (check.first_violation < 0) check.first_violation = static_cast<int>(l);
    }
  }
  return check;
}

SurrogateCheck empirical_bound_check(const std::vector<int>& counts, double ub,
                                     double sigma1, std::uint64_t seed) {
  require_counts(counts);
  if (ub <= 0.0 || ub >= 1.0)
    throw ConfigError("empirical_bound_check: ub must be in (0, 1)");
  int n = 0;
  for (int c : counts) n += c;
  if (ub * (n - 1) >= 1.0)
    throw ConfigError("empirical_bound_check: ub too large for a PD Gram");

  // Valid Gram: unit diagonal, off-diagonals uniform in [0, ub]. Diagonal
  // dominance makes it positive definite, so a Cholesky factor exists and
  // its rows realize exactly these inner products.
  Rng rng(seed);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n);
  double ub_actual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = rng.uniform(0.0, ub);
      gram(i, j) = gram(j, i) = v;
      ub_actual = std::max(ub_actual, v);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericError("empirical_bound_check: Gram not positive definite");
  Eigen::MatrixXd r = llt.matrixL();

  Eigen::VectorXi labels(n);
  {
    int row = 0;
    for (std::size_t c = 0; c < counts.size(); ++c)
      for (int i = 0; i < counts[c]; ++i) labels(row++) = static_cast<int>(c);
  }

  // Analysis weights: one class-sum direction per class, all scaled by the
  // same 1/sqrt(zeta). A shared normalizer is what the bound's derivation
  // assumes; zeta is chosen as the largest class-sum norm so no column
  // exceeds unit length.
  const int tau = static_cast<int>(counts.size());
  Eigen::MatrixXd ws(n, tau);
  double zeta = 0.0;
  for (int c = 0; c < tau; ++c) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      if (labels(i) == c) s += r.row(i).transpose();
    ws.col(c) = s;
    zeta = std::max(zeta, s.squaredNorm());
  }
  ws /= std::sqrt(zeta);

  // Brute-force HSIC at W_s with signed Gamma.
  Eigen::MatrixXd p = r * ws;
  double hsic = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double d2 = (p.row(i) - p.row(j)).squaredNorm();
      double k = std::exp(-d2 / (2.0 * sigma1 * sigma1));
      hsic += labels(i) == labels(j) ? k : -k;
    }
  }

  SurrogateCheck check;
  check.hsic_at_ws = hsic;
  check.ub_actual = ub_actual;
  check.zeta = zeta;
  check.bound = lower_bound_at_ub(ClassProfile::signed_mode(counts), ub_actual,
                                  sigma1, zeta);
  check.holds = hsic >= check.bound - 1e-9;
  return check;
}

}  // namespace kdn
