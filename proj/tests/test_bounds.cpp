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

#include <doctest.h>

#include <cmath>

#include "kdn/bounds.hpp"
#include "kdn/kernels.hpp"

using namespace kdn;

namespace {

Eigen::VectorXi labels_from_counts(const std::vector<int>& counts) {
  int n = 0;
  for (int c : counts) n += c;
  Eigen::VectorXi y(n);
  int row = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (int i = 0; i < counts[c]; ++i) y(row++) = static_cast<int>(c);
  return y;
}

}  // namespace

TEST_CASE("class profiles aggregate Gamma mass correctly") {
  ClassProfile s = ClassProfile::signed_mode({5, 5});
  CHECK(s.h_star() == doctest::Approx(50.0));
  CHECK(s.gamma_within(0) == doctest::Approx(25.0));
  CHECK(s.gamma_between(0, 1) == doctest::Approx(25.0));

  // Centered mode against a directly built Gamma.
  for (std::vector<int> counts : {std::vector<int>{5, 5},
                                  std::vector<int>{3, 7},
                                  std::vector<int>{5, 5, 5}}) {
    ClassProfile p = ClassProfile::centered_mode(counts);
    Eigen::VectorXi y = labels_from_counts(counts);
    GammaMatrix g = label_gamma(y);
    double within = 0.0, between = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      for (Eigen::Index j = 0; j < y.size(); ++j) {
        if (y(i) == y(j)) within += g.values(i, j);
        else between += std::abs(g.values(i, j));
      }
    CHECK(p.h_star() == doctest::Approx(within).epsilon(1e-10));
    CHECK(p.between_total() == doctest::Approx(between).epsilon(1e-10));
    // The pivotal identity: sum Gamma = 0 forces the two masses equal.
    CHECK(std::abs(within - between) <= 1e-9 * std::abs(within));
  }
}

TEST_CASE("ub_of_sigma0") {
  CHECK(ub_of_sigma0(1.0, 1e-4) == 0.0);  // underflows, treated as zero
  CHECK(ub_of_sigma0(2.0 * 0.25, 0.5) == doctest::Approx(std::exp(-1.0)));
  double prev = 0.0;
  for (int i = 1; i <= 50; ++i) {
    double v = ub_of_sigma0(1.0, 0.05 * i);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("N constants") {
  ClassProfile p = ClassProfile::signed_mode({5, 5});
  CHECK(n_constant_within(p, 0, 1.0) == doctest::Approx(20.5));  // (16+25)/2
  CHECK(n_constant_between(p, 0, 1, 0.0, 1.0) == doctest::Approx(1.0));

  // Continuity in ub (polynomial, small finite differences).
  double h = 1e-7;
  for (double ub : {0.01, 0.1, 0.3}) {
    double d = (n_constant_between(p, 0, 1, ub + h, 1.0) -
                n_constant_between(p, 0, 1, ub, 1.0)) / h;
    CHECK(std::abs(d) < 100.0);
  }

  CHECK_THROWS_AS(n_constant_within(p, 2, 1.0), IndexError);
  CHECK_THROWS_AS(n_constant_between(p, 0, 0, 0.1, 1.0), IndexError);
}

TEST_CASE("lower bound limits") {
  for (std::vector<int> counts : {std::vector<int>{5, 5},
                                  std::vector<int>{3, 7},
                                  std::vector<int>{5, 5, 5}}) {
    for (auto profile : {ClassProfile::signed_mode(counts),
                         ClassProfile::centered_mode(counts)}) {
      const double sigma1 = 0.5;
      BoundEval e = lower_bound(profile, 1e-5, sigma1, 1.0, 1.0);
      // sigma0 -> 0 drives L to the L* limit.
      CHECK(std::abs(e.l - e.l_star) <= 1e-9 * std::abs(e.h_star));
      // sigma1 -> 0 drives L* to H*.
      double l_small = lower_bound_limit(profile, 1e-3, 1.0);
      CHECK(std::abs(l_small - profile.h_star()) <=
            1e-6 * std::abs(profile.h_star()));
    }
  }
}

TEST_CASE("L <= L* <= H* across a sigma grid") {
  ClassProfile p = ClassProfile::signed_mode({4, 6});
  for (int i = 0; i < 12; ++i) {
    double s0 = 1e-3 * std::pow(1e4, i / 11.0);
    for (int j = 0; j < 12; ++j) {
      double s1 = 1e-3 * std::pow(1e4, j / 11.0);
      BoundEval e = lower_bound(p, s0, s1, 1.0, 1.0);
      CHECK(e.l <= e.l_star + 1e-9);
      CHECK(e.l_star <= e.h_star + 1e-9);
    }
  }
}

TEST_CASE("three-class limit formula") {
  ClassProfile p = ClassProfile::signed_mode({5, 5, 5});
  double sigma1 = 0.7;
  double s2 = 2.0 * sigma1 * sigma1;
  // Balanced signed profile: 75 - 2*25 e^{-2/s2} - 2*25 e^{-1/s2} * 2.
  double expected = 75.0 - 50.0 * std::exp(-2.0 / s2) -
                    100.0 * std::exp(-1.0 / s2);
  CHECK(lower_bound_3class(p, sigma1) == doctest::Approx(expected).epsilon(1e-12));

  // sigma1 -> 0 recovers the same-class mass.
  CHECK(lower_bound_3class(p, 1e-4) == doctest::Approx(75.0));

  // The (1,2) pair decays strictly faster, so L3* beats crediting every
  // cross pair with the slower e^{-1/(2 sigma^2)} factor.
  for (double s : {0.3, 0.7, 1.5, 3.0}) {
    double all_slow =
        p.h_star() - 2.0 * p.between_total() / 2.0 *
                         std::exp(-1.0 / (2.0 * s * s));
    CHECK(lower_bound_3class(p, s) > all_slow);
  }

  CHECK_THROWS_AS(lower_bound_3class(ClassProfile::signed_mode({5, 5}), 1.0),
                  WrongClassCount);
}

TEST_CASE("monotonicity scan") {
  ClassProfile p = ClassProfile::signed_mode({5, 5});
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(1e-6 + 0.15 * i / 99.0);
  MonotonicityReport rep = monotonicity_scan(p, 1.0, grid, 1.0);
  CHECK(rep.non_increasing);
  CHECK(rep.values.front() ==
        doctest::Approx(lower_bound_limit(p, 1.0, 1.0)).epsilon(1e-6));

  // Doubling sigma1 flattens the curve.
  MonotonicityReport rep2 = monotonicity_scan(p, 2.0, grid, 1.0);
  double range1 = rep.values.front() - rep.values.back();
  double range2 = rep2.values.front() - rep2.values.back();
  CHECK(range2 < range1);
}

TEST_CASE("delta schedule and risk-sequence checker") {
  std::vector<double> d = delta_schedule(0.0, 1.0, 5);
  REQUIRE(d.size() == 5);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(1.0 / 3.0));
  CHECK(d[4] == doctest::Approx(1.0 / 6.0));
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] < d[i - 1]);

  // H_l = H* - delta_l satisfies the bound and increases strictly.
  std::vector<double> h;
  for (double dl : d) h.push_back(1.0 - dl);
  ScheduleCheck ok = check_risk_sequence(h, 1.0, d);
  CHECK(ok.bound_ok);
  CHECK(ok.strictly_increasing);

  // A sequence that sags below the schedule gets rejected.
  std::vector<double> bad = {0.5, 0.2, 0.9, 0.8, 0.9};
  ScheduleCheck rej = check_risk_sequence(bad, 1.0, d);
  CHECK_FALSE(rej.bound_ok);
  CHECK_FALSE(rej.strictly_increasing);
  CHECK(rej.first_violation >= 0);
}

TEST_CASE("empirical surrogate check holds in the small-sigma1 regime") {
  for (std::vector<int> counts : {std::vector<int>{5, 5},
                                  std::vector<int>{3, 7},
                                  std::vector<int>{5, 5, 5}}) {
    SurrogateCheck check = empirical_bound_check(counts, 0.05, 0.2, 11);
    CHECK(check.holds);
    CHECK(check.hsic_at_ws >= check.bound - 1e-9);
    CHECK(check.ub_actual <= 0.05);
    CHECK(check.zeta > 0.0);
  }
}

TEST_CASE("bound evaluation is reproducible") {
  ClassProfile p = ClassProfile::signed_mode({3, 7});
  BoundEval a = lower_bound(p, 0.01, 0.5, 1.0, 1.0);
  BoundEval b = lower_bound(p, 0.01, 0.5, 1.0, 1.0);
  CHECK(a.l == b.l);
  CHECK(a.l_star == b.l_star);
}
