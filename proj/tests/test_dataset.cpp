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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "kdn/dataset.hpp"
#include "kdn/errors.hpp"

using namespace kdn;
namespace fs = std::filesystem;

namespace {

fs::path temp_csv(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream f(p);
  f << body;
  return p;
}

}  // namespace

TEST_CASE("load_csv parses a small table and re-encodes labels") {
  auto p = temp_csv("kdn_small.csv",
                    "x,y,label\n1,2,a\n3,4,a\n5,6,b\n7,8,b\n");
  DataSet ds = load_csv(p, std::string("label"));
  CHECK(ds.n() == 4);
  CHECK(ds.dim() == 2);
  CHECK(ds.classes() == 2);
  CHECK(ds.n_per_class == std::vector<int>{2, 2});
  CHECK(ds.labels(0) == 0);  // first-appearance order
  CHECK(ds.labels(2) == 1);
  CHECK(ds.features(3, 1) == 8.0);

  // Label column addressable by index as well.
  DataSet by_idx = load_csv(p, 2);
  CHECK(by_idx.labels == ds.labels);
}

TEST_CASE("load_csv error paths") {
  auto bad_cell = temp_csv("kdn_bad.csv", "x,label\n1,a\noops,b\n");
  CHECK_THROWS_AS(load_csv(bad_cell, std::string("label")), ParseError);

  auto ragged = temp_csv("kdn_ragged.csv", "x,y,label\n1,2,a\n3,b\n");
  CHECK_THROWS_AS(load_csv(ragged, std::string("label")), ParseError);

  auto one_class = temp_csv("kdn_one.csv", "x,label\n1,a\n2,a\n");
  CHECK_THROWS_AS(load_csv(one_class, std::string("label")), EmptyClass);

  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", std::string("label")),
                  IoError);
  CHECK_THROWS_AS(load_csv(bad_cell, std::string("missing_col")), ParseError);
}

TEST_CASE("wine CSV has the documented shape") {
  fs::path wine = fs::path(KDN_SOURCE_DIR) / "data" / "wine.csv";
  DataSet ds = load_csv(wine, std::string("class"));
  CHECK(ds.n() == 178);
  CHECK(ds.dim() == 13);
  CHECK(ds.classes() == 3);
}

TEST_CASE("write_csv / load_csv round trip preserves doubles exactly") {
  DataSet ds = gen_random(10, 3, 99);
  ds.features(0, 0) = 1.0 / 3.0;
  ds.features(1, 2) = -1e-17;
  fs::path p = fs::temp_directory_path() / "kdn_roundtrip.csv";
  write_csv(ds, p);
  DataSet back = load_csv(p, std::string("class"));
  CHECK(back.features == ds.features);  // bitwise, thanks to %.17g
  // Label codes may permute (first-appearance order), names must not.
  for (int i = 0; i < ds.n(); ++i)
    CHECK(back.class_names[back.labels(i)] == ds.class_names[ds.labels(i)]);
}

TEST_CASE("standardize centers and scales with population std") {
  DataSet ds;
  ds.features.resize(2, 1);
  ds.features << 1, 3;
  ds.labels.resize(2);
  ds.labels << 0, 1;
  ds.n_per_class = {1, 1};
  auto [out, t] = standardize(ds);
  CHECK(out.features(0, 0) == doctest::Approx(-1.0));
  CHECK(out.features(1, 0) == doctest::Approx(1.0));
  CHECK(t.mean(0) == doctest::Approx(2.0));
  CHECK(t.scale(0) == doctest::Approx(1.0));

  // Held-out rows go through (x - mean) / std.
  Eigen::MatrixXd held(1, 1);
  held << 5.0;
  CHECK(t.apply(held)(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("standardize maps constant features to zero and is idempotent") {
  DataSet ds = gen_random(40, 3, 7);
  ds.features.col(1).setConstant(5.0);
  auto [out, t] = standardize(ds);
  CHECK(out.features.col(1).cwiseAbs().maxCoeff() == 0.0);
  for (int j : {0, 2}) {
    CHECK(std::abs(out.features.col(j).mean()) < 1e-12);
    double var = out.features.col(j).squaredNorm() / ds.n();
    CHECK(std::abs(var - 1.0) < 1e-12);
  }
  auto [twice, t2] = standardize(out);
  CHECK((twice.features - out.features).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gen_random splits labels evenly and is deterministic") {
  DataSet a = gen_random(80, 2, 7);
  DataSet b = gen_random(80, 2, 7);
  CHECK(a.n() == 80);
  CHECK(a.n_per_class == std::vector<int>{40, 40});
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  DataSet c = gen_random(80, 2, 8);
  CHECK(a.labels != c.labels);
}

TEST_CASE("gen_adversarial pairs sit noise-close across classes") {
  DataSet ds = gen_adversarial(40, 0.01, 5);
  CHECK(ds.n() == 80);
  CHECK(ds.classes() == 2);

  // Mean within-pair distance approximates noise * E||N(0, I_2)||
  // = 0.01 * sqrt(pi/2) = 0.012533.
  double mean_dist = 0.0;
  for (int i = 0; i < 40; ++i)
    mean_dist += (ds.features.row(i) - ds.features.row(40 + i)).norm();
  mean_dist /= 40.0;
  CHECK(mean_dist > 0.0125 - 0.003);
  CHECK(mean_dist < 0.0125 + 0.003);

  // noise = 0 collapses each pair exactly.
  DataSet zero = gen_adversarial(10, 0.0, 5);
  for (int i = 0; i < 10; ++i)
    CHECK((zero.features.row(i) - zero.features.row(10 + i)).norm() == 0.0);
}

TEST_CASE("gen_spiral puts noiseless points exactly on the arms") {
  DataSet ds = gen_spiral(20, 0.0, 11);
  CHECK(ds.n() == 60);
  for (int i = 0; i < ds.n(); ++i) {
    double radius = ds.features.row(i).norm();
    CHECK(radius >= 0.5 - 1e-12);
    CHECK(radius <= 3.0 + 1e-12);
    double angle = std::atan2(ds.features(i, 1), ds.features(i, 0));
    double expected =
        2.0 * radius + 2.0 * std::numbers::pi * ds.labels(i) / 3.0;
    double diff = std::remainder(angle - expected, 2.0 * std::numbers::pi);
    CHECK(std::abs(diff) < 1e-9);
  }
  DataSet again = gen_spiral(20, 0.0, 11);
  CHECK(ds.features == again.features);
}

TEST_CASE("gen_spiral arms are separable by nearest clean-arm point") {
  DataSet ds = gen_spiral(100, 0.1, 3);
  // Dense sample of the three parametric arms as a 1-NN oracle.
  int hits = 0;
  for (int i = 0; i < ds.n(); ++i) {
    double best = 1e300;
    int best_c = -1;
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k <= 2000; ++k) {
        double t = 0.5 + 2.5 * k / 2000.0;
        double ang = 2.0 * t + 2.0 * std::numbers::pi * c / 3.0;
        double dx = ds.features(i, 0) - t * std::cos(ang);
        double dy = ds.features(i, 1) - t * std::sin(ang);
        double d = dx * dx + dy * dy;
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
    }
    if (best_c == ds.labels(i)) ++hits;
  }
  CHECK(hits >= static_cast<int>(0.99 * ds.n()));
}

TEST_CASE("make_folds is stratified and a partition") {
  DataSet ds = gen_random(100, 2, 3);
  FoldPlan plan = make_folds(ds, 10, 17);
  std::vector<std::vector<int>> per_fold(10, std::vector<int>(2, 0));
  for (int i = 0; i < ds.n(); ++i) {
    CHECK(plan.assignment[i] >= 0);
    CHECK(plan.assignment[i] < 10);
    ++per_fold[plan.assignment[i]][ds.labels(i)];
  }
  for (int f = 0; f < 10; ++f) {
    CHECK(per_fold[f][0] == 5);
    CHECK(per_fold[f][1] == 5);
  }

  // Every sample in exactly one fold: train + test indices partition.
  auto tr = plan.train_indices(3);
  auto te = plan.test_indices(3);
  CHECK(tr.size() + te.size() == static_cast<std::size_t>(ds.n()));
  std::set<int> all(tr.begin(), tr.end());
  all.insert(te.begin(), te.end());
  CHECK(all.size() == static_cast<std::size_t>(ds.n()));
}

TEST_CASE("make_folds on wine keeps per-class counts within one") {
  fs::path wine = fs::path(KDN_SOURCE_DIR) / "data" / "wine.csv";
  DataSet ds = load_csv(wine, std::string("class"));
  FoldPlan plan = make_folds(ds, 10, 1);
  for (int c = 0; c < ds.classes(); ++c) {
    std::vector<int> counts(10, 0);
    for (int i = 0; i < ds.n(); ++i)
      if (ds.labels(i) == c && true) ++counts[plan.assignment[i]];
    int lo = *std::min_element(counts.begin(), counts.end());
    int hi = *std::max_element(counts.begin(), counts.end());
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("make_folds edge cases") {
  DataSet tiny;
  tiny.features.resize(4, 1);
  tiny.features << 1, 2, 3, 4;
  tiny.labels.resize(4);
  tiny.labels << 0, 1, 0, 1;
  tiny.n_per_class = {2, 2};
  FoldPlan plan = make_folds(tiny, 2, 0);
  std::vector<std::vector<int>> per_fold(2, std::vector<int>(2, 0));
  for (int i = 0; i < 4; ++i) ++per_fold[plan.assignment[i]][tiny.labels(i)];
  for (int f = 0; f < 2; ++f) {
    CHECK(per_fold[f][0] == 1);
    CHECK(per_fold[f][1] == 1);
  }
  CHECK_THROWS_AS(make_folds(tiny, 3, 0), TooFewSamples);
}
