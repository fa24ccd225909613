/*
 * Copyright 2026 The urecall Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "urecall/experiments.hpp"
#include "urecall/rng.hpp"

using namespace urecall;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i) {
    values.push_back(lo + (hi - lo) * i / (n - 1));
  }
  return values;
}

// Wide fidelity/noise grid: family quality spans weak to strong rankers.
FamilySpec wide_family(std::uint64_t seed) {
  return {linspace(0.35, 0.75, 12), {0.4, 0.7, 1.2, 2.1, 3.6}, seed};
}

}  // namespace

TEST_CASE("pearson basics") {
  const std::vector<double> xs{1, 2, 3};
  CHECK(pearson(xs, xs) == doctest::Approx(1.0));
  const std::vector<double> neg{-1, -2, -3};
  CHECK(pearson(xs, neg) == doctest::Approx(-1.0));
  CHECK(pearson(xs, {std::vector<double>{2, 4, 7}}) ==
        doctest::Approx(0.9933992677987828).epsilon(1e-12));
  CHECK(pearson(xs, {std::vector<double>{2, 4, 8}}) ==
        doctest::Approx(0.9819805060619657).epsilon(1e-12));
}

TEST_CASE("pearson flags zero variance instead of fabricating a value") {
  const std::vector<double> xs{1, 2, 3};
  const std::vector<double> flat{5, 5, 5};
  CHECK_THROWS_AS(pearson(xs, flat), UndefinedCorrelation);
  CHECK_FALSE(try_pearson(xs, flat).has_value());
  CHECK_FALSE(try_pearson(flat, xs).has_value());
  CHECK_THROWS_AS(pearson(xs, {std::vector<double>{1, 2}}), UsageError);
}

TEST_CASE("pearson is symmetric and affine invariant") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> xs(12);
    std::vector<double> ys(12);
    for (auto& x : xs) x = rng.normal();
    for (auto& y : ys) y = rng.normal();
    const double r = pearson(xs, ys);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(pearson(ys, xs) == doctest::Approx(r).epsilon(1e-12));
    std::vector<double> scaled(12);
    for (std::size_t i = 0; i < xs.size(); ++i) scaled[i] = 2.5 * xs[i] + 7.0;
    CHECK(pearson(scaled, ys) == doctest::Approx(r).epsilon(1e-9));
  }
}

TEST_CASE("family grid enumerates the fidelity x noise grid") {
  const auto scorers = family_grid(wide_family(3));
  CHECK(scorers.size() == 60);
  // member seeds all distinct
  for (std::size_t i = 0; i < scorers.size(); ++i) {
    for (std::size_t j = i + 1; j < scorers.size(); ++j) {
      CHECK(scorers[i].seed != scorers[j].seed);
    }
  }
  CHECK_THROWS_AS(family_grid({{}, {1.0}, 1}), UsageError);
}

TEST_CASE("self correlation peaks at the fixed cutoff with r = 1") {
  const auto world = generate_full({60, 120, 0.1, 0.0, 17});
  const auto rand = sample_random_exposure(world.full, world.catalog, 20, 18);
  const auto scorers = family_grid({linspace(0.2, 0.8, 5), {0.5, 1.5}, 19});
  const auto grid = default_k_grid(120);
  const std::vector<int> kbar_grid{5};
  const auto family = evaluate_family(world, rand, scorers, grid, kbar_grid);

  const auto curve =
      correlation_sweep(family, MetricId{Scheme::kGoldFull, 50}, grid);
  CHECK(curve.k_max == 50);
  for (std::size_t i = 0; i < curve.k_grid.size(); ++i) {
    if (curve.k_grid[i] == 50) {
      REQUIRE(curve.pearson_r[i].has_value());
      CHECK(*curve.pearson_r[i] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("identical scorers make every correlation undefined") {
  const auto world = generate_full({30, 80, 0.15, 0.0, 23});
  const auto rand = sample_random_exposure(world.full, world.catalog, 16, 24);
  // same spec and same seed: identical members
  std::vector<ScorerSpec> clones(5, ScorerSpec{0.5, 1.0, 99});
  const auto grid = default_k_grid(80);
  const std::vector<int> kbar_grid{5};
  const auto family = evaluate_family(world, rand, clones, grid, kbar_grid);

  const auto matrix = ure_vs_gold_report(family, std::vector<int>{10, 30});
  for (const auto& row : matrix.r) {
    for (const auto& cell : row) CHECK_FALSE(cell.has_value());
  }
  CHECK_FALSE(matrix.diagonal_dominant);
  CHECK_THROWS_AS(
      correlation_sweep(family, MetricId{Scheme::kGoldFull, 10}, grid),
      EmptyCurve);
}

TEST_CASE("degenerate full-sample cutoff yields an empty curve") {
  // K̄ = N̄ = item_count: the restricted recall is 1 for every model, so
  // every correlation point is undefined.
  const auto world = generate_full({25, 30, 0.3, 0.0, 29});
  const auto scorers = family_grid({linspace(0.3, 0.7, 4), {1.0}, 31});
  const auto grid = default_k_grid(30);
  CHECK_THROWS_AS(kbar_sweep(world, scorers, 30, std::vector<int>{30}, 32, grid),
                  EmptyCurve);
}

TEST_CASE("metric ids render and parse") {
  CHECK(to_string(MetricId{Scheme::kTraditionalRand, 5}) == "rand@5");
  CHECK(to_string(MetricId{Scheme::kUre, 30}) == "ure@30");
  const auto id = parse_metric_id("full@50");
  CHECK(id.scheme == Scheme::kGoldFull);
  CHECK(id.cutoff == 50);
  CHECK_THROWS_AS(parse_metric_id("full"), UsageError);
  CHECK_THROWS_AS(parse_metric_id("bogus@5"), UsageError);
  CHECK_THROWS_AS(parse_metric_id("ure@x"), UsageError);
}

TEST_CASE("default grid is clipped to the catalog") {
  const auto grid = default_k_grid(500);
  CHECK(grid.front() == 1);
  CHECK(grid.back() == 300);
  const auto tiny = default_k_grid(8);
  CHECK(tiny.back() == 7);
}

// The reference synthetic configuration, larger user count: the estimator's
// correlation curve against the gold metric peaks at the estimator's own
// cutoff, while the restricted scheme at cutoff 5 on 20-item samples peaks
// far beyond 50.
TEST_CASE("estimate correlation peaks at its own cutoff on the default run") {
  const std::uint64_t seed = 11;
  const auto world =
      generate_full({400, 500, 0.04, 0.0, derive_seed(seed, 1)});
  const auto scorers = family_grid(wide_family(derive_seed(seed, 2)));
  const auto rand =
      sample_random_exposure(world.full, world.catalog, 20, derive_seed(seed, 3));
  const auto grid = default_k_grid(500);
  const std::vector<int> kbar_grid{5};
  const auto family = evaluate_family(world, rand, scorers, grid, kbar_grid);

  const auto trad =
      correlation_sweep(family, MetricId{Scheme::kTraditionalRand, 5}, grid);
  CHECK(trad.k_max > 50);

  const auto est10 = correlation_sweep(family, MetricId{Scheme::kUre, 10}, grid);
  CHECK(est10.k_max == 10);
  const auto est30 = correlation_sweep(family, MetricId{Scheme::kUre, 30}, grid);
  CHECK(est30.k_max == 30);
}

TEST_CASE("sample-size sweep tracks the coupling and shrinks k_max") {
  const std::uint64_t seed = 7;
  const auto world =
      generate_full({200, 500, 0.04, 0.0, derive_seed(seed, 1)});
  const auto scorers = family_grid(wide_family(derive_seed(seed, 2)));
  const auto grid = default_k_grid(500);
  const std::vector<int> sizes{20, 40, 80};
  const auto sweep =
      nbar_sweep(world, scorers, sizes, 5, derive_seed(seed, 3), grid);

  REQUIRE(sweep.k_max_sequence.size() == 3);
  for (std::size_t i = 0; i + 1 < sweep.k_max_sequence.size(); ++i) {
    CHECK(sweep.k_max_sequence[i] >= sweep.k_max_sequence[i + 1]);
  }
  // within +-50% of the coupling 500 * 5 / sample_size
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double coupled = 500.0 * 5.0 / sizes[i];
    CHECK(sweep.k_max_sequence[i] >= 0.5 * coupled);
    CHECK(sweep.k_max_sequence[i] <= 1.5 * coupled);
  }
}

TEST_CASE("whole-catalog sample reduces the sweep to self correlation") {
  const auto world = generate_full({40, 60, 0.2, 0.0, 43});
  const auto scorers = family_grid({linspace(0.3, 0.7, 6), {0.8, 1.6}, 44});
  const auto grid = default_k_grid(60);
  const auto sweep =
      nbar_sweep(world, scorers, std::vector<int>{60}, 5, 45, grid);
  CHECK(sweep.k_max_sequence[0] == 5);
  // and the peak is exactly 1
  for (std::size_t i = 0; i < sweep.curves[0].k_grid.size(); ++i) {
    if (sweep.curves[0].k_grid[i] == 5) {
      CHECK(*sweep.curves[0].pearson_r[i] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("restricted-cutoff sweep orders k_max with the cutoff") {
  // Matched-quality family: the positional coupling dominates when the
  // members differ mostly by realization rather than by quality.
  const std::uint64_t seed = 7;
  const auto world =
      generate_full({200, 500, 0.10, 0.0, derive_seed(seed, 1)});
  const FamilySpec family_spec{linspace(0.42, 0.53, 12),
                               {0.9, 0.95, 1.0, 1.05, 1.1},
                               derive_seed(seed, 2)};
  const auto scorers = family_grid(family_spec);
  const auto grid = default_k_grid(500);
  const std::vector<int> kbars{1, 3, 5};
  const auto sweep =
      kbar_sweep(world, scorers, 80, kbars, derive_seed(seed, 3), grid);
  REQUIRE(sweep.k_max_sequence.size() == 3);
  CHECK(sweep.k_max_sequence[0] <= sweep.k_max_sequence[1]);
  CHECK(sweep.k_max_sequence[1] <= sweep.k_max_sequence[2]);
}
