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

#include <algorithm>
#include <cmath>
#include <set>

#include "urecall/metrics.hpp"
#include "urecall/synth.hpp"

using namespace urecall;

TEST_CASE("normal quantile inverts the normal cdf") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.0228) < -1.9);
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
  for (double p = 0.001; p < 1.0; p += 0.0421) {
    const double x = normal_quantile(p);
    const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(back == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("world generation is deterministic in the spec") {
  const WorldSpec spec{5, 40, 0.3, 0.0, 97};
  const auto a = generate_full(spec);
  const auto b = generate_full(spec);
  REQUIRE(a.full.size() == 5);
  for (std::size_t u = 0; u < a.full.size(); ++u) {
    CHECK(a.latents[u] == b.latents[u]);
    for (std::size_t i = 0; i < a.full[u].entries.size(); ++i) {
      CHECK(a.full[u].entries[i].label == b.full[u].entries[i].label);
    }
  }
}

TEST_CASE("adding users never perturbs existing users") {
  const WorldSpec small{3, 25, 0.2, 0.0, 4242};
  WorldSpec large = small;
  large.user_count = 8;
  const auto a = generate_full(small);
  const auto b = generate_full(large);
  for (std::size_t u = 0; u < a.full.size(); ++u) {
    CHECK(a.latents[u] == b.latents[u]);
  }
}

TEST_CASE("unit positive rate labels everything positive") {
  const auto world = generate_full({4, 30, 1.0, 0.0, 1});
  for (const auto& user : world.full) {
    CHECK(user.positive_count() == 30);
  }
}

TEST_CASE("positive counts stay inside a binomial envelope") {
  // 40 users x 1000 items at rate 0.2: each user's positive count is
  // Binomial(1000, 0.2); 4 sigma around the mean is [149.4, 250.6] per
  // user. A fixed-seed suite must keep every user inside it.
  for (const std::uint64_t seed : {11u, 22u, 33u}) {
    const auto world = generate_full({40, 1000, 0.2, 0.0, seed});
    for (const auto& user : world.full) {
      const double count = user.positive_count();
      CHECK(count > 1000 * 0.2 - 4.0 * std::sqrt(1000 * 0.2 * 0.8));
      CHECK(count < 1000 * 0.2 + 4.0 * std::sqrt(1000 * 0.2 * 0.8));
    }
  }
}

TEST_CASE("labels are the latents thresholded at the rate quantile") {
  const double rate = 0.25;
  const auto world = generate_full({6, 200, rate, 0.0, 5});
  const double threshold = normal_quantile(1.0 - rate);
  for (std::size_t u = 0; u < world.full.size(); ++u) {
    for (std::size_t i = 0; i < world.latents[u].size(); ++i) {
      CHECK(world.full[u].entries[i].label ==
            (world.latents[u][i] > threshold ? 1 : 0));
    }
  }
}

TEST_CASE("random exposure samples distinct items with copied labels") {
  const auto world = generate_full({10, 50, 0.3, 0.0, 77});
  const auto rand =
      sample_random_exposure(world.full, world.catalog, 12, 909);
  REQUIRE(rand.size() == world.full.size());
  for (std::size_t u = 0; u < rand.size(); ++u) {
    CHECK(rand[u].entries.size() == 12);
    CHECK(rand[u].kind == ExposureKind::kRandom);
    std::set<ItemId> items;
    for (const auto& entry : rand[u].entries) {
      CHECK(items.insert(entry.item).second);  // no duplicates
      CHECK(entry.item >= 1);
      CHECK(entry.item <= 50);
      CHECK(entry.label == world.full[u].entries[entry.item - 1].label);
    }
  }
  const auto again =
      sample_random_exposure(world.full, world.catalog, 12, 909);
  for (std::size_t u = 0; u < rand.size(); ++u) {
    for (std::size_t i = 0; i < rand[u].entries.size(); ++i) {
      CHECK(rand[u].entries[i].item == again[u].entries[i].item);
    }
  }
}

TEST_CASE("sampling the whole catalog reproduces the full data") {
  const auto world = generate_full({4, 30, 0.4, 0.0, 13});
  const auto rand =
      sample_random_exposure(world.full, world.catalog, 30, 14);
  for (std::size_t u = 0; u < rand.size(); ++u) {
    REQUIRE(rand[u].entries.size() == 30);
    for (std::size_t i = 0; i < 30; ++i) {
      CHECK(rand[u].entries[i].item == world.full[u].entries[i].item);
      CHECK(rand[u].entries[i].label == world.full[u].entries[i].label);
    }
  }
}

TEST_CASE("item inclusion frequencies are uniform across draws") {
  // 20 items, samples of 5: inclusion probability is 1/4 per item. Over
  // 2000 seeded draws of a single user the count is Binomial(2000, 0.25);
  // every item must sit within 4 sigma.
  const auto world = generate_full({1, 20, 0.5, 0.0, 3});
  std::vector<int> inclusion(20, 0);
  const int draws = 2000;
  for (int d = 0; d < draws; ++d) {
    const auto rand = sample_random_exposure(world.full, world.catalog, 5,
                                             1000 + static_cast<std::uint64_t>(d));
    for (const auto& entry : rand[0].entries) ++inclusion[entry.item - 1];
  }
  const double mean = draws * 0.25;
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (const int count : inclusion) {
    CHECK(count > mean - 4.0 * sigma);
    CHECK(count < mean + 4.0 * sigma);
  }
}

TEST_CASE("oversized samples are rejected") {
  const auto world = generate_full({2, 10, 0.5, 0.0, 8});
  CHECK_THROWS_AS(sample_random_exposure(world.full, world.catalog, 11, 1),
                  InvalidSampleSize);
  CHECK_THROWS_AS(sample_random_exposure(world.full, world.catalog, 0, 1),
                  InvalidSampleSize);
}

TEST_CASE("perfect fidelity ranks by latent preference exactly") {
  const auto world = generate_full({3, 60, 0.2, 0.0, 19});
  const auto tables = make_scorer(world, {1.0, 3.0, 555});
  for (std::size_t u = 0; u < tables.size(); ++u) {
    CHECK(tables[u].scores == world.latents[u]);
    // every positive latent above every negative latent in ranking order
    const auto ranked = build_ranked_catalog(tables[u], world.catalog);
    const int positives = world.full[u].positive_count();
    int seen_positives = 0;
    for (int p = 0; p < positives; ++p) {
      seen_positives += world.full[u].entries[ranked.order[p] - 1].label;
    }
    CHECK(seen_positives == positives);  // positives occupy the top ranks
  }
}

TEST_CASE("scorers are deterministic in the spec") {
  const auto world = generate_full({4, 40, 0.3, 0.0, 23});
  const ScorerSpec spec{0.6, 1.5, 77};
  const auto a = make_scorer(world, spec);
  const auto b = make_scorer(world, spec);
  for (std::size_t u = 0; u < a.size(); ++u) {
    CHECK(a[u].scores == b[u].scores);
  }
  const auto c = make_scorer(world, {0.6, 1.5, 78});
  CHECK(a[0].scores != c[0].scores);
}

TEST_CASE("zero fidelity matches the random-ranking expectation") {
  // With scores independent of labels, macro Recall@K averaged over a
  // fixed-seed suite must sit within 4 standard errors of K / item_count.
  const int item_count = 100;
  const int users = 50;
  const auto world = generate_full({users, item_count, 0.2, 0.0, 31});
  const int k = 10;

  std::vector<double> macro_values;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto tables = make_scorer(world, {0.0, 1.0, seed});
    double sum = 0.0;
    int counted = 0;
    for (std::size_t u = 0; u < tables.size(); ++u) {
      if (world.full[u].positive_count() == 0) continue;
      const auto ranked = build_ranked_catalog(tables[u], world.catalog);
      sum += recall_at_k(ranked, world.full[u], k);
      ++counted;
    }
    macro_values.push_back(sum / counted);
  }
  double mean = 0.0;
  for (const double v : macro_values) mean += v;
  mean /= static_cast<double>(macro_values.size());
  double var = 0.0;
  for (const double v : macro_values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(macro_values.size() - 1);
  const double stderr_mean =
      std::sqrt(var / static_cast<double>(macro_values.size()));
  const double expected = static_cast<double>(k) / item_count;
  CHECK(std::abs(mean - expected) <= 4.0 * stderr_mean);
}

TEST_CASE("higher fidelity does not degrade median recall") {
  const auto world = generate_full({30, 80, 0.2, 0.0, 41});
  const int k = 10;
  double previous_median = -1.0;
  for (const double fidelity : {0.0, 0.35, 0.7, 1.0}) {
    std::vector<double> values;
    for (std::uint64_t seed = 7; seed < 12; ++seed) {
      const auto tables = make_scorer(world, {fidelity, 1.0, seed});
      double sum = 0.0;
      int counted = 0;
      for (std::size_t u = 0; u < tables.size(); ++u) {
        if (world.full[u].positive_count() == 0) continue;
        const auto ranked = build_ranked_catalog(tables[u], world.catalog);
        sum += recall_at_k(ranked, world.full[u], k);
        ++counted;
      }
      values.push_back(sum / counted);
    }
    std::sort(values.begin(), values.end());
    const double median = values[values.size() / 2];
    CHECK(median >= previous_median);
    previous_median = median;
  }
}

TEST_CASE("per-user rate ranges draw rates inside the range") {
  const auto world = generate_full({40, 300, 0.1, 0.5, 59});
  for (const auto& user : world.full) {
    const double rate = user.positive_count() / 300.0;
    // Binomial spread around a rate in [0.1, 0.5] stays well inside
    // [0.0, 0.65] at 300 items.
    CHECK(rate > 0.0);
    CHECK(rate < 0.65);
  }
}

TEST_CASE("world generation validates its spec") {
  CHECK_THROWS_AS(generate_full({0, 10, 0.5, 0.0, 1}), UsageError);
  CHECK_THROWS_AS(generate_full({5, 10, 0.0, 0.0, 1}), UsageError);
  CHECK_THROWS_AS(generate_full({5, 10, 1.5, 0.0, 1}), UsageError);
  CHECK_THROWS_AS(generate_full({5, 10, 0.4, 0.2, 1}), UsageError);
  CHECK_THROWS_AS(make_scorer(generate_full({2, 5, 0.5, 0.0, 1}), {1.5, 1.0, 2}),
                  UsageError);
}
