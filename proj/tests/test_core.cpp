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

#include <cmath>
#include <limits>

#include "urecall/rng.hpp"
#include "urecall/types.hpp"

using namespace urecall;

namespace {

PredictionTable table(UserId user, std::vector<double> scores) {
  PredictionTable t;
  t.user = user;
  t.scores = std::move(scores);
  return t;
}

}  // namespace

TEST_CASE("ranking sorts by descending score") {
  const Catalog catalog{3};
  const auto ranked = build_ranked_catalog(table(1, {0.9, 0.5, 0.7}), catalog);
  CHECK(ranked.order == std::vector<ItemId>{1, 3, 2});
  CHECK(ranked.rank(1) == 1);
  CHECK(ranked.rank(3) == 2);
  CHECK(ranked.rank(2) == 3);
}

TEST_CASE("full tie falls back to ascending item id") {
  const Catalog catalog{3};
  const auto ranked = build_ranked_catalog(table(1, {0.5, 0.5, 0.5}), catalog);
  CHECK(ranked.order == std::vector<ItemId>{1, 2, 3});
}

TEST_CASE("partial tie keeps the higher score first") {
  const Catalog catalog{3};
  const auto ranked = build_ranked_catalog(table(1, {0.5, 0.9, 0.5}), catalog);
  CHECK(ranked.order == std::vector<ItemId>{2, 1, 3});
}

TEST_CASE("ranking rejects incomplete or non-finite tables") {
  const Catalog catalog{3};
  CHECK_THROWS_AS(build_ranked_catalog(table(1, {0.5, 0.9}), catalog),
                  MissingPrediction);
  CHECK_THROWS_AS(
      build_ranked_catalog(
          table(1, {0.5, std::numeric_limits<double>::quiet_NaN(), 0.0}),
          catalog),
      InvalidScore);
  CHECK_THROWS_AS(
      build_ranked_catalog(
          table(1, {0.5, std::numeric_limits<double>::infinity(), 0.0}),
          catalog),
      InvalidScore);
}

TEST_CASE("ranking is deterministic and rank_of inverts order") {
  const Catalog catalog{40};
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(40);
    for (auto& s : scores) s = rng.normal();
    // duplicated scores exercise the tie rule
    scores[7] = scores[3];
    scores[21] = scores[3];
    const auto a = build_ranked_catalog(table(1, scores), catalog);
    const auto b = build_ranked_catalog(table(1, scores), catalog);
    CHECK(a.order == b.order);
    for (std::size_t p = 0; p < a.order.size(); ++p) {
      CHECK(a.rank(a.order[p]) == static_cast<std::int32_t>(p + 1));
    }
  }
}

TEST_CASE("ranking is invariant under strictly increasing transforms") {
  const Catalog catalog{30};
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(30);
    for (auto& s : scores) s = rng.normal();
    scores[4] = scores[9];
    const auto base = build_ranked_catalog(table(1, scores), catalog);

    std::vector<double> affine(30);
    std::vector<double> monotone(30);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      affine[i] = 3.25 * scores[i] + 11.0;
      monotone[i] = std::atan(scores[i]);
    }
    CHECK(build_ranked_catalog(table(1, affine), catalog).order == base.order);
    CHECK(build_ranked_catalog(table(1, monotone), catalog).order ==
          base.order);
  }
}

TEST_CASE("validation reports duplicates, bad labels and bad ids") {
  const Catalog catalog{3};

  LabeledExposure dirty;
  dirty.user = 1;
  dirty.kind = ExposureKind::kRandom;
  dirty.entries = {{3, 1}, {3, 0}, {5, 1}, {2, 2}};

  const auto summary = validate_dataset({&dirty, 1}, catalog);
  CHECK_FALSE(summary.ok());
  CHECK(summary.count(ValidationIssue::Kind::kDuplicatePair) == 1);
  CHECK(summary.count(ValidationIssue::Kind::kOutOfRangeItem) == 1);
  CHECK(summary.count(ValidationIssue::Kind::kInvalidLabel) == 1);
}

TEST_CASE("validation counts incomplete fully-exposed users") {
  const Catalog catalog{3};
  LabeledExposure partial;
  partial.user = 4;
  partial.kind = ExposureKind::kFull;
  partial.entries = {{1, 1}, {2, 0}};
  const auto summary = validate_dataset({&partial, 1}, catalog);
  CHECK(summary.count(ValidationIssue::Kind::kIncompleteFullExposure) == 1);
}

TEST_CASE("validation passes clean data") {
  const Catalog catalog{2};
  LabeledExposure full;
  full.user = 1;
  full.kind = ExposureKind::kFull;
  full.entries = {{1, 1}, {2, 0}};
  LabeledExposure rand;
  rand.user = 2;
  rand.kind = ExposureKind::kRandom;
  rand.entries = {{2, 1}};
  const std::vector<LabeledExposure> exposures{full, rand};
  CHECK(validate_dataset(exposures, catalog).ok());
}
