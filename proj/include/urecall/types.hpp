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
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urecall/errors.hpp"

namespace urecall {

// Dense 1-based identifiers. External ids are remapped at ingestion.
using UserId = std::int64_t;
using ItemId = std::int32_t;

// The candidate item universe. Item ids are the dense range [1..item_count].
struct Catalog {
  ItemId item_count = 0;
};

enum class ExposureKind {
  kFull,    // feedback observed for every catalog item
  kRandom,  // feedback observed for a uniformly random item subset
};

struct ExposureEntry {
  ItemId item = 0;
  std::uint8_t label = 0;  // binary feedback, 0 or 1
};

// One user's labeled feedback, either complete or a random sample.
// Entries are sorted by item id and contain no duplicates.
struct LabeledExposure {
  UserId user = 0;
  ExposureKind kind = ExposureKind::kRandom;
  std::vector<ExposureEntry> entries;

  int positive_count() const {
    int n = 0;
    for (const auto& e : entries) n += (e.label != 0);
    return n;
  }
};

// One user's real-valued model score for every catalog item.
// scores[i - 1] is the score of item i; all scores are finite.
struct PredictionTable {
  UserId user = 0;
  std::vector<double> scores;
};

// A deterministic total order over the catalog: descending score, ties
// broken by ascending item id. order[p] is the item at rank p + 1 and
// rank_of[i - 1] is the 1-based rank of item i.
struct RankedCatalog {
  UserId user = 0;
  std::vector<ItemId> order;
  std::vector<std::int32_t> rank_of;

  std::int32_t rank(ItemId item) const { return rank_of[item - 1]; }
};

enum class Scheme {
  kGoldFull,         // Recall@K on a fully-exposed dataset
  kTraditionalRand,  // Recall@K̄ on the randomly-exposed items only
  kUre,              // unbiased Recall@K estimate from randomly-exposed items
};

enum class SkipReason {
  kNoPositives,          // no positive feedback in the fully-exposed data
  kNoObservedPositives,  // no positive feedback in the random sample
};

const char* to_string(Scheme scheme);
const char* to_string(SkipReason reason);

// Per-user metric values under one scheme, plus skipped-user accounting.
// Users appear in ascending id order; skipped users are excluded from the
// macro mean.
struct EvalReport {
  Scheme scheme = Scheme::kGoldFull;
  int cutoff = 0;
  std::vector<std::pair<UserId, double>> per_user;
  std::vector<std::pair<UserId, SkipReason>> skipped;
  double macro_mean = 0.0;
};

// Sorts the catalog by the deterministic comparator. Throws
// MissingPrediction if the table does not cover the catalog and
// InvalidScore on non-finite scores.
RankedCatalog build_ranked_catalog(const PredictionTable& preds,
                                   const Catalog& catalog);

struct ValidationIssue {
  enum class Kind {
    kDuplicatePair,
    kOutOfRangeItem,
    kInvalidLabel,
    kIncompleteFullExposure,
  };
  Kind kind;
  UserId user = 0;
  ItemId item = 0;
  std::string detail;
};

struct ValidationSummary {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  int count(ValidationIssue::Kind kind) const {
    int n = 0;
    for (const auto& issue : issues) n += (issue.kind == kind);
    return n;
  }
};

// Reports duplicate (user, item) pairs, out-of-range item ids, non-binary
// labels, and incomplete fully-exposed users. Reporting only; callers
// decide whether to abort.
ValidationSummary validate_dataset(std::span<const LabeledExposure> exposures,
                                   const Catalog& catalog);

}  // namespace urecall
