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
#include "urecall/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace urecall {

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kGoldFull:
      return "full";
    case Scheme::kTraditionalRand:
      return "rand";
    case Scheme::kUre:
      return "ure";
  }
  return "?";
}

const char* to_string(SkipReason reason) {
  switch (reason) {
    case SkipReason::kNoPositives:
      return "no_positives";
    case SkipReason::kNoObservedPositives:
      return "no_observed_positives";
  }
  return "?";
}

RankedCatalog build_ranked_catalog(const PredictionTable& preds,
                                   const Catalog& catalog) {
  const std::size_t n = static_cast<std::size_t>(catalog.item_count);
  if (preds.scores.size() != n) {
    throw MissingPrediction("user " + std::to_string(preds.user) + ": expected " +
                            std::to_string(n) + " scores, got " +
                            std::to_string(preds.scores.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(preds.scores[i])) {
      throw InvalidScore("user " + std::to_string(preds.user) + ", item " +
                         std::to_string(i + 1) + ": non-finite score");
    }
  }

  RankedCatalog ranked;
  ranked.user = preds.user;
  ranked.order.resize(n);
  std::iota(ranked.order.begin(), ranked.order.end(), ItemId{1});
  std::sort(ranked.order.begin(), ranked.order.end(),
            [&preds](ItemId a, ItemId b) {
              const double sa = preds.scores[a - 1];
              const double sb = preds.scores[b - 1];
              if (sa != sb) return sa > sb;
              return a < b;
            });
  ranked.rank_of.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    ranked.rank_of[ranked.order[p] - 1] = static_cast<std::int32_t>(p + 1);
  }
  return ranked;
}

ValidationSummary validate_dataset(std::span<const LabeledExposure> exposures,
                                   const Catalog& catalog) {
  ValidationSummary summary;
  std::map<UserId, std::set<ItemId>> seen;

  for (const auto& exposure : exposures) {
    auto& items = seen[exposure.user];
    for (const auto& entry : exposure.entries) {
      if (entry.item < 1 || entry.item > catalog.item_count) {
        summary.issues.push_back({ValidationIssue::Kind::kOutOfRangeItem,
                                  exposure.user, entry.item,
                                  "item id outside [1.." +
                                      std::to_string(catalog.item_count) + "]"});
      } else if (!items.insert(entry.item).second) {
        summary.issues.push_back({ValidationIssue::Kind::kDuplicatePair,
                                  exposure.user, entry.item,
                                  "duplicate (user, item) pair"});
      }
      if (entry.label > 1) {
        summary.issues.push_back({ValidationIssue::Kind::kInvalidLabel,
                                  exposure.user, entry.item,
                                  "label " + std::to_string(entry.label) +
                                      " outside {0, 1}"});
      }
    }
    if (exposure.kind == ExposureKind::kFull &&
        items.size() != static_cast<std::size_t>(catalog.item_count)) {
      summary.issues.push_back(
          {ValidationIssue::Kind::kIncompleteFullExposure, exposure.user, 0,
           "fully-exposed user labels " + std::to_string(items.size()) +
               " of " + std::to_string(catalog.item_count) + " items"});
    }
  }
  return summary;
}

}  // namespace urecall
