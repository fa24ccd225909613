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
#include "urecall/metrics.hpp"

#include <algorithm>
#include <map>

namespace urecall {
namespace {

void check_cutoff(int k, int lo, int hi, const char* what) {
  if (k < lo || k > hi) {
    throw InvalidCutoff(std::string(what) + " cutoff " + std::to_string(k) +
                        " outside [" + std::to_string(lo) + ".." +
                        std::to_string(hi) + "]");
  }
}

}  // namespace

double recall_at_k(const RankedCatalog& ranked, const LabeledExposure& full,
                   int k) {
  const int item_count = static_cast<int>(ranked.order.size());
  check_cutoff(k, 1, item_count, "recall");
  int positives = 0;
  int within = 0;
  for (const auto& entry : full.entries) {
    if (entry.label == 0) continue;
    ++positives;
    if (ranked.rank(entry.item) <= k) ++within;
  }
  if (positives == 0) {
    throw NoPositives("user " + std::to_string(full.user) +
                      " has no positive feedback");
  }
  return static_cast<double>(within) / static_cast<double>(positives);
}

double traditional_recall_on_rand(const PredictionTable& preds,
                                  const LabeledExposure& rand, int k_bar) {
  check_cutoff(k_bar, 1, static_cast<int>(rand.entries.size()), "restricted");

  // Rank only the sampled items, with the same comparator as the full
  // catalog ranking.
  std::vector<const ExposureEntry*> restricted;
  restricted.reserve(rand.entries.size());
  for (const auto& entry : rand.entries) restricted.push_back(&entry);
  std::sort(restricted.begin(), restricted.end(),
            [&preds](const ExposureEntry* a, const ExposureEntry* b) {
              const double sa = preds.scores[a->item - 1];
              const double sb = preds.scores[b->item - 1];
              if (sa != sb) return sa > sb;
              return a->item < b->item;
            });

  int positives = 0;
  int within = 0;
  for (std::size_t pos = 0; pos < restricted.size(); ++pos) {
    if (restricted[pos]->label == 0) continue;
    ++positives;
    if (pos < static_cast<std::size_t>(k_bar)) ++within;
  }
  if (positives == 0) {
    throw NoPositives("user " + std::to_string(rand.user) +
                      " has no positive feedback in the sample");
  }
  return static_cast<double>(within) / static_cast<double>(positives);
}

UreUserOutcome ure_estimate(const RankedCatalog& ranked,
                            const LabeledExposure& rand, int k) {
  const int item_count = static_cast<int>(ranked.order.size());
  // K = item_count is rejected: the estimator thresholds on the (K+1)-th
  // ranked item, which must exist.
  check_cutoff(k, 1, item_count - 1, "estimator");

  UreUserOutcome outcome;
  for (const auto& entry : rand.entries) {
    if (entry.label == 0) continue;
    ++outcome.positives_observed;
    if (ranked.rank(entry.item) <= k) ++outcome.positives_in_top_k;
  }
  if (outcome.positives_observed == 0) {
    throw NoObservedPositives("user " + std::to_string(rand.user) +
                              " has no observed positives");
  }
  outcome.value = static_cast<double>(outcome.positives_in_top_k) /
                  static_cast<double>(outcome.positives_observed);
  return outcome;
}

EvalReport evaluate_scheme(Scheme scheme,
                           std::span<const LabeledExposure> exposures,
                           std::span<const PredictionTable> predictions,
                           const Catalog& catalog, int cutoff) {
  std::map<UserId, const PredictionTable*> preds_by_user;
  for (const auto& table : predictions) preds_by_user[table.user] = &table;

  // Users are merged in id order so that reports are deterministic.
  std::map<UserId, const LabeledExposure*> exposures_by_user;
  for (const auto& exposure : exposures) {
    const ExposureKind want = scheme == Scheme::kGoldFull
                                  ? ExposureKind::kFull
                                  : ExposureKind::kRandom;
    if (exposure.kind != want) {
      throw Error("user " + std::to_string(exposure.user) +
                  ": exposure kind does not match scheme " +
                  std::string(to_string(scheme)));
    }
    exposures_by_user[exposure.user] = &exposure;
  }

  EvalReport report;
  report.scheme = scheme;
  report.cutoff = cutoff;

  double sum = 0.0;
  for (const auto& [user, exposure] : exposures_by_user) {
    auto found = preds_by_user.find(user);
    if (found == preds_by_user.end()) {
      throw MissingPrediction("user " + std::to_string(user) +
                              " has no prediction table");
    }
    const PredictionTable& preds = *found->second;
    try {
      double value = 0.0;
      switch (scheme) {
        case Scheme::kGoldFull:
          value = recall_at_k(build_ranked_catalog(preds, catalog), *exposure,
                              cutoff);
          break;
        case Scheme::kTraditionalRand:
          value = traditional_recall_on_rand(preds, *exposure, cutoff);
          break;
        case Scheme::kUre:
          value = ure_estimate(build_ranked_catalog(preds, catalog), *exposure,
                               cutoff)
                      .value;
          break;
      }
      report.per_user.emplace_back(user, value);
      sum += value;
    } catch (const NoObservedPositives&) {
      report.skipped.emplace_back(user, SkipReason::kNoObservedPositives);
    } catch (const NoPositives&) {
      report.skipped.emplace_back(user, SkipReason::kNoPositives);
    }
  }

  if (report.per_user.empty()) {
    throw EmptyEvaluation("no user has a defined value under scheme " +
                          std::string(to_string(scheme)));
  }
  report.macro_mean = sum / static_cast<double>(report.per_user.size());
  return report;
}

}  // namespace urecall
