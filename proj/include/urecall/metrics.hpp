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

#include <span>

#include "urecall/types.hpp"

namespace urecall {

// Per-user outcome of the unbiased Recall@K estimator: of the
// positives_observed positive items in the user's random sample,
// positives_in_top_k have rank <= K in the full catalog ranking, and
// value = positives_in_top_k / positives_observed.
struct UreUserOutcome {
  int positives_observed = 0;
  int positives_in_top_k = 0;
  double value = 0.0;
};

// Recall@K on a fully-exposed dataset: the fraction of the user's positive
// items ranked within the top K of the full catalog ranking.
// Throws InvalidCutoff unless 1 <= k <= item_count and NoPositives when the
// user has no positive feedback.
double recall_at_k(const RankedCatalog& ranked, const LabeledExposure& full,
                   int k);

// The traditional scheme: ranks only the items present in the random sample
// (same comparator as the full ranking) and applies the recall formula to
// that restricted list with cutoff k_bar <= |sample|.
double traditional_recall_on_rand(const PredictionTable& preds,
                                  const LabeledExposure& rand, int k_bar);

// The unbiased estimator of Recall@K: counts the sampled positives ranked
// strictly above the (K+1)-th item of the full catalog ranking, i.e. those
// with rank <= K. Requires 1 <= k <= item_count - 1 (there must be a
// (K+1)-th item); throws NoObservedPositives when the sample has no
// positive feedback.
UreUserOutcome ure_estimate(const RankedCatalog& ranked,
                            const LabeledExposure& rand, int k);

// Evaluates one scheme over a dataset, macro-averaging per-user values.
// Exposures and predictions are matched by user id; users whose per-user
// metric is undefined (no positives) are skipped and recorded. Throws
// EmptyEvaluation when every user is skipped.
EvalReport evaluate_scheme(Scheme scheme,
                           std::span<const LabeledExposure> exposures,
                           std::span<const PredictionTable> predictions,
                           const Catalog& catalog, int cutoff);

}  // namespace urecall
