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
#include <vector>

#include "urecall/types.hpp"

namespace urecall {

// Synthetic fully-exposed world. Labels are Bernoulli(positive_rate) per
// (user, item): a standard-normal latent preference is drawn and the label
// is 1 iff the latent exceeds the normal quantile at 1 - rate, so labels
// and latents are consistent and a perfect-fidelity scorer is a perfect
// ranker. When positive_rate_max > 0 the rate is drawn uniformly per user
// from [positive_rate, positive_rate_max].
struct WorldSpec {
  int user_count = 0;
  int item_count = 0;
  double positive_rate = 0.1;
  double positive_rate_max = 0.0;
  std::uint64_t seed = 0;
};

// A synthetic scorer: score(u, i) = fidelity * latent(u, i) +
// (1 - fidelity) * noise_sd * z(u, i) with z i.i.d. standard normal.
// fidelity 1 ranks by latent preference exactly; fidelity 0 is independent
// of the labels.
struct ScorerSpec {
  double fidelity = 1.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticWorld {
  Catalog catalog;
  std::vector<LabeledExposure> full;            // kind=Full, users 1..U
  std::vector<std::vector<double>> latents;     // [user-1][item-1]
};

// Deterministic in the spec; per-user streams are derived positionally so
// adding users never perturbs existing users' draws.
SyntheticWorld generate_full(const WorldSpec& spec);

// Per user, a uniform sample of sample_size distinct items with labels
// copied from the fully-exposed data. Deterministic given the seed.
std::vector<LabeledExposure> sample_random_exposure(
    std::span<const LabeledExposure> full, const Catalog& catalog,
    int sample_size, std::uint64_t seed);

// One prediction table per user for the given scorer.
std::vector<PredictionTable> make_scorer(const SyntheticWorld& world,
                                         const ScorerSpec& spec);

// Inverse standard normal CDF (Acklam's rational approximation, refined by
// one Halley step; absolute error well below 1e-12).
double normal_quantile(double p);

}  // namespace urecall
