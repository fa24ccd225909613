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
#include "urecall/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "urecall/rng.hpp"

namespace urecall {
namespace {

// Stream purpose tags for positional seed derivation.
constexpr std::uint64_t kStreamLatent = 0x1a7e;
constexpr std::uint64_t kStreamRate = 0x4a7e;
constexpr std::uint64_t kStreamExposure = 0xe590;
constexpr std::uint64_t kStreamScorer = 0x5c04;

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();

  // Acklam's piecewise rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley refinement step against the exact CDF.
  const double e = standard_normal_cdf(x) - p;
  const double u = e * std::numbers::sqrt2 * std::sqrt(std::numbers::pi) *
                   std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

SyntheticWorld generate_full(const WorldSpec& spec) {
  if (spec.user_count < 1 || spec.item_count < 1) {
    throw UsageError("world needs at least one user and one item");
  }
  if (spec.positive_rate <= 0.0 || spec.positive_rate > 1.0) {
    throw UsageError("positive_rate must be in (0, 1]");
  }
  if (spec.positive_rate_max != 0.0 &&
      (spec.positive_rate_max < spec.positive_rate ||
       spec.positive_rate_max > 1.0)) {
    throw UsageError("positive_rate_max must be in [positive_rate, 1]");
  }

  SyntheticWorld world;
  world.catalog.item_count = spec.item_count;
  world.full.reserve(spec.user_count);
  world.latents.reserve(spec.user_count);

  for (int u = 1; u <= spec.user_count; ++u) {
    double rate = spec.positive_rate;
    if (spec.positive_rate_max > 0.0) {
      Rng rate_rng(derive_seed(spec.seed, kStreamRate, u));
      rate = spec.positive_rate +
             (spec.positive_rate_max - spec.positive_rate) *
                 rate_rng.uniform01();
    }
    const double threshold = normal_quantile(1.0 - rate);

    Rng rng(derive_seed(spec.seed, kStreamLatent, u));
    LabeledExposure exposure;
    exposure.user = u;
    exposure.kind = ExposureKind::kFull;
    exposure.entries.reserve(spec.item_count);
    std::vector<double> latent(spec.item_count);
    for (int i = 0; i < spec.item_count; ++i) {
      latent[i] = rng.normal();
      exposure.entries.push_back(
          {static_cast<ItemId>(i + 1),
           static_cast<std::uint8_t>(latent[i] > threshold ? 1 : 0)});
    }
    world.full.push_back(std::move(exposure));
    world.latents.push_back(std::move(latent));
  }
  return world;
}

std::vector<LabeledExposure> sample_random_exposure(
    std::span<const LabeledExposure> full, const Catalog& catalog,
    int sample_size, std::uint64_t seed) {
  if (sample_size < 1 || sample_size > catalog.item_count) {
    throw InvalidSampleSize("sample size " + std::to_string(sample_size) +
                            " outside [1.." +
                            std::to_string(catalog.item_count) + "]");
  }

  std::vector<LabeledExposure> sampled;
  sampled.reserve(full.size());
  std::vector<ItemId> pool(catalog.item_count);
  for (const auto& exposure : full) {
    std::iota(pool.begin(), pool.end(), ItemId{1});
    Rng rng(derive_seed(seed, kStreamExposure, exposure.user));
    // Partial Fisher-Yates; the first sample_size entries are the sample.
    for (int i = 0; i < sample_size; ++i) {
      const int j = i + static_cast<int>(rng.below(
                            static_cast<std::uint64_t>(pool.size()) - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<ItemId> picked(pool.begin(), pool.begin() + sample_size);
    std::sort(picked.begin(), picked.end());

    LabeledExposure out;
    out.user = exposure.user;
    out.kind = ExposureKind::kRandom;
    out.entries.reserve(sample_size);
    for (const ItemId item : picked) {
      out.entries.push_back({item, exposure.entries[item - 1].label});
    }
    sampled.push_back(std::move(out));
  }
  return sampled;
}

std::vector<PredictionTable> make_scorer(const SyntheticWorld& world,
                                         const ScorerSpec& spec) {
  if (spec.fidelity < 0.0 || spec.fidelity > 1.0) {
    throw UsageError("fidelity must be in [0, 1]");
  }
  if (spec.noise_sd < 0.0) {
    throw UsageError("noise_sd must be >= 0");
  }

  std::vector<PredictionTable> tables;
  tables.reserve(world.latents.size());
  for (std::size_t u = 0; u < world.latents.size(); ++u) {
    const UserId user = world.full[u].user;
    Rng rng(derive_seed(spec.seed, kStreamScorer, user));
    PredictionTable table;
    table.user = user;
    table.scores.resize(world.latents[u].size());
    for (std::size_t i = 0; i < world.latents[u].size(); ++i) {
      table.scores[i] = spec.fidelity * world.latents[u][i] +
                        (1.0 - spec.fidelity) * spec.noise_sd * rng.normal();
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace urecall
