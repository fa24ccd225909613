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
#include "urecall/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "urecall/metrics.hpp"
#include "urecall/rng.hpp"

namespace urecall {
namespace {

constexpr std::uint64_t kStreamFamily = 0xfa31;

std::vector<double> column(const std::vector<std::vector<double>>& values,
                           std::size_t index) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row[index]);
  return out;
}

std::size_t grid_index(std::span<const int> grid, int k, const char* what) {
  const auto it = std::find(grid.begin(), grid.end(), k);
  if (it == grid.end()) {
    throw UsageError(std::string(what) + " cutoff " + std::to_string(k) +
                     " is not on the evaluation grid");
  }
  return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

std::string to_string(const MetricId& id) {
  return std::string(to_string(id.scheme)) + "@" + std::to_string(id.cutoff);
}

MetricId parse_metric_id(const std::string& text) {
  const auto at = text.find('@');
  if (at == std::string::npos) {
    throw UsageError("metric id '" + text + "' is not <scheme>@<cutoff>");
  }
  const std::string scheme = text.substr(0, at);
  MetricId id;
  if (scheme == "full") {
    id.scheme = Scheme::kGoldFull;
  } else if (scheme == "rand") {
    id.scheme = Scheme::kTraditionalRand;
  } else if (scheme == "ure") {
    id.scheme = Scheme::kUre;
  } else {
    throw UsageError("unknown scheme '" + scheme + "'");
  }
  try {
    id.cutoff = std::stoi(text.substr(at + 1));
  } catch (const std::exception&) {
    throw UsageError("metric id '" + text + "' has a non-integer cutoff");
  }
  return id;
}

std::vector<int> default_k_grid(int item_count) {
  static constexpr int kBase[] = {1,  2,  3,  4,  5,   6,   7,   8,   9,  10,
                                  15, 20, 30, 50, 75, 100, 150, 200, 300, 500};
  // Capped at item_count - 1: the estimator needs a (K+1)-th item, and the
  // gold metric at K = item_count is constantly 1 (undefined correlation).
  std::vector<int> grid;
  for (const int k : kBase) {
    if (k <= item_count - 1) grid.push_back(k);
  }
  if (grid.empty()) grid.push_back(1);
  return grid;
}

std::optional<double> try_pearson(std::span<const double> xs,
                                  std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw UsageError("pearson needs two equal-length vectors of size >= 2");
  }
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const auto r = try_pearson(xs, ys);
  if (!r) throw UndefinedCorrelation("zero variance in a metric vector");
  return *r;
}

std::vector<ScorerSpec> family_grid(const FamilySpec& spec) {
  if (spec.fidelities.empty() || spec.noise_sds.empty()) {
    throw UsageError("family grid must not be empty");
  }
  std::vector<ScorerSpec> scorers;
  scorers.reserve(spec.fidelities.size() * spec.noise_sds.size());
  std::uint64_t member = 0;
  for (const double fidelity : spec.fidelities) {
    for (const double noise_sd : spec.noise_sds) {
      scorers.push_back(
          {fidelity, noise_sd, derive_seed(spec.seed, kStreamFamily, member)});
      ++member;
    }
  }
  return scorers;
}

ModelFamilyResult evaluate_family(const SyntheticWorld& world,
                                  std::span<const LabeledExposure> rand,
                                  std::span<const ScorerSpec> scorers,
                                  std::span<const int> k_grid,
                                  std::span<const int> kbar_grid) {
  ModelFamilyResult result;
  result.k_grid.assign(k_grid.begin(), k_grid.end());
  result.kbar_grid.assign(kbar_grid.begin(), kbar_grid.end());

  const int item_count = world.catalog.item_count;
  for (const int k : k_grid) {
    if (k < 1 || k >= item_count) {
      throw InvalidCutoff("grid cutoff " + std::to_string(k) +
                          " outside [1..item_count-1]");
    }
  }
  if (rand.size() != world.full.size()) {
    throw UsageError("random exposure does not cover the world's users");
  }

  for (const ScorerSpec& scorer : scorers) {
    const auto tables = make_scorer(world, scorer);
    std::vector<double> gold(k_grid.size(), 0.0);
    std::vector<double> ure(k_grid.size(), 0.0);
    std::vector<double> traditional(kbar_grid.size(), 0.0);
    std::size_t gold_users = 0;
    std::size_t rand_users = 0;

    for (std::size_t u = 0; u < tables.size(); ++u) {
      const auto ranked = build_ranked_catalog(tables[u], world.catalog);

      // Sorted full ranks of the user's positive items; recall at every
      // grid cutoff follows by counting ranks <= K.
      std::vector<std::int32_t> positive_ranks;
      for (const auto& entry : world.full[u].entries) {
        if (entry.label != 0) positive_ranks.push_back(ranked.rank(entry.item));
      }
      std::sort(positive_ranks.begin(), positive_ranks.end());
      if (!positive_ranks.empty()) {
        ++gold_users;
        for (std::size_t i = 0; i < k_grid.size(); ++i) {
          const auto within = std::upper_bound(positive_ranks.begin(),
                                               positive_ranks.end(), k_grid[i]) -
                              positive_ranks.begin();
          gold[i] += static_cast<double>(within) /
                     static_cast<double>(positive_ranks.size());
        }
      }

      std::vector<std::int32_t> observed_positive_ranks;
      for (const auto& entry : rand[u].entries) {
        if (entry.label != 0) {
          observed_positive_ranks.push_back(ranked.rank(entry.item));
        }
      }
      std::sort(observed_positive_ranks.begin(), observed_positive_ranks.end());
      if (!observed_positive_ranks.empty()) {
        ++rand_users;
        for (std::size_t i = 0; i < k_grid.size(); ++i) {
          const auto within =
              std::upper_bound(observed_positive_ranks.begin(),
                               observed_positive_ranks.end(), k_grid[i]) -
              observed_positive_ranks.begin();
          ure[i] += static_cast<double>(within) /
                    static_cast<double>(observed_positive_ranks.size());
        }
        for (std::size_t i = 0; i < kbar_grid.size(); ++i) {
          traditional[i] +=
              traditional_recall_on_rand(tables[u], rand[u], kbar_grid[i]);
        }
      }
    }

    if (gold_users == 0 || rand_users == 0) {
      throw EmptyEvaluation("every user was skipped for a family member");
    }
    for (auto& v : gold) v /= static_cast<double>(gold_users);
    for (auto& v : ure) v /= static_cast<double>(rand_users);
    for (auto& v : traditional) v /= static_cast<double>(rand_users);
    result.gold.push_back(std::move(gold));
    result.ure.push_back(std::move(ure));
    result.traditional.push_back(std::move(traditional));
  }
  return result;
}

CorrelationCurve correlation_sweep(const ModelFamilyResult& family,
                                   const MetricId& fixed,
                                   std::span<const int> k_grid) {
  if (family.gold.size() < 2) {
    throw UsageError("correlation needs at least two models");
  }

  std::vector<double> fixed_values;
  switch (fixed.scheme) {
    case Scheme::kGoldFull:
      fixed_values =
          column(family.gold, grid_index(family.k_grid, fixed.cutoff, "gold"));
      break;
    case Scheme::kTraditionalRand:
      fixed_values = column(
          family.traditional,
          grid_index(family.kbar_grid, fixed.cutoff, "restricted"));
      break;
    case Scheme::kUre:
      fixed_values = column(
          family.ure, grid_index(family.k_grid, fixed.cutoff, "estimate"));
      break;
  }

  CorrelationCurve curve;
  curve.fixed = fixed;
  curve.k_grid.assign(k_grid.begin(), k_grid.end());
  curve.pearson_r.reserve(k_grid.size());

  bool any_defined = false;
  double best = 0.0;
  for (const int k : k_grid) {
    const auto gold =
        column(family.gold, grid_index(family.k_grid, k, "gold"));
    const auto r = try_pearson(fixed_values, gold);
    curve.pearson_r.push_back(r);
    if (r && (!any_defined || *r > best)) {
      any_defined = true;
      best = *r;
      curve.k_max = k;
    }
  }
  if (!any_defined) {
    throw EmptyCurve("every grid point has an undefined correlation");
  }
  return curve;
}

SweepResult nbar_sweep(const SyntheticWorld& world,
                       std::span<const ScorerSpec> scorers,
                       std::span<const int> sample_sizes, int kbar,
                       std::uint64_t exposure_seed,
                       std::span<const int> k_grid) {
  SweepResult result;
  const std::vector<int> kbar_grid{kbar};
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    const int sample_size = sample_sizes[i];
    // Independent draw per swept size, on its own stream.
    const auto rand =
        sample_random_exposure(world.full, world.catalog, sample_size,
                               derive_seed(exposure_seed, 0xba45, i));
    const auto family =
        evaluate_family(world, rand, scorers, k_grid, kbar_grid);
    auto curve = correlation_sweep(
        family, MetricId{Scheme::kTraditionalRand, kbar}, k_grid);
    result.axis_values.push_back(sample_size);
    result.k_max_sequence.push_back(curve.k_max);
    result.curves.push_back(std::move(curve));
  }
  return result;
}

SweepResult kbar_sweep(const SyntheticWorld& world,
                       std::span<const ScorerSpec> scorers, int sample_size,
                       std::span<const int> kbars,
                       std::uint64_t exposure_seed,
                       std::span<const int> k_grid) {
  SweepResult result;
  const auto rand = sample_random_exposure(
      world.full, world.catalog, sample_size, derive_seed(exposure_seed, 0xba45, 0));
  std::vector<int> kbar_grid(kbars.begin(), kbars.end());
  const auto family = evaluate_family(world, rand, scorers, k_grid, kbar_grid);
  for (const int kbar : kbars) {
    auto curve = correlation_sweep(
        family, MetricId{Scheme::kTraditionalRand, kbar}, k_grid);
    result.axis_values.push_back(kbar);
    result.k_max_sequence.push_back(curve.k_max);
    result.curves.push_back(std::move(curve));
  }
  return result;
}

CrossCorrelationMatrix ure_vs_gold_report(const ModelFamilyResult& family,
                                          std::span<const int> k_targets) {
  CrossCorrelationMatrix matrix;
  matrix.k_targets.assign(k_targets.begin(), k_targets.end());
  matrix.diagonal_dominant = true;

  for (std::size_t i = 0; i < k_targets.size(); ++i) {
    const auto estimate = column(
        family.ure, grid_index(family.k_grid, k_targets[i], "estimate"));
    std::vector<std::optional<double>> row;
    int argmax = -1;
    double best = 0.0;
    for (std::size_t j = 0; j < k_targets.size(); ++j) {
      const auto gold = column(
          family.gold, grid_index(family.k_grid, k_targets[j], "gold"));
      const auto r = try_pearson(estimate, gold);
      row.push_back(r);
      if (r && (argmax < 0 || *r > best)) {
        argmax = static_cast<int>(j);
        best = *r;
      }
    }
    matrix.r.push_back(std::move(row));
    matrix.row_argmax.push_back(argmax);
    if (argmax != static_cast<int>(i)) matrix.diagonal_dominant = false;
  }
  return matrix;
}

}  // namespace urecall
