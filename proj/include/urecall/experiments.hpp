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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urecall/synth.hpp"
#include "urecall/types.hpp"

namespace urecall {

// Identifies a metric within a model family, e.g. rand@5 or ure@30.
struct MetricId {
  Scheme scheme = Scheme::kGoldFull;
  int cutoff = 0;
};

std::string to_string(const MetricId& id);
MetricId parse_metric_id(const std::string& text);  // "<scheme>@<cutoff>"

// Macro-averaged metric values for a family of models evaluated on one
// world: gold[model][i] is Recall@k_grid[i] on the fully-exposed data,
// traditional[model][i] is Recall@kbar_grid[i] on the random sample, and
// ure[model][i] is the unbiased estimate at k_grid[i]. All grids are shared
// across models.
struct ModelFamilyResult {
  std::vector<int> k_grid;
  std::vector<int> kbar_grid;
  std::vector<std::vector<double>> gold;
  std::vector<std::vector<double>> traditional;
  std::vector<std::vector<double>> ure;
};

// The default cutoff grid, logarithmic-ish, clipped to [1, item_count].
std::vector<int> default_k_grid(int item_count);

// Product-moment correlation. Throws UndefinedCorrelation when either
// vector has zero variance; try_pearson reports that as nullopt instead.
double pearson(std::span<const double> xs, std::span<const double> ys);
std::optional<double> try_pearson(std::span<const double> xs,
                                  std::span<const double> ys);

// Correlation between one fixed metric and gold Recall@K across a family,
// per K. Undefined points are flagged, never fabricated; k_max is the
// smallest K attaining the maximum defined correlation.
struct CorrelationCurve {
  MetricId fixed;
  std::vector<int> k_grid;
  std::vector<std::optional<double>> pearson_r;
  int k_max = 0;
};

CorrelationCurve correlation_sweep(const ModelFamilyResult& family,
                                   const MetricId& fixed,
                                   std::span<const int> k_grid);

// Evaluates every scorer of a family under all three schemes. Models keep
// the order of `scorers`; users with undefined per-user values are skipped
// inside each macro average.
ModelFamilyResult evaluate_family(const SyntheticWorld& world,
                                  std::span<const LabeledExposure> rand,
                                  std::span<const ScorerSpec> scorers,
                                  std::span<const int> k_grid,
                                  std::span<const int> kbar_grid);

// A scorer grid over fidelity x noise_sd; member seeds are derived from
// the family seed by grid position.
struct FamilySpec {
  std::vector<double> fidelities;
  std::vector<double> noise_sds;
  std::uint64_t seed = 0;
};

std::vector<ScorerSpec> family_grid(const FamilySpec& spec);

// One correlation curve per swept exposure size (or restricted cutoff),
// all from the same scorer family, with the k_max sequence.
struct SweepResult {
  std::vector<int> axis_values;
  std::vector<CorrelationCurve> curves;
  std::vector<int> k_max_sequence;
};

// Sweeps the per-user sample size with the restricted cutoff fixed.
SweepResult nbar_sweep(const SyntheticWorld& world,
                       std::span<const ScorerSpec> scorers,
                       std::span<const int> sample_sizes, int kbar,
                       std::uint64_t exposure_seed,
                       std::span<const int> k_grid);

// Sweeps the restricted cutoff with the per-user sample size fixed.
SweepResult kbar_sweep(const SyntheticWorld& world,
                       std::span<const ScorerSpec> scorers, int sample_size,
                       std::span<const int> kbars,
                       std::uint64_t exposure_seed,
                       std::span<const int> k_grid);

// Cross-cutoff correlation matrix r(estimate@K_i, gold Recall@K_j) with a
// per-row argmax summary. diagonal_dominant is true when every defined
// row attains its maximum on the diagonal.
struct CrossCorrelationMatrix {
  std::vector<int> k_targets;
  std::vector<std::vector<std::optional<double>>> r;
  std::vector<int> row_argmax;  // column index, -1 when the row is undefined
  bool diagonal_dominant = false;
};

CrossCorrelationMatrix ure_vs_gold_report(const ModelFamilyResult& family,
                                          std::span<const int> k_targets);

}  // namespace urecall
